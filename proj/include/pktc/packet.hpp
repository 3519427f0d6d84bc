/*
Copyright (c) 2026 The pktc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef PKTC_PACKET_HPP
#define PKTC_PACKET_HPP

#include <optional>
#include <string_view>

#include "pktc/bytes.hpp"

namespace pktc {

class HeaderRegistry;
const HeaderRegistry& standard_registry();

/// Index of a descriptor inside its registry.
using HeaderTypeId = std::uint16_t;

struct ChainEntry
{
    HeaderTypeId type = 0;
    std::uint16_t occurrence = 0; // n-th header of this type in the chain
    std::size_t offset = 0;
    std::size_t length = 0;

    std::size_t end() const noexcept { return offset + length; }
    bool operator==(const ChainEntry&) const = default;
};

/*
 * An owned frame plus the chain of headers parsed out of it.
 *
 * Parsing never modifies the bytes. Chain offsets are strictly increasing and
 * non-overlapping; payload_offset() is the end of the last parsed header (0
 * when nothing is parsed). Mutation goes through put() (same-size re-encode
 * in place) or splice() followed by reparse().
 */
class Packet
{
public:
    Packet();
    explicit Packet(Bytes bytes, const HeaderRegistry& registry = standard_registry());

    /// Parses from the registry's root header, following each header's
    /// next-header rule until it yields nothing. A malformed header stops the
    /// walk and is recorded in parse_error(); it does not throw.
    static Packet parse(Bytes bytes, const HeaderRegistry& registry = standard_registry());

    /// Parses one header of the given type at byte offset `at` and appends it
    /// to the chain. Returns the consumed length. Throws ParseError.
    std::size_t parse_header(HeaderTypeId type, std::size_t at);
    std::size_t parse_header(std::string_view type_name, std::size_t at);

    /// Continues the automatic walk from the current end of the chain.
    void parse_rest();
    void reparse();

    const Bytes& bytes() const noexcept { return bytes_; }
    ByteView view() const noexcept { return bytes_; }
    std::size_t size() const noexcept { return bytes_.size(); }
    std::span<const ChainEntry> chain() const noexcept { return chain_; }
    std::size_t payload_offset() const noexcept { return payload_offset_; }
    const std::optional<std::string>& parse_error() const noexcept { return parse_error_; }
    const HeaderRegistry& registry() const noexcept { return *registry_; }

    const ChainEntry* find(HeaderTypeId type, std::uint16_t occurrence = 0) const noexcept;
    const ChainEntry* find(std::string_view type_name, std::uint16_t occurrence = 0) const;
    std::optional<std::size_t> index_of(HeaderTypeId type, std::uint16_t occurrence = 0) const noexcept;

    ByteView header_bytes(const ChainEntry& e) const noexcept
    {
        return ByteView(bytes_).subspan(e.offset, e.length);
    }

    template <typename H>
    H get(std::size_t chain_index) const
    {
        return H::decode(header_bytes(chain_.at(chain_index)));
    }

    /// Re-encodes `h` over the chain entry's bytes. Throws EncodeError when
    /// the encoded size differs from the parsed length.
    template <typename H>
    void put(std::size_t chain_index, const H& h)
    {
        const ChainEntry& e = chain_.at(chain_index);
        if (h.size() != e.length)
            throw EncodeError(std::string(H::name) + ": in-place write changes size");
        h.encode_to(MutableByteView(bytes_).subspan(e.offset, e.length));
    }

    /// Replaces `erase` bytes at `at` with `insert`. Clears the chain; call
    /// reparse() afterwards.
    void splice(std::size_t at, std::size_t erase, ByteView insert);

    /// Emits every parsed header through its descriptor's encoder, followed by
    /// the unparsed tail. Equals bytes() for an unmodified well-formed packet.
    Bytes serialize() const;

    Bytes release() && { return std::move(bytes_); }

private:
    Bytes bytes_;
    std::vector<ChainEntry> chain_;
    std::size_t payload_offset_ = 0;
    const HeaderRegistry* registry_;
    std::optional<std::string> parse_error_;
};

} // namespace pktc

#endif /* PKTC_PACKET_HPP */
