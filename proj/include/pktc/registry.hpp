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

#ifndef PKTC_REGISTRY_HPP
#define PKTC_REGISTRY_HPP

#include <atomic>
#include <functional>
#include <set>
#include <unordered_map>
#include <variant>

#include "pktc/packet.hpp"

namespace pktc {

/// Result of a field accessor: an integer (widened to 64 bits) or raw bytes.
using Value = std::variant<std::uint64_t, Bytes>;

enum class ValueKind { Integer, Bytes };

std::string format_value(const Value& v);

struct FieldAccessor
{
    std::string name;
    ValueKind kind = ValueKind::Integer;
    std::function<Value(const Packet&, const ChainEntry&)> read;
};

/*
 * Everything the framework knows about one header type.
 *
 * size_rule receives the bytes from the header start to the end of the
 * packet (at least min_size of them) and returns the header length; it lets
 * variable-length headers parse without special cases. next_header names
 * the header that follows, or nothing when the rest is payload.
 */
struct HeaderDescriptor
{
    std::string id;
    std::size_t min_size = 0;
    std::function<std::size_t(ByteView rest)> size_rule;
    std::function<void(ByteView header)> validate;
    std::function<std::optional<std::string>(ByteView header, ByteView after)> next_header;
    std::function<Bytes(ByteView header)> reserialize;
    std::set<std::string> predecessors; // empty: chain root
    std::optional<std::string> parameter;
    std::vector<FieldAccessor> accessors;
};

class RegistryError : public Error
{
public:
    using Error::Error;
};

/// Order specification failed verification; the message names the pair.
class OrderError : public Error
{
public:
    using Error::Error;
};

struct OrderElement
{
    std::string type;
    std::optional<std::string> parameter;

    std::string to_string() const;
    bool operator==(const OrderElement&) const = default;
};

struct OrderSpec
{
    std::vector<OrderElement> elements;

    std::string to_string() const;
    bool operator==(const OrderSpec&) const = default;
};

/// OrderSpec with names replaced by registry indices.
struct ResolvedOrder
{
    struct Element
    {
        HeaderTypeId type;
        std::optional<HeaderTypeId> parameter;
    };
    std::vector<Element> elements;
    OrderSpec source;
};

struct ChainMatch
{
    enum class Kind { Ok, LengthMismatch, TypeMismatch, ParameterMissing };

    Kind kind = Kind::Ok;
    std::size_t index = 0;
    std::string message;

    bool ok() const noexcept { return kind == Kind::Ok; }
};

/*
 * Registry of header descriptors. Written during setup, then frozen and
 * shared read-only. Every predecessor/parameter reference must name an
 * already registered header (or the header itself, for stackable ones).
 */
class HeaderRegistry
{
public:
    HeaderRegistry() = default;
    HeaderRegistry(const HeaderRegistry&) = delete;
    HeaderRegistry& operator=(const HeaderRegistry&) = delete;

    HeaderTypeId register_header(HeaderDescriptor descriptor);
    void freeze() noexcept { frozen_ = true; }
    bool frozen() const noexcept { return frozen_; }

    std::size_t size() const noexcept { return descriptors_.size(); }
    const HeaderDescriptor& descriptor(HeaderTypeId id) const { return descriptors_.at(id); }
    const std::string& name(HeaderTypeId id) const { return descriptors_.at(id).id; }
    std::optional<HeaderTypeId> find(std::string_view id) const;
    HeaderTypeId require(std::string_view id) const; // throws RegistryError
    std::optional<std::size_t> accessor_index(HeaderTypeId id, std::string_view accessor) const;
    std::optional<HeaderTypeId> root() const noexcept { return root_; }

    /// Checks that the spec is non-empty, starts at a root, and that every
    /// adjacent pair (A, B) has A among B's predecessors. A parameter must be
    /// the header's declared parameter and appear earlier in the spec.
    /// Throws OrderError. Runs at contract elaboration, never per packet.
    ResolvedOrder verify_order(const OrderSpec& spec) const;
    std::uint64_t verify_order_calls() const noexcept { return verify_calls_.load(); }

private:
    std::vector<HeaderDescriptor> descriptors_;
    std::unordered_map<std::string, HeaderTypeId> by_name_;
    std::vector<std::unordered_map<std::string, std::size_t>> accessor_by_name_;
    std::optional<HeaderTypeId> root_;
    bool frozen_ = false;
    mutable std::atomic<std::uint64_t> verify_calls_{0};
};

/// Checks the packet's parsed chain against the order element-for-element.
/// Parameters must appear earlier in the chain.
ChainMatch match_chain(const Packet& packet, const ResolvedOrder& order);
ChainMatch match_chain(const Packet& packet, const OrderSpec& spec);

/// Adds EthHdr, Ipv6Hdr, Srv6RoutingHdr, TcpHdr and Icmpv6PktTooBig.
void register_standard_headers(HeaderRegistry& registry);

} // namespace pktc

#endif /* PKTC_REGISTRY_HPP */
