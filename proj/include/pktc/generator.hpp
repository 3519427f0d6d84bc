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

#ifndef PKTC_GENERATOR_HPP
#define PKTC_GENERATOR_HPP

#include <random>

#include "pktc/pcap.hpp"
#include "pktc/registry.hpp"

namespace pktc {

enum class PacketTemplate {
    Tcp6, // Eth/IPv6/TCP
    Srv6, // Eth/IPv6/SRH, no next header, opaque payload
};

std::string_view to_string(PacketTemplate t) noexcept;
std::optional<PacketTemplate> parse_template(std::string_view text) noexcept;

/// Order spec every packet of the template matches.
OrderSpec template_order(PacketTemplate t);

struct GeneratorSpec
{
    std::size_t count = 100;
    PacketTemplate kind = PacketTemplate::Tcp6;
    // IPv6 payload_len, drawn uniformly from [min, max]. Equal for fixed.
    std::uint16_t payload_len_min = 1300;
    std::uint16_t payload_len_max = 1300;
    std::uint64_t seed = 1;

    /// Throws ConfigError when the range is empty or cannot hold the
    /// template's headers.
    void validate() const;
};

/// Smallest IPv6 payload_len the template can carry.
std::uint16_t min_payload_len(PacketTemplate t) noexcept;
/// Largest payload_len that still fits a 65535-byte pcap record.
inline constexpr std::uint16_t kMaxGeneratedPayloadLen = 65535 - 14 - 40;

/// Parses "1300" or "64-1500" into the spec's range. Throws ConfigError.
void parse_payload_len(std::string_view text, GeneratorSpec& spec);

/// One packet. TCP checksums are valid; TCP options are NOP padding ending
/// in EOL; SRv6 carries 1..4 segments with segments_left <= last_entry + 1.
Bytes build_tcp6(std::mt19937_64& rng, std::uint16_t payload_len);
Bytes build_srv6(std::mt19937_64& rng, std::uint16_t payload_len);

/// Same seed, same bytes. Timestamps count up from a fixed epoch.
std::vector<PcapRecord> generate(const GeneratorSpec& spec);

} // namespace pktc

#endif /* PKTC_GENERATOR_HPP */
