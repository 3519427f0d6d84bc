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

#ifndef PKTC_HEADERS_HPP
#define PKTC_HEADERS_HPP

#include <string_view>
#include <type_traits>

#include "pktc/bytes.hpp"

namespace pktc {

inline constexpr std::uint16_t kEtherTypeIpv6 = 0x86DD;
inline constexpr std::uint8_t kRoutingTypeSrv6 = 4;
inline constexpr std::uint8_t kIcmpv6PktTooBigType = 2;

template <typename... Ts>
struct type_list
{};

/*
 * Typed header values. Each struct declares
 *   - name:          the registry id
 *   - predecessors:  type_list of headers allowed directly in front of it
 *                    (empty for a chain root)
 *   - min_size:      bytes needed before the size rule can be evaluated
 *   - decode/encode: network byte order <-> host values
 *
 * decode() throws ParseError on truncation or a type/version mismatch;
 * encode() throws EncodeError when the value breaks the header invariants.
 */

struct EthHdr
{
    static constexpr std::string_view name = "EthHdr";
    using predecessors = type_list<>;
    static constexpr std::size_t min_size = 14;

    MacAddr dst{};
    MacAddr src{};
    std::uint16_t ether_type = kEtherTypeIpv6;

    std::size_t size() const noexcept { return 14; }
    static EthHdr decode(ByteView in);
    void encode_to(MutableByteView out) const;
    Bytes encode() const;

    bool operator==(const EthHdr&) const = default;
};

struct Ipv6Hdr
{
    static constexpr std::string_view name = "Ipv6Hdr";
    using predecessors = type_list<EthHdr>;
    static constexpr std::size_t min_size = 40;

    std::uint8_t version = 6;
    std::uint8_t traffic_class = 0;
    std::uint32_t flow_label = 0; // 20 bits
    std::uint16_t payload_len = 0;
    std::uint8_t next_header = 0;
    std::uint8_t hop_limit = 64;
    Ipv6Addr src{};
    Ipv6Addr dst{};

    std::size_t size() const noexcept { return 40; }
    static Ipv6Hdr decode(ByteView in);
    void encode_to(MutableByteView out) const;
    Bytes encode() const;

    bool operator==(const Ipv6Hdr&) const = default;
};

/// Routing header, routing type 4. Stackable, so it may follow itself.
struct Srv6RoutingHdr
{
    static constexpr std::string_view name = "Srv6RoutingHdr";
    using predecessors = type_list<Ipv6Hdr, Srv6RoutingHdr>;
    static constexpr std::size_t min_size = 8;

    std::uint8_t next_header = 0;
    std::uint8_t hdr_ext_len = 0;
    std::uint8_t routing_type = kRoutingTypeSrv6;
    std::uint8_t segments_left = 0;
    std::uint8_t last_entry = 0;
    std::uint8_t flags = 0;
    std::uint16_t tag = 0;
    std::vector<Ipv6Addr> segments;

    std::size_t size() const noexcept { return 8 + 8 * std::size_t{hdr_ext_len}; }

    /// Builds a consistent header: hdr_ext_len and last_entry derived from
    /// the segment list.
    static Srv6RoutingHdr with_segments(std::vector<Ipv6Addr> segs,
                                        std::uint8_t next_header,
                                        std::uint8_t segments_left);

    static Srv6RoutingHdr decode(ByteView in);
    void encode_to(MutableByteView out) const;
    Bytes encode() const;

    bool operator==(const Srv6RoutingHdr&) const = default;
};

struct TcpHdr
{
    static constexpr std::string_view name = "TcpHdr";
    using predecessors = type_list<Ipv6Hdr, Srv6RoutingHdr>;
    /// Network-layer header that supplies the checksum pseudo-header.
    using enclosing = Ipv6Hdr;
    static constexpr std::size_t min_size = 20;

    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint32_t seq = 0;
    std::uint32_t ack = 0;
    std::uint8_t data_offset = 5; // 32-bit words
    std::uint8_t reserved = 0;    // 3 bits, carried through unchanged
    std::uint16_t flags = 0;      // 9 bits
    std::uint16_t window = 0;
    std::uint16_t checksum = 0;
    std::uint16_t urgent_ptr = 0;
    Bytes options; // opaque, (data_offset - 5) * 4 bytes

    std::size_t size() const noexcept { return std::size_t{data_offset} * 4; }
    static TcpHdr decode(ByteView in);
    void encode_to(MutableByteView out) const;
    Bytes encode() const;

    bool operator==(const TcpHdr&) const = default;
};

/// ICMPv6 Packet Too Big (type 2, code 0). The invoking packet extends to
/// the end of the buffer it was decoded from.
struct Icmpv6PktTooBig
{
    static constexpr std::string_view name = "Icmpv6PktTooBig";
    using predecessors = type_list<Ipv6Hdr, Srv6RoutingHdr>;
    using enclosing = Ipv6Hdr;
    static constexpr std::size_t min_size = 8;

    std::uint8_t msg_type = kIcmpv6PktTooBigType;
    std::uint8_t code = 0;
    std::uint16_t checksum = 0;
    std::uint32_t mtu = 0;
    Bytes invoking_packet;

    std::size_t size() const noexcept { return 8 + invoking_packet.size(); }
    static Icmpv6PktTooBig decode(ByteView in);
    void encode_to(MutableByteView out) const;
    Bytes encode() const;

    bool operator==(const Icmpv6PktTooBig&) const = default;
};

// Compile-time order checking over the typed headers. A chain written as
// template arguments is valid iff the first is a root and each header lists
// its left neighbour among its predecessors:
//
//   static_assert(valid_order<EthHdr, Ipv6Hdr, TcpHdr>);

template <typename T, typename List>
struct list_contains;

template <typename T, typename... Ts>
struct list_contains<T, type_list<Ts...>>
    : std::bool_constant<(std::is_same_v<T, Ts> || ...)>
{};

template <typename H>
inline constexpr bool is_chain_root =
    std::is_same_v<typename H::predecessors, type_list<>>;

template <typename Prev, typename Next>
inline constexpr bool may_follow =
    list_contains<Prev, typename Next::predecessors>::value;

template <typename... Hs>
struct order_check;

template <typename H>
struct order_check<H> : std::true_type
{};

template <typename A, typename B, typename... Rest>
struct order_check<A, B, Rest...>
    : std::bool_constant<may_follow<A, B> && order_check<B, Rest...>::value>
{};

template <typename First, typename... Rest>
inline constexpr bool valid_order =
    is_chain_root<First> && order_check<First, Rest...>::value;

} // namespace pktc

#endif /* PKTC_HEADERS_HPP */
