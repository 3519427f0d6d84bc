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

#include "pktc/headers.hpp"

#include <algorithm>

namespace pktc {

namespace {

void need(ByteView in, std::size_t n, std::string_view what)
{
    if (in.size() < n)
        throw ParseError(std::string(what) + ": truncated buffer (need "
                         + std::to_string(n) + " bytes, have "
                         + std::to_string(in.size()) + ")");
}

void need_out(MutableByteView out, std::size_t n, std::string_view what)
{
    if (out.size() < n)
        throw EncodeError(std::string(what) + ": output buffer too small");
}

template <typename H>
Bytes encode_owned(const H& h)
{
    Bytes out(h.size());
    h.encode_to(out);
    return out;
}

} // namespace

// EthHdr

EthHdr EthHdr::decode(ByteView in)
{
    need(in, 14, name);
    EthHdr h;
    h.dst = load_array<6>(in.data());
    h.src = load_array<6>(in.data() + 6);
    h.ether_type = load_be16(in.data() + 12);
    return h;
}

void EthHdr::encode_to(MutableByteView out) const
{
    need_out(out, 14, name);
    std::copy(dst.begin(), dst.end(), out.begin());
    std::copy(src.begin(), src.end(), out.begin() + 6);
    store_be16(out.data() + 12, ether_type);
}

Bytes EthHdr::encode() const { return encode_owned(*this); }

// Ipv6Hdr

Ipv6Hdr Ipv6Hdr::decode(ByteView in)
{
    need(in, 40, name);
    const std::uint32_t word = load_be32(in.data());
    Ipv6Hdr h;
    h.version = static_cast<std::uint8_t>(word >> 28);
    if (h.version != 6)
        throw ParseError("Ipv6Hdr: version nibble is "
                         + std::to_string(h.version) + ", expected 6");
    h.traffic_class = static_cast<std::uint8_t>(word >> 20);
    h.flow_label = word & 0xfffff;
    h.payload_len = load_be16(in.data() + 4);
    h.next_header = in[6];
    h.hop_limit = in[7];
    h.src = load_array<16>(in.data() + 8);
    h.dst = load_array<16>(in.data() + 24);
    return h;
}

void Ipv6Hdr::encode_to(MutableByteView out) const
{
    if (version != 6)
        throw EncodeError("Ipv6Hdr: version must be 6");
    if (flow_label > 0xfffff)
        throw EncodeError("Ipv6Hdr: flow label exceeds 20 bits");
    need_out(out, 40, name);
    store_be32(out.data(), (std::uint32_t{6} << 28)
                               | (std::uint32_t{traffic_class} << 20)
                               | flow_label);
    store_be16(out.data() + 4, payload_len);
    out[6] = next_header;
    out[7] = hop_limit;
    std::copy(src.begin(), src.end(), out.begin() + 8);
    std::copy(dst.begin(), dst.end(), out.begin() + 24);
}

Bytes Ipv6Hdr::encode() const { return encode_owned(*this); }

// Srv6RoutingHdr

Srv6RoutingHdr Srv6RoutingHdr::with_segments(std::vector<Ipv6Addr> segs,
                                             std::uint8_t next_header,
                                             std::uint8_t segments_left)
{
    if (segs.empty() || segs.size() > 127)
        throw EncodeError("Srv6RoutingHdr: segment count must be in [1, 127]");
    Srv6RoutingHdr h;
    h.next_header = next_header;
    h.hdr_ext_len = static_cast<std::uint8_t>(2 * segs.size());
    h.last_entry = static_cast<std::uint8_t>(segs.size() - 1);
    h.segments_left = segments_left;
    h.segments = std::move(segs);
    return h;
}

Srv6RoutingHdr Srv6RoutingHdr::decode(ByteView in)
{
    need(in, 8, name);
    Srv6RoutingHdr h;
    h.next_header = in[0];
    h.hdr_ext_len = in[1];
    h.routing_type = in[2];
    h.segments_left = in[3];
    h.last_entry = in[4];
    h.flags = in[5];
    h.tag = load_be16(in.data() + 6);
    if (h.routing_type != kRoutingTypeSrv6)
        throw ParseError("Srv6RoutingHdr: routing type is "
                         + std::to_string(h.routing_type) + ", expected 4");
    need(in, h.size(), name);
    if (h.hdr_ext_len % 2 != 0
        || std::size_t{h.last_entry} + 1 != std::size_t{h.hdr_ext_len} / 2)
        throw ParseError("Srv6RoutingHdr: hdr_ext_len "
                         + std::to_string(h.hdr_ext_len)
                         + " inconsistent with last_entry "
                         + std::to_string(h.last_entry));
    if (h.segments_left > h.last_entry + 1)
        throw ParseError("Srv6RoutingHdr: segments_left exceeds segment count");
    h.segments.reserve(h.last_entry + 1u);
    for (std::size_t i = 0; i <= h.last_entry; ++i)
        h.segments.push_back(load_array<16>(in.data() + 8 + 16 * i));
    return h;
}

void Srv6RoutingHdr::encode_to(MutableByteView out) const
{
    if (routing_type != kRoutingTypeSrv6)
        throw EncodeError("Srv6RoutingHdr: routing type must be 4");
    if (segments.size() != std::size_t{last_entry} + 1)
        throw EncodeError("Srv6RoutingHdr: segment count "
                          + std::to_string(segments.size())
                          + " != last_entry + 1");
    if (std::size_t{hdr_ext_len} != 2 * segments.size())
        throw EncodeError("Srv6RoutingHdr: hdr_ext_len must be 2 x segments");
    if (segments_left > last_entry + 1)
        throw EncodeError("Srv6RoutingHdr: segments_left exceeds segment count");
    need_out(out, size(), name);
    out[0] = next_header;
    out[1] = hdr_ext_len;
    out[2] = routing_type;
    out[3] = segments_left;
    out[4] = last_entry;
    out[5] = flags;
    store_be16(out.data() + 6, tag);
    for (std::size_t i = 0; i < segments.size(); ++i)
        std::copy(segments[i].begin(), segments[i].end(),
                  out.begin() + 8 + 16 * i);
}

Bytes Srv6RoutingHdr::encode() const { return encode_owned(*this); }

// TcpHdr

TcpHdr TcpHdr::decode(ByteView in)
{
    need(in, 20, name);
    TcpHdr h;
    h.src_port = load_be16(in.data());
    h.dst_port = load_be16(in.data() + 2);
    h.seq = load_be32(in.data() + 4);
    h.ack = load_be32(in.data() + 8);
    const std::uint16_t off_flags = load_be16(in.data() + 12);
    h.data_offset = static_cast<std::uint8_t>(off_flags >> 12);
    h.reserved = (off_flags >> 9) & 0x7;
    h.flags = off_flags & 0x1ff;
    h.window = load_be16(in.data() + 14);
    h.checksum = load_be16(in.data() + 16);
    h.urgent_ptr = load_be16(in.data() + 18);
    if (h.data_offset < 5)
        throw ParseError("TcpHdr: data offset "
                         + std::to_string(h.data_offset) + " below minimum 5");
    need(in, h.size(), name);
    h.options.assign(in.begin() + 20, in.begin() + h.size());
    return h;
}

void TcpHdr::encode_to(MutableByteView out) const
{
    if (data_offset < 5)
        throw EncodeError("TcpHdr: data offset below 5");
    if (options.size() != size() - 20)
        throw EncodeError("TcpHdr: options length does not match data offset");
    if (flags > 0x1ff)
        throw EncodeError("TcpHdr: flags exceed 9 bits");
    if (data_offset > 15)
        throw EncodeError("TcpHdr: data offset exceeds 4 bits");
    need_out(out, size(), name);
    store_be16(out.data(), src_port);
    store_be16(out.data() + 2, dst_port);
    store_be32(out.data() + 4, seq);
    store_be32(out.data() + 8, ack);
    if (reserved > 0x7)
        throw EncodeError("TcpHdr: reserved bits exceed 3 bits");
    store_be16(out.data() + 12,
               static_cast<std::uint16_t>((data_offset << 12) | (reserved << 9)
                                          | flags));
    store_be16(out.data() + 14, window);
    store_be16(out.data() + 16, checksum);
    store_be16(out.data() + 18, urgent_ptr);
    std::copy(options.begin(), options.end(), out.begin() + 20);
}

Bytes TcpHdr::encode() const { return encode_owned(*this); }

// Icmpv6PktTooBig

Icmpv6PktTooBig Icmpv6PktTooBig::decode(ByteView in)
{
    need(in, 8, name);
    Icmpv6PktTooBig h;
    h.msg_type = in[0];
    h.code = in[1];
    if (h.msg_type != kIcmpv6PktTooBigType || h.code != 0)
        throw ParseError("Icmpv6PktTooBig: type/code "
                         + std::to_string(h.msg_type) + "/"
                         + std::to_string(h.code) + ", expected 2/0");
    h.checksum = load_be16(in.data() + 2);
    h.mtu = load_be32(in.data() + 4);
    h.invoking_packet.assign(in.begin() + 8, in.end());
    return h;
}

void Icmpv6PktTooBig::encode_to(MutableByteView out) const
{
    if (msg_type != kIcmpv6PktTooBigType || code != 0)
        throw EncodeError("Icmpv6PktTooBig: type/code must be 2/0");
    need_out(out, size(), name);
    out[0] = msg_type;
    out[1] = code;
    store_be16(out.data() + 2, checksum);
    store_be32(out.data() + 4, mtu);
    std::copy(invoking_packet.begin(), invoking_packet.end(), out.begin() + 8);
}

Bytes Icmpv6PktTooBig::encode() const { return encode_owned(*this); }

} // namespace pktc
