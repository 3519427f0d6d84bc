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

#include "pktc/generator.hpp"

#include <charconv>

#include "pktc/checksum.hpp"
#include "pktc/contract.hpp"
#include "pktc/headers.hpp"

namespace pktc {

namespace {

constexpr std::uint32_t kEpoch = 1700000000;

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
    // Modulo draw keeps the stream identical across standard libraries;
    // distributions are implementation-defined.
    return lo + rng() % (hi - lo + 1);
}

template <std::size_t N>
std::array<std::uint8_t, N> random_array(std::mt19937_64& rng)
{
    std::array<std::uint8_t, N> a{};
    for (auto& b : a)
        b = static_cast<std::uint8_t>(rng());
    return a;
}

Ipv6Addr random_addr(std::mt19937_64& rng)
{
    auto a = random_array<16>(rng);
    a[0] = 0x20; // global unicast, 2000::/3
    a[1] = 0x01;
    return a;
}

MacAddr random_mac(std::mt19937_64& rng)
{
    auto m = random_array<6>(rng);
    m[0] = static_cast<std::uint8_t>((m[0] & 0xfc) | 0x02); // local, unicast
    return m;
}

void random_fill(std::mt19937_64& rng, Bytes& out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(static_cast<std::uint8_t>(rng()));
}

Bytes frame(const EthHdr& eth, const Ipv6Hdr& ip, ByteView upper)
{
    Bytes out = eth.encode();
    const Bytes h = ip.encode();
    out.insert(out.end(), h.begin(), h.end());
    out.insert(out.end(), upper.begin(), upper.end());
    return out;
}

} // namespace

std::string_view to_string(PacketTemplate t) noexcept
{
    return t == PacketTemplate::Tcp6 ? "tcp6" : "srv6";
}

std::optional<PacketTemplate> parse_template(std::string_view text) noexcept
{
    if (text == "tcp6")
        return PacketTemplate::Tcp6;
    if (text == "srv6")
        return PacketTemplate::Srv6;
    return std::nullopt;
}

OrderSpec template_order(PacketTemplate t)
{
    if (t == PacketTemplate::Tcp6)
        return {{{"EthHdr", {}}, {"Ipv6Hdr", {}}, {"TcpHdr", "Ipv6Hdr"}}};
    return {{{"EthHdr", {}}, {"Ipv6Hdr", {}}, {"Srv6RoutingHdr", {}}}};
}

std::uint16_t min_payload_len(PacketTemplate t) noexcept
{
    return t == PacketTemplate::Tcp6 ? 20 : 24;
}

void GeneratorSpec::validate() const
{
    if (payload_len_min > payload_len_max)
        throw ConfigError("payload length range is empty");
    if (payload_len_min < min_payload_len(kind))
        throw ConfigError("payload length " + std::to_string(payload_len_min) + " too small for "
                          + std::string(to_string(kind)) + " (minimum "
                          + std::to_string(min_payload_len(kind)) + ")");
    if (payload_len_max > kMaxGeneratedPayloadLen)
        throw ConfigError("payload length " + std::to_string(payload_len_max)
                          + " does not fit a pcap record");
}

void parse_payload_len(std::string_view text, GeneratorSpec& spec)
{
    auto number = [&](std::string_view s) {
        unsigned v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || v > 0xffff)
            throw ConfigError("bad payload length '" + std::string(text) + "'");
        return static_cast<std::uint16_t>(v);
    };
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        spec.payload_len_min = spec.payload_len_max = number(text);
    } else {
        spec.payload_len_min = number(text.substr(0, dash));
        spec.payload_len_max = number(text.substr(dash + 1));
    }
}

Bytes build_tcp6(std::mt19937_64& rng, std::uint16_t payload_len)
{
    EthHdr eth{random_mac(rng), random_mac(rng), kEtherTypeIpv6};
    Ipv6Hdr ip;
    ip.traffic_class = static_cast<std::uint8_t>(rng());
    ip.flow_label = static_cast<std::uint32_t>(rng() & 0xfffff);
    ip.payload_len = payload_len;
    ip.next_header = kProtoTcp;
    ip.hop_limit = static_cast<std::uint8_t>(uniform(rng, 1, 255));
    ip.src = random_addr(rng);
    ip.dst = random_addr(rng);

    TcpHdr tcp;
    tcp.src_port = static_cast<std::uint16_t>(uniform(rng, 1024, 65535));
    tcp.dst_port = static_cast<std::uint16_t>(uniform(rng, 1, 65535));
    tcp.seq = static_cast<std::uint32_t>(rng());
    tcp.ack = static_cast<std::uint32_t>(rng());
    tcp.flags = static_cast<std::uint16_t>(0x010 | (rng() & 0x008)); // ACK, maybe PSH
    tcp.window = static_cast<std::uint16_t>(rng());
    const std::size_t max_words = std::min<std::size_t>(15, payload_len / 4);
    tcp.data_offset = static_cast<std::uint8_t>(uniform(rng, 5, max_words));
    tcp.options.assign((tcp.data_offset - 5) * 4u, 0x01);
    if (!tcp.options.empty())
        tcp.options.back() = 0x00;

    Bytes upper = tcp.encode();
    random_fill(rng, upper, payload_len - tcp.size());
    const std::uint16_t sum = pseudo_header_checksum(
        ip.src, ip.dst, static_cast<std::uint32_t>(upper.size()), kProtoTcp, upper);
    store_be16(upper.data() + 16, sum);
    return frame(eth, ip, upper);
}

Bytes build_srv6(std::mt19937_64& rng, std::uint16_t payload_len)
{
    EthHdr eth{random_mac(rng), random_mac(rng), kEtherTypeIpv6};
    Ipv6Hdr ip;
    ip.flow_label = static_cast<std::uint32_t>(rng() & 0xfffff);
    ip.payload_len = payload_len;
    ip.next_header = kProtoRouting;
    ip.hop_limit = 64;
    ip.src = random_addr(rng);
    ip.dst = random_addr(rng);

    const std::size_t fits = (payload_len - 8u) / 16u;
    const std::size_t n = uniform(rng, 1, std::min<std::size_t>(4, fits));
    std::vector<Ipv6Addr> segs;
    for (std::size_t i = 0; i < n; ++i)
        segs.push_back(random_addr(rng));
    const auto left = static_cast<std::uint8_t>(uniform(rng, 0, n));
    auto srh = Srv6RoutingHdr::with_segments(std::move(segs), kProtoNoNext, left);
    srh.tag = static_cast<std::uint16_t>(rng());
    if (left > 0)
        ip.dst = srh.segments[left - 1];

    Bytes upper = srh.encode();
    random_fill(rng, upper, payload_len - srh.size());
    return frame(eth, ip, upper);
}

std::vector<PcapRecord> generate(const GeneratorSpec& spec)
{
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::vector<PcapRecord> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const auto plen
            = static_cast<std::uint16_t>(uniform(rng, spec.payload_len_min, spec.payload_len_max));
        PcapRecord r;
        r.ts_sec = kEpoch + static_cast<std::uint32_t>(i / 1000);
        r.ts_usec = static_cast<std::uint32_t>(i % 1000) * 1000;
        r.data = spec.kind == PacketTemplate::Tcp6 ? build_tcp6(rng, plen) : build_srv6(rng, plen);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace pktc
