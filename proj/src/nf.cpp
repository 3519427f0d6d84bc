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

#include "pktc/nf.hpp"

#include <algorithm>

#include "pktc/checksum.hpp"

namespace pktc {

namespace {

bool chain_is(const Packet& p, std::initializer_list<std::string_view> names)
{
    if (p.chain().size() != names.size())
        return false;
    std::size_t i = 0;
    for (auto n : names)
        if (p.registry().name(p.chain()[i++].type) != n)
            return false;
    return true;
}

} // namespace

Packet send_too_big(Packet in, const TooBigOptions& opts)
{
    if (!chain_is(in, {EthHdr::name, Ipv6Hdr::name, TcpHdr::name}))
        return in;
    const auto eth_in = in.get<EthHdr>(0);
    const auto ip_in = in.get<Ipv6Hdr>(1);
    if (ip_in.payload_len <= kIpv6MinMtu || !opts.rewrite)
        return in;

    constexpr std::size_t reply_payload = kIpv6MinMtu - kIpv6HdrSize;

    EthHdr eth = eth_in;
    if (opts.swap_eth)
        std::swap(eth.src, eth.dst);

    Ipv6Hdr ip = ip_in;
    if (opts.swap_ipv6)
        std::swap(ip.src, ip.dst);
    ip.next_header = kProtoIcmpv6;
    ip.payload_len = static_cast<std::uint16_t>(reply_payload);

    // As much of the invoking packet as fits in the minimum MTU.
    Icmpv6PktTooBig icmp;
    icmp.mtu = kIpv6MinMtu;
    const auto original = in.view().subspan(in.chain()[1].offset);
    const std::size_t keep = std::min(original.size(), reply_payload - 8);
    icmp.invoking_packet.assign(original.begin(), original.begin() + keep);

    Bytes icmp_bytes = icmp.encode();
    icmp.checksum = pseudo_header_checksum(ip.src, ip.dst,
                                           static_cast<std::uint32_t>(icmp_bytes.size()),
                                           kProtoIcmpv6, icmp_bytes);
    store_be16(icmp_bytes.data() + 2, icmp.checksum);
    ip.payload_len = static_cast<std::uint16_t>(icmp_bytes.size());

    Bytes out;
    out.reserve(kEthHdrSize + kIpv6HdrSize + icmp_bytes.size());
    const Bytes e = eth.encode();
    const Bytes h = ip.encode();
    out.insert(out.end(), e.begin(), e.end());
    out.insert(out.end(), h.begin(), h.end());
    out.insert(out.end(), icmp_bytes.begin(), icmp_bytes.end());
    return Packet::parse(std::move(out), in.registry());
}

std::string mtu_too_big_contract_text()
{
    return "check(IPV6_MIN_MTU = " + std::to_string(kIpv6MinMtu)
           + ", ETH_HDR_SIZE = " + std::to_string(kEthHdrSize)
           + ", IPV6_HDR_SIZE = " + std::to_string(kIpv6HdrSize) + R"()
pre {
    input: pkt,
    order: [EthHdr=>Ipv6Hdr=>TcpHdr<Ipv6Hdr>],
    checks: [(payload_len[Ipv6Hdr], >, IPV6_MIN_MTU)]
}
post {
    input: pkt,
    order: [EthHdr=>Ipv6Hdr=>Icmpv6PktTooBig<...>],
    checks: [(checksum[Icmpv6PktTooBig], neq, checksum[TcpHdr<Ipv6Hdr>]),
             (payload_len[Ipv6Hdr], ==, 1240),
             (src[Ipv6Hdr], ==, dst[Ipv6Hdr]),
             (dst[Ipv6Hdr], ==, src[Ipv6Hdr]),
             (.src[EthHdr], ==, .dst[EthHdr]),
             (.dst[EthHdr], ==, .src[EthHdr]),
             (mtu[Icmpv6PktTooBig], ==, IPV6_MIN_MTU),
             (checksum_ok[Icmpv6PktTooBig<Ipv6Hdr>], ==, 1)]
}
static: [IPV6_MIN_MTU + ETH_HDR_SIZE == 1294,
         IPV6_MIN_MTU - IPV6_HDR_SIZE == 1240]
)";
}

std::optional<Packet> srv6_add_segment(Packet in, const Srv6Options& opts)
{
    if (in.chain().size() < 3 || in.registry().name(in.chain()[0].type) != EthHdr::name
        || in.registry().name(in.chain()[1].type) != Ipv6Hdr::name
        || in.registry().name(in.chain()[2].type) != Srv6RoutingHdr::name)
        return in;

    auto ip = in.get<Ipv6Hdr>(1);
    auto srh = in.get<Srv6RoutingHdr>(2);
    if (srh.last_entry >= kSrhMaxLastEntry
        || std::uint32_t{ip.payload_len} + kSrv6SegmentSize > 0xffff)
        return std::nullopt;

    srh.segments.push_back(opts.segment);
    srh.last_entry += 1;
    srh.hdr_ext_len += 2;
    if (opts.visit_new)
        srh.segments_left += 1;
    if (opts.update_payload_len) {
        ip.payload_len = static_cast<std::uint16_t>(ip.payload_len + kSrv6SegmentSize);
        in.put(1, ip);
    }

    const auto& entry = in.chain()[2];
    const Bytes encoded = srh.encode();
    in.splice(entry.offset, entry.length, encoded);
    in.reparse();
    return in;
}

std::string srv6_change_pkt_contract_text(const Srv6Options& opts)
{
    return "check(SEGMENT_SIZE = " + std::to_string(kSrv6SegmentSize)
           + ", SRH_MAX_LAST_ENTRY = " + std::to_string(kSrhMaxLastEntry)
           + ", MAX_HDR_EXT_LEN = 255, MAX_PAYLOAD_LEN = 65535"
           + ", SEGMENTS_LEFT_DELTA = " + (opts.visit_new ? "1" : "0") + R"()
pre {
    input: pkt,
    order: [EthHdr=>Ipv6Hdr=>Srv6RoutingHdr],
    checks: [(payload_len[Ipv6Hdr], ==, actual_payload_len[Ipv6Hdr]),
             (last_entry[Srv6RoutingHdr], <, SRH_MAX_LAST_ENTRY),
             (payload_len[Ipv6Hdr], <=, MAX_PAYLOAD_LEN - SEGMENT_SIZE)]
}
post {
    input: pkt,
    order: [EthHdr=>Ipv6Hdr=>Srv6RoutingHdr],
    checks: [(payload_len[Ipv6Hdr], ==, payload_len[Ipv6Hdr] + SEGMENT_SIZE),
             (hdr_ext_len[Srv6RoutingHdr], ==, hdr_ext_len[Srv6RoutingHdr] + 2),
             (last_entry[Srv6RoutingHdr], ==, last_entry[Srv6RoutingHdr] + 1),
             (segments_left[Srv6RoutingHdr], ==, segments_left[Srv6RoutingHdr] + SEGMENTS_LEFT_DELTA),
             (len[Srv6RoutingHdr], ==, len[Srv6RoutingHdr] + SEGMENT_SIZE),
             (src[Ipv6Hdr], ==, src[Ipv6Hdr]),
             (dst[Ipv6Hdr], ==, dst[Ipv6Hdr])]
}
static: [2 * (SRH_MAX_LAST_ENTRY + 1) <= MAX_HDR_EXT_LEN,
         SEGMENT_SIZE == 16]
)";
}

std::vector<std::string> nf_names()
{
    return {"mtu-too-big",           "mtu-too-big/no-ipv6-swap",
            "mtu-too-big/no-eth-swap", "mtu-too-big/no-rewrite",
            "srv6-change-pkt",       "srv6-change-pkt/no-payload-len"};
}

NfDefinition make_nf(std::string_view name, const HeaderRegistry& registry,
                     const NfOptions& options)
{
    NfDefinition nf;
    nf.name = std::string(name);

    if (name.starts_with("mtu-too-big")) {
        TooBigOptions opts;
        if (name == "mtu-too-big/no-ipv6-swap")
            opts.swap_ipv6 = false;
        else if (name == "mtu-too-big/no-eth-swap")
            opts.swap_eth = false;
        else if (name == "mtu-too-big/no-rewrite")
            opts.rewrite = false;
        else if (name != "mtu-too-big")
            throw ConfigError("unknown network function " + nf.name);
        nf.description = "Rewrites oversized TCP/IPv6 packets into ICMPv6 Packet Too Big "
                         "replies to the sender";
        nf.contract = elaborate(mtu_too_big_contract_text(), registry, nf.name);
        nf.on_ingress_failure = IngressFailure::PassThrough;
        nf.transform = [opts](Packet p) {
            return TransformResult{send_too_big(std::move(p), opts), {}};
        };
        return nf;
    }

    if (name.starts_with("srv6-change-pkt")) {
        Srv6Options opts = options.srv6;
        if (name == "srv6-change-pkt/no-payload-len")
            opts.update_payload_len = false;
        else if (name != "srv6-change-pkt")
            throw ConfigError("unknown network function " + nf.name);
        nf.description = "Appends a segment to the SRv6 routing header";
        nf.contract = elaborate(srv6_change_pkt_contract_text(opts), registry, nf.name);
        nf.transform = [opts](Packet p) {
            auto out = srv6_add_segment(std::move(p), opts);
            if (!out)
                return TransformResult{std::nullopt, "segment list or payload length full"};
            return TransformResult{std::move(out), {}};
        };
        return nf;
    }

    throw ConfigError("unknown network function " + nf.name);
}

} // namespace pktc
