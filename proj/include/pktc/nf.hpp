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

#ifndef PKTC_NF_HPP
#define PKTC_NF_HPP

#include "pktc/elaboration.hpp"
#include "pktc/headers.hpp"

namespace pktc {

inline constexpr std::uint32_t kIpv6MinMtu = 1280;
inline constexpr std::uint32_t kEthHdrSize = 14;
inline constexpr std::uint32_t kIpv6HdrSize = 40;
inline constexpr std::uint32_t kSrv6SegmentSize = 16;
/// Largest last_entry an insertion may produce (hdr_ext_len stays <= 255).
inline constexpr std::uint8_t kSrhMaxLastEntry = 126;

static_assert(kIpv6MinMtu + kEthHdrSize == 1294);
static_assert(2 * (kSrhMaxLastEntry + 1) <= 255);
static_assert(valid_order<EthHdr, Ipv6Hdr, TcpHdr>);
static_assert(valid_order<EthHdr, Ipv6Hdr, Icmpv6PktTooBig>);
static_assert(valid_order<EthHdr, Ipv6Hdr, Srv6RoutingHdr>);

enum class ViolationPolicy { Drop, Continue, Abort };

/// What a failed ingress contract means for the NF.
enum class IngressFailure {
    Violation,   // report and apply the policy
    PassThrough, // the contract is a guard: forward untouched, skip egress
};

struct TransformResult
{
    std::optional<Packet> packet; // empty: the NF dropped it
    std::string drop_reason;
};

using Transform = std::function<TransformResult(Packet)>;

/// A network function: contract plus transform. The transform never sees
/// the ingress snapshot, so outputs do not depend on whether contracts run.
struct NfDefinition
{
    std::string name;
    std::string description;
    std::optional<Contract> contract; // absent: runs unchecked
    Transform transform;
    IngressFailure on_ingress_failure = IngressFailure::Violation;
};

// mtu-too-big

struct TooBigOptions
{
    bool rewrite = true;
    bool swap_eth = true;
    bool swap_ipv6 = true;
};

/// Rewrites an Eth/IPv6/TCP packet whose payload_len exceeds the IPv6
/// minimum MTU into an ICMPv6 Packet Too Big addressed back to the sender.
/// Anything else is returned unchanged.
Packet send_too_big(Packet in, const TooBigOptions& opts = {});

std::string mtu_too_big_contract_text();

// srv6-change-pkt

struct Srv6Options
{
    Ipv6Addr segment = parse_ipv6("fc00::100");
    bool visit_new = false;
    bool update_payload_len = true;
};

/// Appends opts.segment to the first routing header of an Eth/IPv6/SRH
/// packet. Returns nothing when the segment list or payload_len is full;
/// other packets come back unchanged.
std::optional<Packet> srv6_add_segment(Packet in, const Srv6Options& opts = {});

std::string srv6_change_pkt_contract_text(const Srv6Options& opts = {});

// Catalog

struct NfOptions
{
    Srv6Options srv6;
};

/// "mtu-too-big", "srv6-change-pkt" and their mutants
/// ("mtu-too-big/no-ipv6-swap", "mtu-too-big/no-eth-swap",
/// "mtu-too-big/no-rewrite", "srv6-change-pkt/no-payload-len").
std::vector<std::string> nf_names();

/// Builds and elaborates the named NF. Throws ConfigError for unknown names;
/// elaboration errors propagate.
NfDefinition make_nf(std::string_view name, const HeaderRegistry& registry = standard_registry(),
                     const NfOptions& options = {});

} // namespace pktc

#endif /* PKTC_NF_HPP */
