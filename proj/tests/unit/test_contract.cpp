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

#include <doctest.h>

#include "pktc/elaboration.hpp"
#include "pktc/nf.hpp"
#include "support.hpp"

using namespace pktc;

namespace {

const Contract& mtu_contract()
{
    static const Contract c = elaborate(mtu_too_big_contract_text(), standard_registry(), "mtu");
    return c;
}

Check make_check(const std::string& text, Phase phase = Phase::Ingress)
{
    const auto spec = parse_contract_spec(
        "check(IPV6_MIN_MTU = 1280)\npre { order: [EthHdr=>Ipv6Hdr=>TcpHdr<Ipv6Hdr>]"
            + std::string(phase == Phase::Ingress ? ", checks: [" + text + "]" : "")
            + " }\n"
            + (phase == Phase::Egress ? "post { order: [EthHdr=>Ipv6Hdr=>TcpHdr<Ipv6Hdr>], "
                                        "checks: ["
                                            + text + "] }"
                                      : ""),
        standard_registry(), "t");
    const Contract c = elaborate(spec, standard_registry());
    return phase == Phase::Ingress ? c.ingress->checks.at(0) : c.egress->checks.at(0);
}

} // namespace

TEST_CASE("compare: comparator semantics")
{
    const Value a = std::uint64_t{3}, b = std::uint64_t{5};
    CHECK(compare(a, Comparator::Lt, b));
    CHECK(compare(a, Comparator::Le, a));
    CHECK_FALSE(compare(a, Comparator::Gt, a));
    CHECK(compare(b, Comparator::Ge, a));
    CHECK(compare(a, Comparator::Neq, b));
    CHECK(compare(a, Comparator::Eq, a));

    const Value x = Bytes{1, 2}, y = Bytes{1, 3};
    CHECK(compare(x, Comparator::Eq, x));
    CHECK(compare(x, Comparator::Neq, y));
    CHECK_THROWS_AS(compare(x, Comparator::Lt, y), ContractError);
    CHECK_THROWS_AS(compare(x, Comparator::Eq, a), ContractError);
}

TEST_CASE("compare: sanity laws over random integers")
{
    props::for_all(0xc0a7, [](std::mt19937_64& rng, int) {
        const Value a = std::uint64_t{rng() % 64}, b = std::uint64_t{rng() % 64};
        // Exactly one of <, ==, > holds.
        const int n = int(compare(a, Comparator::Lt, b)) + int(compare(a, Comparator::Eq, b))
                      + int(compare(a, Comparator::Gt, b));
        REQUIRE(n == 1);
        REQUIRE(compare(a, Comparator::Neq, b) == !compare(a, Comparator::Eq, b));
        REQUIRE(compare(a, Comparator::Le, b) == !compare(a, Comparator::Gt, b));
        REQUIRE(compare(a, Comparator::Ge, b) == !compare(a, Comparator::Lt, b));
        REQUIRE(compare(a, Comparator::Lt, b) == compare(b, Comparator::Gt, a));
        REQUIRE(compare(a, Comparator::Eq, a));
    });
}

TEST_CASE("parse_comparator spellings")
{
    CHECK(parse_comparator("neq") == Comparator::Neq);
    CHECK(parse_comparator("==") == Comparator::Eq);
    CHECK(parse_comparator(">=") == Comparator::Ge);
    CHECK_FALSE(parse_comparator("=~"));
}

TEST_CASE("snapshot holds one entry per chain element")
{
    const Packet p = Packet::parse(oracle::tcp6_frame(1300));
    const auto snap = IngressSnapshot::capture(p, mtu_contract().ingress->order);
    CHECK(snap.size() == 3);
    const auto& reg = standard_registry();
    const auto* ip = snap.find(reg.require("Ipv6Hdr"));
    REQUIRE(ip);
    const auto plen = reg.accessor_index(ip->type, "payload_len").value();
    CHECK(std::get<std::uint64_t>(ip->values[plen]) == 1300);
    // Independent read of bytes 4..5 of the IPv6 header.
    CHECK(((p.bytes()[18] << 8) | p.bytes()[19]) == 1300);
    CHECK(ip->raw == Bytes(p.bytes().begin() + 14, p.bytes().begin() + 54));
}

TEST_CASE("snapshot indexes stacked headers by occurrence")
{
    Bytes f = oracle::eth(oracle::mac(1), oracle::mac(2));
    Bytes r1 = oracle::srh(1, 0);
    r1[0] = 43;
    const Bytes r2 = oracle::srh(2, 0);
    oracle::append(f, oracle::ipv6(unsigned(r1.size() + r2.size()), 43, oracle::addr(1),
                                   oracle::addr(2)));
    oracle::append(f, r1);
    oracle::append(f, r2);
    const Packet p = Packet::parse(f);
    const auto order = standard_registry().verify_order(
        {{{"EthHdr"}, {"Ipv6Hdr"}, {"Srv6RoutingHdr"}, {"Srv6RoutingHdr"}}});
    const auto snap = IngressSnapshot::capture(p, order);
    const auto srh = standard_registry().require("Srv6RoutingHdr");
    CHECK(snap.find(srh, 0));
    CHECK(snap.find(srh, 1));
    CHECK_FALSE(snap.find(srh, 2));
    CHECK(snap.find(srh, 1)->raw.size() == 40);
}

TEST_CASE("snapshot is isolated from later mutation")
{
    Packet p = Packet::parse(oracle::tcp6_frame(1300));
    const auto snap = IngressSnapshot::capture(p, mtu_contract().ingress->order);
    auto ip = p.get<Ipv6Hdr>(1);
    ip.payload_len = 7;
    p.put(1, ip);
    const auto& reg = standard_registry();
    const auto* e = snap.find(reg.require("Ipv6Hdr"));
    const auto plen = reg.accessor_index(e->type, "payload_len").value();
    CHECK(std::get<std::uint64_t>(e->values[plen]) == 1300);
}

TEST_CASE("evaluating single checks")
{
    const Check gt = make_check("(payload_len[Ipv6Hdr], >, IPV6_MIN_MTU)");
    const ConstantBindings none;
    const Packet big = Packet::parse(oracle::tcp6_frame(1300));
    const Packet edge = Packet::parse(oracle::tcp6_frame(1280));
    CHECK_FALSE(eval_check(gt, big, nullptr, none));
    const auto v = eval_check(gt, edge, nullptr, none, {"nf", Phase::Ingress, 0, 9});
    REQUIRE(v);
    CHECK(v->kind == Violation::Kind::CheckFailed);
    CHECK(v->lhs_value == "1280");
    CHECK(v->rhs == "IPV6_MIN_MTU");
    CHECK(v->to_text()
          == "NF nf [ingress#0] payload_len[Ipv6Hdr]=1280 > IPV6_MIN_MTU=1280 FAILED (packet 9)");

    const Check literal = make_check("(payload_len[Ipv6Hdr], ==, 1300)");
    CHECK_FALSE(eval_check(literal, big, nullptr, none));
}

TEST_CASE("resolve_operand reads the original packet through the snapshot")
{
    const Check swap = make_check("(src[Ipv6Hdr], ==, dst[Ipv6Hdr])", Phase::Egress);
    const Packet in = Packet::parse(oracle::tcp6_frame(1300));
    const auto snap = IngressSnapshot::capture(in, mtu_contract().ingress->order);

    Packet out = in;
    auto ip = out.get<Ipv6Hdr>(1);
    std::swap(ip.src, ip.dst);
    out.put(1, ip);

    const Value original_dst = resolve_operand(swap.rhs, out, &snap, {});
    CHECK(std::get<Bytes>(original_dst) == oracle::addr(2));
    CHECK_FALSE(eval_check(swap, out, &snap, {}));
    // Without the swap the check fails.
    CHECK(eval_check(swap, in, &snap, {}));
    // Without a snapshot the ref cannot resolve.
    const auto unresolved = eval_check(swap, out, nullptr, {});
    REQUIRE(unresolved);
    CHECK(unresolved->kind == Violation::Kind::ResolutionError);
}

TEST_CASE("operand offsets and their failure modes")
{
    const Packet p = Packet::parse(oracle::tcp6_frame(100));
    Operand o;
    FieldRef ref{"payload_len", {"Ipv6Hdr", {}, 0}, Source::CurrentPacket, {}};
    ref.bind(standard_registry());
    o.base = ref;
    o.offsets.push_back({false, Literal{16, {}}});
    o.offsets.push_back({true, ConstantName{"K"}});
    CHECK(std::get<std::uint64_t>(resolve_operand(o, p, nullptr, {{"K", 6}})) == 110);
    CHECK_THROWS_AS(resolve_operand(o, p, nullptr, {}), ContractError);
    CHECK_THROWS_AS(resolve_operand(o, p, nullptr, {{"K", 500}}), ContractError);
}

TEST_CASE("ingress on a conforming packet passes and returns a snapshot")
{
    ContractRuntime rt(BuildMode::Development);
    const Packet p = Packet::parse(oracle::tcp6_frame(1300));
    const auto r = run_ingress(mtu_contract(), p, rt);
    CHECK(r.passed());
    CHECK(r.order_ok);
    REQUIRE(r.snapshot);
    CHECK(rt.snapshots_built() == 1);
    CHECK(rt.checks_evaluated() == 1);
}

TEST_CASE("ingress order mismatch is reported without a snapshot")
{
    ContractRuntime rt(BuildMode::Development);
    const Packet p = Packet::parse(oracle::srv6_frame(1, 0, 10));
    const auto r = run_ingress(mtu_contract(), p, rt, 4);
    CHECK_FALSE(r.order_ok);
    CHECK_FALSE(r.snapshot);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations[0].kind == Violation::Kind::OrderMismatch);
    CHECK_FALSE(r.violations[0].check_index);
    CHECK(r.violations[0].to_text().find("[ingress#order]") != std::string::npos);
}

TEST_CASE("egress order mismatch when the transform did nothing")
{
    ContractRuntime rt(BuildMode::Development);
    const Packet p = Packet::parse(oracle::tcp6_frame(1300));
    const auto in = run_ingress(mtu_contract(), p, rt);
    const auto vs = run_egress(mtu_contract(), p, &*in.snapshot, rt);
    REQUIRE_FALSE(vs.empty());
    CHECK(vs[0].kind == Violation::Kind::OrderMismatch);
    const auto m = match_chain(p, mtu_contract().egress->order);
    CHECK(m.kind == ChainMatch::Kind::TypeMismatch);
    CHECK(m.index == 2);
}

TEST_CASE("production runtime evaluates nothing")
{
    ContractRuntime rt(BuildMode::Production);
    CHECK_FALSE(rt.dynamic());
    const Packet p = Packet::parse(oracle::tcp6_frame(1000));
    const auto r = run_ingress(mtu_contract(), p, rt);
    CHECK(r.passed());
    CHECK_FALSE(r.snapshot);
    CHECK(run_egress(mtu_contract(), p, nullptr, rt).empty());
    CHECK(rt.snapshots_built() == 0);
    CHECK(rt.checks_evaluated() == 0);
}

TEST_CASE("build mode is fixed once packets flow")
{
    ContractRuntime rt(BuildMode::Development);
    rt.set_mode(BuildMode::Production);
    rt.set_mode(BuildMode::Development);
    rt.note_packet();
    CHECK_THROWS_AS(rt.set_mode(BuildMode::Production), ConfigError);
    CHECK_NOTHROW(rt.set_mode(BuildMode::Development));
}
