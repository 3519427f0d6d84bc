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

#include <filesystem>

#include <json.hpp>

#include "pktc/checksum.hpp"
#include "pktc/pipeline.hpp"

using namespace pktc;

namespace {

std::vector<PcapRecord> tcp_input(std::size_t n, std::uint64_t seed = 3)
{
    GeneratorSpec g;
    g.count = n;
    g.seed = seed;
    g.payload_len_min = 1281;
    g.payload_len_max = 1500;
    return generate(g);
}

} // namespace

TEST_CASE("100 conforming packets through mtu-too-big")
{
    const auto r = run_packets(make_nf("mtu-too-big"), tcp_input(100), BuildMode::Development,
                               ViolationPolicy::Continue);
    CHECK(r.summary.packets_in == 100);
    CHECK(r.summary.packets_out == 100);
    CHECK(r.summary.violations.empty());
    CHECK(r.summary.snapshots_built == 100);
    CHECK(r.summary.checks_evaluated == 100 * 9);
    CHECK(r.emitted.size() == 100);
}

TEST_CASE("swap mutant under each policy")
{
    const auto nf = make_nf("mtu-too-big/no-ipv6-swap");
    const auto input = tcp_input(100);

    const auto drop = run_packets(nf, input, BuildMode::Development, ViolationPolicy::Drop);
    CHECK(drop.summary.violations.size() == 200);
    CHECK(drop.summary.packets_dropped == 100);
    CHECK(drop.summary.packets_out == 0);
    CHECK(drop.summary.violations_by_check.at("egress#2") == 100);
    CHECK(drop.summary.violations_by_check.at("egress#3") == 100);

    const auto cont = run_packets(nf, input, BuildMode::Development, ViolationPolicy::Continue);
    CHECK(cont.summary.violations.size() == 200);
    CHECK(cont.summary.packets_out == 100);

    const auto abort = run_packets(nf, input, BuildMode::Development, ViolationPolicy::Abort);
    CHECK(abort.summary.aborted);
    CHECK(abort.summary.packets_in == 1);
    CHECK(abort.summary.packets_dropped == 1);
    CHECK(abort.summary.violations.size() == 2);
}

TEST_CASE("production output equals development output")
{
    const auto nf = make_nf("mtu-too-big");
    auto input = tcp_input(200);
    GeneratorSpec small;
    small.count = 50;
    small.payload_len_min = 20;
    small.payload_len_max = 1280;
    for (auto& r : generate(small))
        input.push_back(r);

    const auto dev = run_packets(nf, input, BuildMode::Development, ViolationPolicy::Continue);
    const auto prod = run_packets(nf, input, BuildMode::Production, ViolationPolicy::Continue);
    CHECK(dev.summary.passed_through == 50);
    CHECK(encode_pcap(dev.emitted) == encode_pcap(prod.emitted));
    CHECK(prod.summary.snapshots_built == 0);
    CHECK(prod.summary.checks_evaluated == 0);
    CHECK(prod.summary.timings.ingress_contract_ns == 0);
    CHECK(prod.summary.timings.egress_contract_ns == 0);
}

TEST_CASE("srv6-change-pkt drops when the segment list is full")
{
    std::vector<PcapRecord> input;
    auto full = Srv6RoutingHdr::with_segments(std::vector<Ipv6Addr>(127), kProtoNoNext, 0);
    EthHdr e;
    Ipv6Hdr ip;
    ip.next_header = kProtoRouting;
    ip.payload_len = static_cast<std::uint16_t>(full.size());
    Bytes f = e.encode();
    for (const Bytes& part : {ip.encode(), full.encode()})
        f.insert(f.end(), part.begin(), part.end());
    input.push_back({0, 0, 0, f});

    const auto nf = make_nf("srv6-change-pkt");
    const auto prod = run_packets(nf, input, BuildMode::Production, ViolationPolicy::Continue);
    CHECK(prod.summary.dropped_by_nf == 1);
    CHECK(prod.summary.packets_out == 0);
    // Development flags the same packet at ingress.
    const auto dev = run_packets(nf, input, BuildMode::Development, ViolationPolicy::Drop);
    CHECK(dev.summary.violations_by_check.at("ingress#1") == 1);
    CHECK(dev.summary.packets_dropped == 1);
}

TEST_CASE("run_pipeline elaborates before any I/O")
{
    RunConfig cfg;
    cfg.nf = "no-such-nf";
    cfg.input = "/nonexistent/in.pcap";
    CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);

    cfg.nf = "mtu-too-big";
    CHECK_THROWS_AS(run_pipeline(cfg), PcapError);
}

TEST_CASE("run_pipeline file round trip")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto in = dir / "pktc_pipeline_in.pcap";
    const auto out = dir / "pktc_pipeline_out.pcap";
    write_pcap(in, tcp_input(20));
    RunConfig cfg;
    cfg.input = in;
    cfg.output = out;
    const auto r = run_pipeline(cfg);
    CHECK(r.summary.packets_out == 20);
    CHECK(read_pcap(out) == r.emitted);
    std::filesystem::remove(in);
    std::filesystem::remove(out);
}

TEST_CASE("json report keys")
{
    const auto r = run_packets(make_nf("mtu-too-big/no-eth-swap"), tcp_input(3),
                               BuildMode::Development, ViolationPolicy::Drop);
    const auto j = nlohmann::json::parse(format_summary_json(r.summary));
    CHECK(j["packets_in"] == 3);
    CHECK(j["packets_out"] == 0);
    CHECK(j["packets_dropped"] == 3);
    REQUIRE(j["violations"].size() == 6);
    const auto& v = j["violations"][0];
    for (const char* k : {"nf", "phase", "check_index", "lhs", "lhs_value", "op", "rhs",
                          "rhs_value", "packet_index"})
        CHECK_MESSAGE(v.contains(k), k);
    CHECK(v["phase"] == "egress");
    CHECK(v["check_index"] == 4);
    CHECK(v["lhs"] == "src[EthHdr]");
    for (const char* k : {"ingress_contract_ns", "transform_ns", "egress_contract_ns"})
        CHECK_MESSAGE(j["timings"].contains(k), k);

    const auto text = format_summary_text(r.summary);
    CHECK(text.find("NF mtu-too-big/no-eth-swap [egress#4] src[EthHdr]=") == 0);
}

TEST_CASE("bench reports mean and spread per phase")
{
    const auto b = bench(make_nf("mtu-too-big"), tcp_input(200), 10);
    CHECK(b.repetitions == 10);
    CHECK(b.ingress_contract_ns.mean > 0);
    CHECK(b.egress_contract_ns.mean > 0);
    CHECK(b.transform_ns.stddev >= 0);
    CHECK(b.ingress_share + b.egress_share == doctest::Approx(1.0));
    const auto j = nlohmann::json::parse(format_bench_json(b));
    CHECK(j["phases"]["ingress_contract_ns"].contains("stddev"));
    CHECK(j["totals"].contains("contracts_off_ns"));
    CHECK_THROWS_AS(bench(make_nf("mtu-too-big"), {}, 0), ConfigError);
}

TEST_CASE("policy and mode names")
{
    CHECK(parse_policy("drop") == ViolationPolicy::Drop);
    CHECK_FALSE(parse_policy("ignore"));
    CHECK(parse_mode("prod") == BuildMode::Production);
    CHECK_FALSE(parse_mode("release"));
}
