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

// pktc: run, generate and benchmark contract-checked network functions.
//
// Exit status: 0 no violations, 1 violations, 2 configuration or
// elaboration error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pktc/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitConfig = 2;

struct Options
{
    std::string nf = "mtu-too-big";
    std::string in;
    std::string out;
    std::string report;
    std::string mode = "dev";
    std::string policy = "continue";
    std::string format = "text";
    std::string tmpl;
    std::string payload_len;
    std::string segment = "fc00::100";
    bool visit_new = false;
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::size_t repetitions = 10;
};

// Generator defaults follow the NF: oversized TCP for mtu-too-big, SRv6
// with room for another segment otherwise.
pktc::GeneratorSpec generator_spec(const Options& o)
{
    pktc::GeneratorSpec g;
    g.count = o.count;
    g.seed = o.seed;
    g.kind = o.nf.starts_with("srv6") ? pktc::PacketTemplate::Srv6 : pktc::PacketTemplate::Tcp6;
    if (!o.tmpl.empty()) {
        auto t = pktc::parse_template(o.tmpl);
        if (!t)
            throw pktc::ConfigError("unknown template '" + o.tmpl + "' (tcp6, srv6)");
        g.kind = *t;
    }
    if (g.kind == pktc::PacketTemplate::Tcp6) {
        g.payload_len_min = 1281;
        g.payload_len_max = 1500;
    } else {
        g.payload_len_min = 64;
        g.payload_len_max = 1400;
    }
    if (!o.payload_len.empty())
        pktc::parse_payload_len(o.payload_len, g);
    g.validate();
    return g;
}

pktc::NfOptions nf_options(const Options& o)
{
    pktc::NfOptions n;
    n.srv6.segment = pktc::parse_ipv6(o.segment);
    n.srv6.visit_new = o.visit_new;
    return n;
}

void emit(const Options& o, const std::string& text)
{
    if (o.report.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.report, std::ios::trunc);
    if (!f)
        throw pktc::ConfigError("cannot write report " + o.report);
    f << text;
}

std::vector<pktc::PcapRecord> load_input(const Options& o)
{
    return o.in.empty() ? pktc::generate(generator_spec(o)) : pktc::read_pcap(o.in);
}

int cmd_run(const Options& o)
{
    pktc::RunConfig cfg;
    cfg.nf = o.nf;
    cfg.nf_options = nf_options(o);
    cfg.mode = *pktc::parse_mode(o.mode);
    cfg.policy = *pktc::parse_policy(o.policy);
    if (!o.in.empty())
        cfg.input = o.in;
    else
        cfg.generator = generator_spec(o);
    if (!o.out.empty())
        cfg.output = o.out;

    const auto r = pktc::run_pipeline(cfg);
    emit(o, o.format == "json" ? pktc::format_summary_json(r.summary)
                               : pktc::format_summary_text(r.summary));
    return r.summary.violations.empty() ? kExitOk : kExitViolations;
}

int cmd_gen(const Options& o)
{
    if (o.out.empty())
        throw pktc::ConfigError("gen needs --out");
    const auto records = pktc::generate(generator_spec(o));
    pktc::write_pcap(o.out, records);
    if (o.format == "json")
        std::cout << "{\"packets\": " << records.size() << ", \"out\": \"" << o.out << "\"}\n";
    else
        std::cout << "wrote " << records.size() << " packets to " << o.out << '\n';
    return kExitOk;
}

int cmd_bench(const Options& o)
{
    const auto nf = pktc::make_nf(o.nf, pktc::standard_registry(), nf_options(o));
    const auto input = load_input(o);
    const auto b = pktc::bench(nf, input, o.repetitions);
    emit(o, o.format == "json" ? pktc::format_bench_json(b) : pktc::format_bench_text(b));
    return kExitOk;
}

int cmd_explain(const Options& o)
{
    const auto nf = pktc::make_nf(o.nf, pktc::standard_registry(), nf_options(o));
    std::string text = nf.name + ": " + nf.description + "\n";
    if (nf.on_ingress_failure == pktc::IngressFailure::PassThrough)
        text += "ingress failures forward the packet unchanged\n";
    text += nf.contract ? nf.contract->describe(pktc::standard_registry()) : "no contract\n";
    std::cout << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contract-checked packet processing"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--nf", o.nf, "Network function")->capture_default_str();
        sc->add_option("--in", o.in, "Input pcap (default: generated packets)");
        sc->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
        sc->add_option("--count", o.count, "Generated packet count")->capture_default_str();
        sc->add_option("--template", o.tmpl, "Generator template")
            ->check(CLI::IsMember({"tcp6", "srv6"}));
        sc->add_option("--payload-len", o.payload_len, "IPv6 payload length, N or MIN-MAX");
        sc->add_option("--segment", o.segment, "Segment appended by srv6-change-pkt")
            ->capture_default_str();
        sc->add_flag("--visit-new", o.visit_new, "srv6-change-pkt also bumps segments_left");
        sc->add_option("--format", o.format, "Report format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        sc->add_option("--report", o.report, "Write the report here instead of stdout");
    };

    auto* run = app.add_subcommand("run", "Run packets through an NF");
    common(run);
    run->add_option("--out", o.out, "Output pcap");
    run->add_option("--mode", o.mode, "Build mode")
        ->check(CLI::IsMember({"dev", "prod"}))
        ->capture_default_str();
    run->add_option("--policy", o.policy, "Violation policy")
        ->check(CLI::IsMember({"drop", "continue", "abort"}))
        ->capture_default_str();

    auto* gen = app.add_subcommand("gen", "Write generated packets to a pcap");
    common(gen);
    gen->add_option("--out", o.out, "Output pcap")->required();

    auto* bench = app.add_subcommand("bench", "Time the contract phases");
    common(bench);
    bench->add_option("--repetitions", o.repetitions, "Repetitions")->capture_default_str();

    auto* explain = app.add_subcommand("explain", "Print an NF's elaborated contract");
    explain->add_option("--nf", o.nf, "Network function")->capture_default_str();
    explain->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run)
            return cmd_run(o);
        if (*gen)
            return cmd_gen(o);
        if (*bench)
            return cmd_bench(o);
        return cmd_explain(o);
    } catch (const pktc::Error& e) {
        std::cerr << "pktc: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "pktc: " << e.what() << '\n';
        return kExitConfig;
    }
}
