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

#include "pktc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace pktc {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

namespace {

std::uint64_t since(Clock::time_point t0)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

std::string check_key(const Violation& v)
{
    std::string k(to_string(v.phase));
    k += v.check_index ? "#" + std::to_string(*v.check_index) : std::string("#order");
    return k;
}

void record(RunSummary& s, std::vector<Violation>& vs)
{
    for (auto& v : vs) {
        ++s.violations_by_check[check_key(v)];
        s.violations.push_back(std::move(v));
    }
    vs.clear();
}

Stat stat(const std::vector<double>& xs)
{
    Stat st;
    if (xs.empty())
        return st;
    for (double x : xs)
        st.mean += x;
    st.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0;
        for (double x : xs)
            acc += (x - st.mean) * (x - st.mean);
        st.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return st;
}

ordered_json stat_json(const Stat& s)
{
    return {{"mean", s.mean}, {"stddev", s.stddev}};
}

} // namespace

std::string_view to_string(ViolationPolicy p) noexcept
{
    switch (p) {
    case ViolationPolicy::Drop:
        return "drop";
    case ViolationPolicy::Continue:
        return "continue";
    case ViolationPolicy::Abort:
        return "abort";
    }
    return "?";
}

std::optional<ViolationPolicy> parse_policy(std::string_view text) noexcept
{
    if (text == "drop")
        return ViolationPolicy::Drop;
    if (text == "continue")
        return ViolationPolicy::Continue;
    if (text == "abort")
        return ViolationPolicy::Abort;
    return std::nullopt;
}

std::optional<BuildMode> parse_mode(std::string_view text) noexcept
{
    if (text == "dev")
        return BuildMode::Development;
    if (text == "prod")
        return BuildMode::Production;
    return std::nullopt;
}

RunResult run_packets(const NfDefinition& nf, const std::vector<PcapRecord>& input,
                      BuildMode mode, ViolationPolicy policy, const HeaderRegistry& registry)
{
    ContractRuntime runtime(mode);
    const bool checked = runtime.dynamic() && nf.contract.has_value();

    RunResult result;
    RunSummary& s = result.summary;
    s.nf = nf.name;
    s.mode = mode;
    s.policy = policy;
    const auto run_start = Clock::now();

    auto emit = [&](const PcapRecord& in, Bytes data) {
        const auto len = static_cast<std::uint32_t>(data.size());
        result.emitted.push_back({in.ts_sec, in.ts_usec, len, std::move(data)});
    };

    std::vector<Violation> pending;
    // Applies the policy to pending violations; true when the packet goes on.
    auto survive = [&]() {
        if (pending.empty())
            return true;
        ++s.violating_packets;
        record(s, pending);
        if (policy == ViolationPolicy::Continue)
            return true;
        ++s.packets_dropped;
        if (policy == ViolationPolicy::Abort)
            s.aborted = true;
        return false;
    };

    for (std::uint64_t idx = 0; idx < input.size() && !s.aborted; ++idx) {
        const PcapRecord& rec = input[idx];
        ++s.packets_in;
        runtime.note_packet();
        Packet pkt = Packet::parse(rec.data, registry);

        std::optional<IngressSnapshot> snapshot;
        if (checked && nf.contract->ingress) {
            const auto t0 = Clock::now();
            IngressResult in = run_ingress(*nf.contract, pkt, runtime, idx);
            s.timings.ingress_contract_ns += since(t0);
            if (!in.passed() && nf.on_ingress_failure == IngressFailure::PassThrough) {
                ++s.passed_through;
                ++s.packets_out;
                emit(rec, Bytes(rec.data));
                continue;
            }
            pending = std::move(in.violations);
            snapshot = std::move(in.snapshot);
            if (!survive())
                continue;
        }

        const auto t1 = Clock::now();
        TransformResult tr = nf.transform(std::move(pkt));
        s.timings.transform_ns += since(t1);
        if (!tr.packet) {
            ++s.dropped_by_nf;
            ++s.packets_dropped;
            continue;
        }

        if (checked && nf.contract->egress) {
            const auto t2 = Clock::now();
            pending = run_egress(*nf.contract, *tr.packet, snapshot ? &*snapshot : nullptr,
                                 runtime, idx);
            s.timings.egress_contract_ns += since(t2);
            if (!survive())
                continue;
        }

        ++s.packets_out;
        emit(rec, std::move(*tr.packet).release());
    }

    s.total_ns = since(run_start);
    s.snapshots_built = runtime.snapshots_built();
    s.checks_evaluated = runtime.checks_evaluated();
    return result;
}

RunResult run_pipeline(const RunConfig& config, const HeaderRegistry& registry)
{
    // Elaboration first: a bad contract stops the run before any I/O.
    const NfDefinition nf = make_nf(config.nf, registry, config.nf_options);
    ContractRuntime probe(config.mode); // rejects dev mode in builds without contracts
    (void)probe;

    const auto input = config.input ? read_pcap(*config.input) : generate(config.generator);
    RunResult r = run_packets(nf, input, config.mode, config.policy, registry);
    if (config.output)
        write_pcap(*config.output, r.emitted);
    return r;
}

BenchReport bench(const NfDefinition& nf, const std::vector<PcapRecord>& input,
                  std::size_t repetitions, const HeaderRegistry& registry)
{
    if (!kDynamicContracts)
        throw ConfigError("bench needs a build with dynamic contracts");
    if (repetitions == 0)
        throw ConfigError("bench needs at least one repetition");

    std::vector<double> ingress, transform, egress, on, off;
    for (std::size_t i = 0; i < repetitions; ++i) {
        const auto dev = run_packets(nf, input, BuildMode::Development,
                                     ViolationPolicy::Continue, registry).summary;
        ingress.push_back(static_cast<double>(dev.timings.ingress_contract_ns));
        transform.push_back(static_cast<double>(dev.timings.transform_ns));
        egress.push_back(static_cast<double>(dev.timings.egress_contract_ns));
        on.push_back(static_cast<double>(dev.total_ns));
        const auto prod = run_packets(nf, input, BuildMode::Production,
                                      ViolationPolicy::Continue, registry).summary;
        off.push_back(static_cast<double>(prod.total_ns));
    }

    BenchReport b;
    b.nf = nf.name;
    b.packets = input.size();
    b.repetitions = repetitions;
    b.ingress_contract_ns = stat(ingress);
    b.transform_ns = stat(transform);
    b.egress_contract_ns = stat(egress);
    b.contracts_on_total_ns = stat(on);
    b.contracts_off_total_ns = stat(off);
    const double contract = b.ingress_contract_ns.mean + b.egress_contract_ns.mean;
    if (contract > 0) {
        b.ingress_share = b.ingress_contract_ns.mean / contract;
        b.egress_share = b.egress_contract_ns.mean / contract;
    }
    return b;
}

std::string violation_json(const Violation& v)
{
    ordered_json j;
    j["nf"] = v.nf;
    j["phase"] = std::string(to_string(v.phase));
    j["check_index"] = v.check_index ? ordered_json(*v.check_index) : ordered_json(nullptr);
    j["lhs"] = v.lhs;
    j["lhs_value"] = v.lhs_value;
    j["op"] = v.op;
    j["rhs"] = v.rhs;
    j["rhs_value"] = v.rhs_value;
    j["packet_index"] = v.packet_index;
    if (!v.message.empty())
        j["message"] = v.message;
    return j.dump();
}

std::string format_summary_json(const RunSummary& s)
{
    ordered_json j;
    j["nf"] = s.nf;
    j["mode"] = std::string(to_string(s.mode));
    j["policy"] = std::string(to_string(s.policy));
    j["packets_in"] = s.packets_in;
    j["packets_out"] = s.packets_out;
    j["packets_dropped"] = s.packets_dropped;
    j["dropped_by_nf"] = s.dropped_by_nf;
    j["passed_through"] = s.passed_through;
    j["violating_packets"] = s.violating_packets;
    j["aborted"] = s.aborted;
    j["violations"] = ordered_json::array();
    for (const auto& v : s.violations)
        j["violations"].push_back(ordered_json::parse(violation_json(v)));
    j["violations_by_check"] = s.violations_by_check;
    j["timings"] = {{"ingress_contract_ns", s.timings.ingress_contract_ns},
                    {"transform_ns", s.timings.transform_ns},
                    {"egress_contract_ns", s.timings.egress_contract_ns},
                    {"total_ns", s.total_ns}};
    j["counters"] = {{"snapshots_built", s.snapshots_built},
                     {"checks_evaluated", s.checks_evaluated}};
    return j.dump(2) + "\n";
}

std::string format_summary_text(const RunSummary& s)
{
    std::ostringstream os;
    for (const auto& v : s.violations)
        os << v.to_text() << '\n';
    os << "nf " << s.nf << " mode " << to_string(s.mode) << " policy " << to_string(s.policy)
       << '\n';
    os << "packets in " << s.packets_in << ", out " << s.packets_out << ", dropped "
       << s.packets_dropped << " (by nf " << s.dropped_by_nf << "), passed through "
       << s.passed_through << '\n';
    os << "violations " << s.violations.size() << " on " << s.violating_packets << " packets";
    if (s.aborted)
        os << " (aborted)";
    os << '\n';
    for (const auto& [check, n] : s.violations_by_check)
        os << "  " << check << ": " << n << '\n';
    os << "timings ns: ingress " << s.timings.ingress_contract_ns << ", transform "
       << s.timings.transform_ns << ", egress " << s.timings.egress_contract_ns << ", total "
       << s.total_ns << '\n';
    os << "snapshots " << s.snapshots_built << ", checks evaluated " << s.checks_evaluated
       << '\n';
    return os.str();
}

std::string format_bench_json(const BenchReport& b)
{
    ordered_json j;
    j["nf"] = b.nf;
    j["packets"] = b.packets;
    j["repetitions"] = b.repetitions;
    j["phases"] = {{"ingress_contract_ns", stat_json(b.ingress_contract_ns)},
                   {"transform_ns", stat_json(b.transform_ns)},
                   {"egress_contract_ns", stat_json(b.egress_contract_ns)}};
    j["totals"] = {{"contracts_on_ns", stat_json(b.contracts_on_total_ns)},
                   {"contracts_off_ns", stat_json(b.contracts_off_total_ns)}};
    j["shares"] = {{"ingress_contract", b.ingress_share}, {"egress_contract", b.egress_share}};
    return j.dump(2) + "\n";
}

std::string format_bench_text(const BenchReport& b)
{
    char line[160];
    std::string out = "bench " + b.nf + ": " + std::to_string(b.packets) + " packets x "
                      + std::to_string(b.repetitions) + " repetitions\n";
    auto row = [&](const char* label, const Stat& s) {
        std::snprintf(line, sizeof line, "  %-22s mean %14.0f ns  stddev %12.0f ns\n", label,
                      s.mean, s.stddev);
        out += line;
    };
    row("ingress contract", b.ingress_contract_ns);
    row("transform", b.transform_ns);
    row("egress contract", b.egress_contract_ns);
    row("total, contracts on", b.contracts_on_total_ns);
    row("total, contracts off", b.contracts_off_total_ns);
    std::snprintf(line, sizeof line, "  contract overhead share: ingress %.1f%%, egress %.1f%%\n",
                  100 * b.ingress_share, 100 * b.egress_share);
    out += line;
    return out;
}

} // namespace pktc
