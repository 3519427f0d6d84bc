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

#ifndef PKTC_PIPELINE_HPP
#define PKTC_PIPELINE_HPP

#include <filesystem>
#include <map>

#include "pktc/generator.hpp"
#include "pktc/nf.hpp"

namespace pktc {

std::string_view to_string(ViolationPolicy p) noexcept;
std::optional<ViolationPolicy> parse_policy(std::string_view text) noexcept;
std::optional<BuildMode> parse_mode(std::string_view text) noexcept;

struct RunConfig
{
    std::string nf = "mtu-too-big";
    NfOptions nf_options;
    std::optional<std::filesystem::path> input; // pcap; generator when absent
    GeneratorSpec generator;
    std::optional<std::filesystem::path> output;
    BuildMode mode = BuildMode::Development;
    ViolationPolicy policy = ViolationPolicy::Continue;
};

struct PhaseTimings
{
    std::uint64_t ingress_contract_ns = 0;
    std::uint64_t transform_ns = 0;
    std::uint64_t egress_contract_ns = 0;
};

struct RunSummary
{
    std::string nf;
    BuildMode mode = BuildMode::Development;
    ViolationPolicy policy = ViolationPolicy::Continue;

    std::uint64_t packets_in = 0; // processed; stops early on abort
    std::uint64_t packets_out = 0;
    std::uint64_t packets_dropped = 0;
    std::uint64_t dropped_by_nf = 0;    // part of packets_dropped
    std::uint64_t passed_through = 0;   // ingress guard declined the packet
    std::uint64_t violating_packets = 0;
    bool aborted = false;

    std::vector<Violation> violations;
    std::map<std::string, std::uint64_t> violations_by_check; // "egress#2" -> n

    PhaseTimings timings;
    std::uint64_t total_ns = 0;
    std::uint64_t snapshots_built = 0;
    std::uint64_t checks_evaluated = 0;
};

struct RunResult
{
    RunSummary summary;
    std::vector<PcapRecord> emitted; // input timestamps preserved
};

/*
 * Per packet: ingress contract, transform, egress contract (Development),
 * or the transform alone (Production). Violations go through the policy:
 * drop discards the packet, continue forwards it, abort stops the run
 * after counting the packet as dropped.
 */
RunResult run_packets(const NfDefinition& nf, const std::vector<PcapRecord>& input,
                      BuildMode mode, ViolationPolicy policy,
                      const HeaderRegistry& registry = standard_registry());

/// Elaborates the NF before touching any file, then reads/generates,
/// runs and writes. Throws ConfigError, contract errors or PcapError.
RunResult run_pipeline(const RunConfig& config,
                       const HeaderRegistry& registry = standard_registry());

struct Stat
{
    double mean = 0;
    double stddev = 0; // sample standard deviation; 0 for one repetition
};

struct BenchReport
{
    std::string nf;
    std::size_t packets = 0;
    std::size_t repetitions = 0;
    Stat ingress_contract_ns;
    Stat transform_ns;
    Stat egress_contract_ns;
    Stat contracts_on_total_ns;
    Stat contracts_off_total_ns;
    double ingress_share = 0; // ingress / (ingress + egress)
    double egress_share = 0;
};

/// Runs the input `repetitions` times with contracts on, then off.
/// Needs a build with dynamic contracts (ConfigError otherwise).
BenchReport bench(const NfDefinition& nf, const std::vector<PcapRecord>& input,
                  std::size_t repetitions,
                  const HeaderRegistry& registry = standard_registry());

// Reports

std::string format_summary_text(const RunSummary& s);
std::string format_summary_json(const RunSummary& s);
std::string format_bench_text(const BenchReport& b);
std::string format_bench_json(const BenchReport& b);
std::string violation_json(const Violation& v);

} // namespace pktc

#endif /* PKTC_PIPELINE_HPP */
