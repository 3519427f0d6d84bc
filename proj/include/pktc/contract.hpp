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

#ifndef PKTC_CONTRACT_HPP
#define PKTC_CONTRACT_HPP

#include <map>

#include "pktc/registry.hpp"

#ifndef PKTC_DYNAMIC_CONTRACTS
#define PKTC_DYNAMIC_CONTRACTS 1
#endif

namespace pktc {

/// False when the library was built with dynamic contracts compiled out;
/// static assertions and order verification remain either way.
inline constexpr bool kDynamicContracts = PKTC_DYNAMIC_CONTRACTS != 0;

enum class Comparator { Eq, Neq, Lt, Le, Gt, Ge };
enum class Source { CurrentPacket, IngressSnapshot };
enum class Phase { Ingress, Egress };
enum class BuildMode { Development, Production };

std::string_view to_string(Comparator op) noexcept;
std::string_view to_string(Phase phase) noexcept;
std::string_view to_string(BuildMode mode) noexcept;
std::optional<Comparator> parse_comparator(std::string_view text) noexcept;

/// Applies the comparator. Integers compare numerically, byte sequences
/// bytewise; byte sequences only support == and neq.
bool compare(const Value& lhs, Comparator op, const Value& rhs);

using ConstantBindings = std::map<std::string, std::int64_t, std::less<>>;

class ContractError : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

struct HeaderRef
{
    std::string type;
    std::optional<std::string> parameter;
    std::uint16_t occurrence = 0;

    std::string to_string() const;
};

/// payload_len[Ipv6Hdr], checksum[TcpHdr<Ipv6Hdr>], ...
struct FieldRef
{
    struct Binding
    {
        HeaderTypeId type;
        std::optional<HeaderTypeId> parameter;
        std::size_t accessor;
        ValueKind kind;
    };

    std::string accessor;
    HeaderRef header;
    Source source = Source::CurrentPacket;
    std::optional<Binding> binding; // set by bind()

    /// Resolves names to registry indices. Throws ContractError naming the
    /// unknown header or accessor.
    void bind(const HeaderRegistry& registry);
    std::string to_string() const;
};

struct Literal
{
    std::int64_t value = 0;
    std::string name; // set when folded from a named constant
};

struct ConstantName
{
    std::string name;
};

/*
 * Right-hand side of a check: a literal, a named constant or a field
 * reference, optionally followed by +/- offsets made of literals and named
 * constants (payload_len[Ipv6Hdr] + SEGMENT_SIZE).
 */
struct Operand
{
    struct Offset
    {
        bool negate = false;
        std::variant<Literal, ConstantName> term;
    };

    std::variant<Literal, ConstantName, FieldRef> base;
    std::vector<Offset> offsets;

    std::string to_string() const;
};

struct Check
{
    FieldRef lhs;
    Comparator op = Comparator::Eq;
    Operand rhs;

    std::string to_string() const;
};

/*
 * Mirror of the packet as it entered the NF: one entry per (header type,
 * occurrence) holding every accessor value and the header's raw bytes.
 * Owns its data; later mutation of the packet cannot reach it.
 */
class IngressSnapshot
{
public:
    struct Entry
    {
        HeaderTypeId type;
        std::uint16_t occurrence;
        std::vector<Value> values; // indexed like the descriptor's accessors
        Bytes raw;
    };

    /// Throws ContractError when the packet chain does not match the order.
    static IngressSnapshot capture(const Packet& packet, const ResolvedOrder& order);

    const Entry* find(HeaderTypeId type, std::uint16_t occurrence = 0) const noexcept;
    std::size_t size() const noexcept { return entries_.size(); }
    const Value* value(const FieldRef::Binding& b, std::uint16_t occurrence) const noexcept;

private:
    static std::uint32_t key(HeaderTypeId type, std::uint16_t occ) noexcept
    {
        return (std::uint32_t{type} << 16) | occ;
    }

    std::unordered_map<std::uint32_t, Entry> entries_;
};

struct Violation
{
    enum class Kind { CheckFailed, ResolutionError, OrderMismatch };

    Kind kind = Kind::CheckFailed;
    std::string nf;
    Phase phase = Phase::Ingress;
    std::optional<std::size_t> check_index; // empty for order mismatches
    std::string lhs;
    std::string lhs_value;
    std::string op;
    std::string rhs;
    std::string rhs_value;
    std::uint64_t packet_index = 0;
    std::string message;

    /// NF <name> [<phase>#<idx>] <lhs>=<val> <op> <rhs>=<val> FAILED (packet <n>)
    std::string to_text() const;
};

struct EvalContext
{
    std::string_view nf;
    Phase phase = Phase::Ingress;
    std::size_t check_index = 0;
    std::uint64_t packet_index = 0;
};

/// Reads a field from the packet or, for IngressSnapshot refs, the snapshot.
/// Throws ContractError when the header, accessor or snapshot is missing.
Value resolve_field(const FieldRef& ref, const Packet& packet,
                    const IngressSnapshot* snapshot);

/// Throws ContractError on unbound constants, unresolved fields, negative or
/// overflowing integer results, and offsets applied to byte values.
Value resolve_operand(const Operand& operand, const Packet& packet,
                      const IngressSnapshot* snapshot,
                      const ConstantBindings& constants);

/// Returns a Violation when the check fails or cannot be resolved.
std::optional<Violation> eval_check(const Check& check, const Packet& packet,
                                    const IngressSnapshot* snapshot,
                                    const ConstantBindings& constants,
                                    const EvalContext& ctx = {});

struct PhaseContract
{
    ResolvedOrder order;
    std::vector<Check> checks; // closed: rhs holds no named constants
};

struct StaticAssertionRecord
{
    std::string text;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
};

/// Elaborated, executable contract attached to an NF.
struct Contract
{
    std::string nf;
    ConstantBindings constants;
    std::vector<StaticAssertionRecord> static_assertions;
    std::optional<PhaseContract> ingress;
    std::optional<PhaseContract> egress;

    std::string describe(const HeaderRegistry& registry) const;
};

/*
 * Build mode plus instrumentation. The mode is fixed once packets flow.
 * In Production, run_ingress/run_egress are pass-throughs and both counters
 * stay at zero.
 */
class ContractRuntime
{
public:
    explicit ContractRuntime(BuildMode mode = kDynamicContracts ? BuildMode::Development
                                                                : BuildMode::Production);

    BuildMode mode() const noexcept { return mode_; }
    bool dynamic() const noexcept
    {
        return kDynamicContracts && mode_ == BuildMode::Development;
    }

    /// Throws ConfigError after packets have flowed, or when selecting
    /// Development in a build without dynamic contracts.
    void set_mode(BuildMode mode);
    void note_packet() noexcept { packets_seen_.fetch_add(1, std::memory_order_relaxed); }

    std::uint64_t snapshots_built() const noexcept { return snapshots_.load(); }
    std::uint64_t checks_evaluated() const noexcept { return checks_.load(); }
    std::uint64_t packets_seen() const noexcept { return packets_seen_.load(); }

    void count_snapshot() noexcept { snapshots_.fetch_add(1, std::memory_order_relaxed); }
    void count_checks(std::uint64_t n) noexcept { checks_.fetch_add(n, std::memory_order_relaxed); }

private:
    BuildMode mode_;
    std::atomic<std::uint64_t> snapshots_{0};
    std::atomic<std::uint64_t> checks_{0};
    std::atomic<std::uint64_t> packets_seen_{0};
};

struct IngressResult
{
    bool order_ok = true;
    std::vector<Violation> violations;
    std::optional<IngressSnapshot> snapshot;

    bool passed() const noexcept { return violations.empty(); }
};

/// Order match, then every check (no short-circuit), then the snapshot. An
/// order mismatch is reported alone: no checks, no snapshot. Empty result in
/// Production or without an ingress block.
IngressResult run_ingress(const Contract& contract, const Packet& packet,
                          ContractRuntime& runtime, std::uint64_t packet_index = 0);

/// Order match, then every check; snapshot refs resolve against `snapshot`.
/// An order mismatch is reported alone.
std::vector<Violation> run_egress(const Contract& contract, const Packet& packet,
                                  const IngressSnapshot* snapshot,
                                  ContractRuntime& runtime,
                                  std::uint64_t packet_index = 0);

} // namespace pktc

#endif /* PKTC_CONTRACT_HPP */
