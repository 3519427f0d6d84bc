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

#ifndef PKTC_ELABORATION_HPP
#define PKTC_ELABORATION_HPP

#include "pktc/contract.hpp"

namespace pktc {

/// Malformed or unresolvable contract text. line/column are 1-based.
class SpecError : public ContractError
{
public:
    SpecError(const std::string& what, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Elaboration rejected the contract (failed static assertion, dangling
/// snapshot reference, type mismatch in a check).
class ElaborationError : public ContractError
{
public:
    using ContractError::ContractError;
};

/// Integer expression over literals and named constants: + - * and parens.
struct ConstExpr
{
    enum class Kind { Int, Name, Add, Sub, Mul, Neg };

    Kind kind = Kind::Int;
    std::int64_t value = 0;
    std::string name;
    std::vector<ConstExpr> operands;

    /// Throws ElaborationError on unbound names or overflow.
    std::int64_t evaluate(const ConstantBindings& constants) const;
};

struct StaticAssertion
{
    ConstExpr lhs;
    Comparator op = Comparator::Eq;
    ConstExpr rhs;
    std::string text;

    /// Evaluates both sides; throws ElaborationError with the expression and
    /// both values when the comparison fails.
    StaticAssertionRecord check(const ConstantBindings& constants) const;
};

struct PhaseSpec
{
    std::optional<std::string> input;
    OrderSpec order;
    std::vector<Check> checks;
};

struct ContractSpec
{
    std::string nf;
    ConstantBindings constants;
    std::vector<StaticAssertion> static_assertions;
    std::optional<PhaseSpec> ingress;
    std::optional<PhaseSpec> egress;
};

/*
 * Parses a contract block:
 *
 *   check(IPV6_MIN_MTU = 1280)
 *   pre  { order: [EthHdr=>Ipv6Hdr=>TcpHdr<Ipv6Hdr>],
 *          checks: [(payload_len[Ipv6Hdr], >, IPV6_MIN_MTU)] }
 *   post { order: [...], checks: [...] }
 *   static: [IPV6_MIN_MTU + ETH_HDR_SIZE == 1294]
 *
 * An optional `input: NAME,` may lead a phase block. `Hdr<...>` takes the
 * header's declared parameter. Right-hand field refs read the same packet
 * in `pre` and the ingress snapshot in `post`; they may carry +/- offsets.
 * `//` starts a comment. Throws SpecError with line/column.
 */
ContractSpec parse_contract_spec(std::string_view text, const HeaderRegistry& registry,
                                 std::string nf = {});

/// Verifies both orders, evaluates the static assertions, folds constants
/// and binds every field ref. Requires a frozen registry. Throws OrderError
/// or ElaborationError.
Contract elaborate(const ContractSpec& spec, const HeaderRegistry& registry);

/// parse_contract_spec + elaborate.
Contract elaborate(std::string_view text, const HeaderRegistry& registry, std::string nf);

} // namespace pktc

#endif /* PKTC_ELABORATION_HPP */
