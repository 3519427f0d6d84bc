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

#include "pktc/contract.hpp"

#include <limits>
#include <sstream>

namespace pktc {

std::string_view to_string(Comparator op) noexcept
{
    switch (op) {
    case Comparator::Eq: return "==";
    case Comparator::Neq: return "neq";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
    }
    return "?";
}

std::string_view to_string(Phase phase) noexcept
{
    return phase == Phase::Ingress ? "ingress" : "egress";
}

std::string_view to_string(BuildMode mode) noexcept
{
    return mode == BuildMode::Development ? "dev" : "prod";
}

std::optional<Comparator> parse_comparator(std::string_view text) noexcept
{
    if (text == "==") return Comparator::Eq;
    if (text == "neq" || text == "!=") return Comparator::Neq;
    if (text == "<") return Comparator::Lt;
    if (text == "<=") return Comparator::Le;
    if (text == ">") return Comparator::Gt;
    if (text == ">=") return Comparator::Ge;
    return std::nullopt;
}

bool compare(const Value& lhs, Comparator op, const Value& rhs)
{
    if (lhs.index() != rhs.index())
        throw ContractError("cannot compare an integer with a byte sequence");
    if (const auto* a = std::get_if<std::uint64_t>(&lhs)) {
        const auto b = std::get<std::uint64_t>(rhs);
        switch (op) {
        case Comparator::Eq: return *a == b;
        case Comparator::Neq: return *a != b;
        case Comparator::Lt: return *a < b;
        case Comparator::Le: return *a <= b;
        case Comparator::Gt: return *a > b;
        case Comparator::Ge: return *a >= b;
        }
    }
    const auto& a = std::get<Bytes>(lhs);
    const auto& b = std::get<Bytes>(rhs);
    switch (op) {
    case Comparator::Eq: return a == b;
    case Comparator::Neq: return a != b;
    default:
        throw ContractError("comparator " + std::string(to_string(op))
                            + " is not defined on byte sequences");
    }
}

std::string HeaderRef::to_string() const
{
    std::string out = type;
    if (parameter)
        out += "<" + *parameter + ">";
    if (occurrence != 0)
        out += "#" + std::to_string(occurrence);
    return out;
}

void FieldRef::bind(const HeaderRegistry& registry)
{
    auto type = registry.find(header.type);
    if (!type)
        throw ContractError("unknown header type " + header.type);
    std::optional<HeaderTypeId> param;
    if (header.parameter) {
        param = registry.find(*header.parameter);
        if (!param)
            throw ContractError("unknown header type " + *header.parameter);
        const auto& declared = registry.descriptor(*type).parameter;
        if (!declared || *declared != *header.parameter)
            throw ContractError(header.type + " is not parameterized by "
                                + *header.parameter);
    }
    auto acc = registry.accessor_index(*type, accessor);
    if (!acc)
        throw ContractError("unknown accessor " + accessor + " on " + header.type);
    binding = Binding{*type, param, *acc,
                      registry.descriptor(*type).accessors[*acc].kind};
}

std::string FieldRef::to_string() const
{
    std::string out = accessor + "[" + header.to_string() + "]";
    if (source == Source::IngressSnapshot)
        out += "@ingress";
    return out;
}

namespace {

std::string literal_string(const Literal& l)
{
    return l.name.empty() ? std::to_string(l.value) : l.name;
}

std::string term_string(const std::variant<Literal, ConstantName>& t)
{
    if (const auto* l = std::get_if<Literal>(&t))
        return literal_string(*l);
    return std::get<ConstantName>(t).name;
}

} // namespace

std::string Operand::to_string() const
{
    std::string out;
    if (const auto* l = std::get_if<Literal>(&base))
        out = literal_string(*l);
    else if (const auto* c = std::get_if<ConstantName>(&base))
        out = c->name;
    else
        out = std::get<FieldRef>(base).to_string();
    for (const auto& o : offsets)
        out += (o.negate ? " - " : " + ") + term_string(o.term);
    return out;
}

std::string Check::to_string() const
{
    return "(" + lhs.to_string() + ", " + std::string(pktc::to_string(op)) + ", "
           + rhs.to_string() + ")";
}

// Snapshot

IngressSnapshot IngressSnapshot::capture(const Packet& packet, const ResolvedOrder& order)
{
    const auto match = match_chain(packet, order);
    if (!match.ok())
        throw ContractError("cannot snapshot: " + match.message);

    // Copy the frame and walk it header by header in the declared order.
    Packet mirror(packet.bytes(), packet.registry());
    std::size_t cursor = 0;
    for (const auto& el : order.elements)
        cursor += mirror.parse_header(el.type, cursor);

    IngressSnapshot snap;
    snap.entries_.reserve(mirror.chain().size());
    for (const auto& e : mirror.chain()) {
        const auto& d = packet.registry().descriptor(e.type);
        Entry entry{e.type, e.occurrence, {}, {}};
        entry.values.reserve(d.accessors.size());
        for (const auto& a : d.accessors)
            entry.values.push_back(a.read(mirror, e));
        auto raw = mirror.header_bytes(e);
        entry.raw.assign(raw.begin(), raw.end());
        snap.entries_.emplace(key(e.type, e.occurrence), std::move(entry));
    }
    return snap;
}

const IngressSnapshot::Entry* IngressSnapshot::find(HeaderTypeId type,
                                                    std::uint16_t occurrence) const noexcept
{
    auto it = entries_.find(key(type, occurrence));
    return it == entries_.end() ? nullptr : &it->second;
}

const Value* IngressSnapshot::value(const FieldRef::Binding& b,
                                    std::uint16_t occurrence) const noexcept
{
    const Entry* e = find(b.type, occurrence);
    if (!e || b.accessor >= e->values.size())
        return nullptr;
    return &e->values[b.accessor];
}

// Resolution

Value resolve_field(const FieldRef& ref, const Packet& packet,
                    const IngressSnapshot* snapshot)
{
    FieldRef::Binding b;
    if (ref.binding) {
        b = *ref.binding;
    } else {
        FieldRef tmp = ref;
        tmp.bind(packet.registry());
        b = *tmp.binding;
    }

    if (ref.source == Source::IngressSnapshot) {
        if (!snapshot)
            throw ContractError(ref.to_string() + ": ingress snapshot absent");
        const Value* v = snapshot->value(b, ref.header.occurrence);
        if (!v)
            throw ContractError(ref.to_string() + ": header "
                                + ref.header.to_string() + " not in ingress snapshot");
        return *v;
    }

    const auto idx = packet.index_of(b.type, ref.header.occurrence);
    if (!idx)
        throw ContractError(ref.to_string() + ": header " + ref.header.to_string()
                            + " not present in packet");
    if (b.parameter) {
        bool upstream = false;
        for (std::size_t j = 0; j < *idx; ++j)
            upstream = upstream || packet.chain()[j].type == *b.parameter;
        if (!upstream)
            throw ContractError(ref.to_string() + ": no upstream "
                                + *ref.header.parameter);
    }
    const auto& e = packet.chain()[*idx];
    return packet.registry().descriptor(b.type).accessors[b.accessor].read(packet, e);
}

namespace {

std::int64_t term_value(const std::variant<Literal, ConstantName>& t,
                        const ConstantBindings& constants)
{
    if (const auto* l = std::get_if<Literal>(&t))
        return l->value;
    const auto& name = std::get<ConstantName>(t).name;
    auto it = constants.find(name);
    if (it == constants.end())
        throw ContractError("unbound constant " + name);
    return it->second;
}

} // namespace

Value resolve_operand(const Operand& operand, const Packet& packet,
                      const IngressSnapshot* snapshot,
                      const ConstantBindings& constants)
{
    std::int64_t acc = 0;
    if (const auto* l = std::get_if<Literal>(&operand.base)) {
        acc = l->value;
    } else if (const auto* c = std::get_if<ConstantName>(&operand.base)) {
        acc = term_value(*c, constants);
    } else {
        Value v = resolve_field(std::get<FieldRef>(operand.base), packet, snapshot);
        if (std::holds_alternative<Bytes>(v)) {
            if (!operand.offsets.empty())
                throw ContractError(operand.to_string()
                                    + ": arithmetic on a byte-sequence value");
            return v;
        }
        const auto u = std::get<std::uint64_t>(v);
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw ContractError(operand.to_string() + ": value out of range");
        acc = static_cast<std::int64_t>(u);
    }

    for (const auto& o : operand.offsets) {
        const std::int64_t t = term_value(o.term, constants);
        const bool overflow = o.negate ? __builtin_sub_overflow(acc, t, &acc)
                                       : __builtin_add_overflow(acc, t, &acc);
        if (overflow)
            throw ContractError(operand.to_string() + ": integer overflow");
    }
    if (acc < 0)
        throw ContractError(operand.to_string() + " evaluates to negative "
                            + std::to_string(acc));
    return static_cast<std::uint64_t>(acc);
}

std::optional<Violation> eval_check(const Check& check, const Packet& packet,
                                    const IngressSnapshot* snapshot,
                                    const ConstantBindings& constants,
                                    const EvalContext& ctx)
{
    std::optional<Value> lhs;
    std::optional<Value> rhs;
    std::string error;
    try {
        lhs = resolve_field(check.lhs, packet, snapshot);
    } catch (const Error& e) {
        error = e.what();
    }

    // A bare snapshot ref is compared in place rather than copied out.
    const Value* rhs_view = nullptr;
    if (const auto* ref = std::get_if<FieldRef>(&check.rhs.base);
        ref && ref->source == Source::IngressSnapshot && ref->binding && snapshot
        && check.rhs.offsets.empty())
        rhs_view = snapshot->value(*ref->binding, ref->header.occurrence);
    if (!rhs_view) {
        try {
            rhs = resolve_operand(check.rhs, packet, snapshot, constants);
            rhs_view = &*rhs;
        } catch (const Error& e) {
            error += (error.empty() ? "" : "; ") + std::string(e.what());
        }
    }

    if (lhs && rhs_view) {
        try {
            if (compare(*lhs, check.op, *rhs_view))
                return std::nullopt;
        } catch (const ContractError& e) {
            error = e.what();
        }
    }

    // Text is only built for failures; passing checks stay allocation-light.
    Violation v;
    v.nf = std::string(ctx.nf);
    v.phase = ctx.phase;
    v.check_index = ctx.check_index;
    v.packet_index = ctx.packet_index;
    v.lhs = check.lhs.to_string();
    v.op = std::string(to_string(check.op));
    v.rhs = check.rhs.to_string();
    v.lhs_value = lhs ? format_value(*lhs) : "?";
    v.rhs_value = rhs_view ? format_value(*rhs_view) : "?";
    if (error.empty()) {
        v.kind = Violation::Kind::CheckFailed;
        v.message = v.to_text();
    } else {
        v.kind = Violation::Kind::ResolutionError;
        v.message = v.to_text() + ": " + error;
    }
    return v;
}

std::string Violation::to_text() const
{
    std::ostringstream os;
    os << "NF " << nf << " [" << to_string(phase) << "#"
       << (check_index ? std::to_string(*check_index) : std::string("order")) << "] "
       << lhs << "=" << lhs_value << " " << op << " " << rhs << "=" << rhs_value
       << " FAILED (packet " << packet_index << ")";
    return os.str();
}

std::string Contract::describe(const HeaderRegistry& registry) const
{
    (void)registry;
    std::ostringstream os;
    os << "contract " << nf << "\n";
    os << "  constants:";
    if (constants.empty())
        os << " (none)";
    for (const auto& [k, v] : constants)
        os << " " << k << "=" << v;
    os << "\n";
    for (const auto& a : static_assertions)
        os << "  static: " << a.text << "  [" << a.lhs << " vs " << a.rhs << ": ok]\n";
    auto phase = [&](const char* label, const std::optional<PhaseContract>& p) {
        if (!p) {
            os << "  " << label << ": (none)\n";
            return;
        }
        os << "  " << label << " order: " << p->order.source.to_string() << "\n";
        for (std::size_t i = 0; i < p->checks.size(); ++i)
            os << "    #" << i << " " << p->checks[i].to_string() << "\n";
    };
    phase("ingress", ingress);
    phase("egress", egress);
    return os.str();
}

// Runtime

ContractRuntime::ContractRuntime(BuildMode mode) : mode_(mode)
{
    if (!kDynamicContracts && mode == BuildMode::Development)
        throw ConfigError("dynamic contracts were compiled out of this build");
}

void ContractRuntime::set_mode(BuildMode mode)
{
    if (packets_seen() != 0 && mode != mode_)
        throw ConfigError("build mode cannot change after packets have flowed");
    if (!kDynamicContracts && mode == BuildMode::Development)
        throw ConfigError("dynamic contracts were compiled out of this build");
    mode_ = mode;
}

namespace {

Violation order_violation(const Contract& c, Phase phase, const Packet& packet,
                          const ResolvedOrder& order, const ChainMatch& m,
                          std::uint64_t packet_index)
{
    Violation v;
    v.kind = Violation::Kind::OrderMismatch;
    v.nf = c.nf;
    v.phase = phase;
    v.packet_index = packet_index;
    v.lhs = "order";
    std::string actual = "[";
    for (std::size_t i = 0; i < packet.chain().size(); ++i)
        actual += (i ? "=>" : "") + packet.registry().name(packet.chain()[i].type);
    v.lhs_value = actual + "]";
    v.op = "==";
    v.rhs = "expected";
    v.rhs_value = order.source.to_string();
    v.message = v.to_text() + ": " + m.message;
    return v;
}

void eval_all(const Contract& c, const PhaseContract& p, Phase phase,
              const Packet& packet, const IngressSnapshot* snap,
              std::uint64_t packet_index, std::vector<Violation>& out)
{
    for (std::size_t i = 0; i < p.checks.size(); ++i) {
        if (auto v = eval_check(p.checks[i], packet, snap, c.constants,
                                EvalContext{c.nf, phase, i, packet_index}))
            out.push_back(std::move(*v));
    }
}

} // namespace

IngressResult run_ingress(const Contract& contract, const Packet& packet,
                          ContractRuntime& runtime, std::uint64_t packet_index)
{
    IngressResult r;
    if constexpr (!kDynamicContracts)
        return r;
    if (!runtime.dynamic() || !contract.ingress)
        return r;

    const auto& p = *contract.ingress;
    const auto m = match_chain(packet, p.order);
    r.order_ok = m.ok();
    // Checks are written against the declared order; on a mismatch the
    // order violation is the only report.
    if (!m.ok()) {
        r.violations.push_back(
            order_violation(contract, Phase::Ingress, packet, p.order, m, packet_index));
        return r;
    }

    runtime.count_checks(p.checks.size());
    eval_all(contract, p, Phase::Ingress, packet, nullptr, packet_index, r.violations);
    r.snapshot = IngressSnapshot::capture(packet, p.order);
    runtime.count_snapshot();
    return r;
}

std::vector<Violation> run_egress(const Contract& contract, const Packet& packet,
                                  const IngressSnapshot* snapshot,
                                  ContractRuntime& runtime, std::uint64_t packet_index)
{
    std::vector<Violation> out;
    if constexpr (!kDynamicContracts)
        return out;
    if (!runtime.dynamic() || !contract.egress)
        return out;

    const auto& p = *contract.egress;
    const auto m = match_chain(packet, p.order);
    if (!m.ok()) {
        out.push_back(
            order_violation(contract, Phase::Egress, packet, p.order, m, packet_index));
        return out;
    }

    runtime.count_checks(p.checks.size());
    eval_all(contract, p, Phase::Egress, packet, snapshot, packet_index, out);
    return out;
}

} // namespace pktc
