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

#include "pktc/elaboration.hpp"

#include <cctype>
#include <charconv>

namespace pktc {

SpecError::SpecError(const std::string& what, std::size_t line, std::size_t column)
    : ContractError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column)
{}

// Constant expressions

std::int64_t ConstExpr::evaluate(const ConstantBindings& constants) const
{
    std::int64_t out = 0;
    switch (kind) {
    case Kind::Int:
        return value;
    case Kind::Name: {
        auto it = constants.find(name);
        if (it == constants.end())
            throw ElaborationError("unbound constant " + name);
        return it->second;
    }
    case Kind::Neg:
        if (__builtin_sub_overflow(std::int64_t{0}, operands.at(0).evaluate(constants), &out))
            throw ElaborationError("integer overflow in static expression");
        return out;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul: {
        const auto a = operands.at(0).evaluate(constants);
        const auto b = operands.at(1).evaluate(constants);
        bool overflow = kind == Kind::Add   ? __builtin_add_overflow(a, b, &out)
                        : kind == Kind::Sub ? __builtin_sub_overflow(a, b, &out)
                                            : __builtin_mul_overflow(a, b, &out);
        if (overflow)
            throw ElaborationError("integer overflow in static expression");
        return out;
    }
    }
    return out;
}

StaticAssertionRecord StaticAssertion::check(const ConstantBindings& constants) const
{
    StaticAssertionRecord r{text, lhs.evaluate(constants), rhs.evaluate(constants)};
    bool holds = false;
    switch (op) {
    case Comparator::Eq: holds = r.lhs == r.rhs; break;
    case Comparator::Neq: holds = r.lhs != r.rhs; break;
    case Comparator::Lt: holds = r.lhs < r.rhs; break;
    case Comparator::Le: holds = r.lhs <= r.rhs; break;
    case Comparator::Gt: holds = r.lhs > r.rhs; break;
    case Comparator::Ge: holds = r.lhs >= r.rhs; break;
    }
    if (!holds)
        throw ElaborationError("static assertion failed: " + text + " (left side = "
                               + std::to_string(r.lhs) + ", right side = "
                               + std::to_string(r.rhs) + ")");
    return r;
}

namespace {

// Lexer

struct Token
{
    enum class Kind { Name, Int, Punct, Ellipsis, End };

    Kind kind = Kind::End;
    std::string text;
    std::int64_t value = 0;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }

        Token t;
        t.line = line;
        t.column = col;
        t.offset = i;

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size()
                   && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Token::Kind::Name;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            int base = 10;
            if (c == '0' && i + 1 < src.size() && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
                base = 16;
                j += 2;
            }
            const std::size_t digits = j;
            while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))
                   && (base == 16 || std::isdigit(static_cast<unsigned char>(src[j]))))
                ++j;
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(src.data() + digits, src.data() + j, v, base);
            if (ec != std::errc() || p != src.data() + j || j == digits)
                throw SpecError("invalid integer literal '"
                                    + std::string(src.substr(i, j - i)) + "'",
                                line, col);
            t.kind = Token::Kind::Int;
            t.value = v;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (src.substr(i, 3) == "...") {
            t.kind = Token::Kind::Ellipsis;
            t.text = "...";
            advance(3);
        } else {
            static constexpr std::string_view two[] = {"=>", "==", "<=", ">=", "!="};
            std::string_view p;
            // "Hdr<Param>=>Next": close the parameter before the arrow.
            if (src.substr(i, 3) == ">=>")
                p = ">";
            for (auto op : two)
                if (p.empty() && src.substr(i, 2) == op)
                    p = op;
            if (p.empty()) {
                static constexpr std::string_view one = "(){}[],:=<>.+-*";
                if (one.find(c) == std::string_view::npos)
                    throw SpecError(std::string("unexpected character '") + c + "'", line,
                                    col);
                p = src.substr(i, 1);
            }
            t.kind = Token::Kind::Punct;
            t.text = std::string(p);
            advance(p.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    end.offset = src.size();
    out.push_back(end);
    return out;
}

// Parser

class Parser
{
public:
    Parser(std::string_view src, const HeaderRegistry& registry)
        : src_(src), tokens_(tokenize(src)), registry_(registry)
    {}

    ContractSpec parse(std::string nf)
    {
        ContractSpec spec;
        spec.nf = std::move(nf);

        expect_name("check");
        expect("(");
        if (!peek_punct(")")) {
            do {
                const Token& name = expect_kind(Token::Kind::Name, "constant name");
                expect("=");
                const std::int64_t v = parse_signed_int();
                if (!spec.constants.emplace(name.text, v).second)
                    fail(name, "duplicate constant " + name.text);
            } while (accept(","));
        }
        expect(")");
        constants_ = &spec.constants;

        while (peek().kind != Token::Kind::End) {
            const Token& kw = expect_kind(Token::Kind::Name, "'pre', 'post' or 'static'");
            if (kw.text == "pre" || kw.text == "post") {
                const Phase phase = kw.text == "pre" ? Phase::Ingress : Phase::Egress;
                auto& slot = phase == Phase::Ingress ? spec.ingress : spec.egress;
                if (slot)
                    fail(kw, "duplicate '" + kw.text + "' block");
                if (phase == Phase::Ingress && spec.egress)
                    fail(kw, "'pre' must precede 'post'");
                if (!spec.static_assertions.empty())
                    fail(kw, "'" + kw.text + "' must precede 'static'");
                slot = parse_phase(phase);
            } else if (kw.text == "static") {
                if (seen_static_)
                    fail(kw, "duplicate 'static' block");
                seen_static_ = true;
                expect(":");
                expect("[");
                if (!peek_punct("]")) {
                    do {
                        spec.static_assertions.push_back(parse_assertion());
                    } while (accept(","));
                }
                expect("]");
            } else {
                fail(kw, "unknown key '" + kw.text + "'");
            }
        }
        return spec;
    }

private:
    PhaseSpec parse_phase(Phase phase)
    {
        PhaseSpec out;
        expect("{");
        bool have_order = false, have_checks = false;
        if (!peek_punct("}")) {
            do {
                const Token& key = expect_kind(Token::Kind::Name, "key");
                expect(":");
                if (key.text == "input" && !out.input && !have_order) {
                    out.input = expect_kind(Token::Kind::Name, "input name").text;
                } else if (key.text == "order" && !have_order) {
                    have_order = true;
                    out.order = parse_order();
                } else if (key.text == "checks" && have_order && !have_checks) {
                    have_checks = true;
                    expect("[");
                    if (!peek_punct("]")) {
                        do {
                            out.checks.push_back(parse_check(phase));
                        } while (accept(","));
                    }
                    expect("]");
                } else {
                    fail(key, "unexpected key '" + key.text + "'");
                }
            } while (accept(","));
        }
        if (!have_order)
            fail(peek(), "phase block requires 'order'");
        expect("}");
        return out;
    }

    OrderSpec parse_order()
    {
        OrderSpec out;
        expect("[");
        do {
            out.elements.push_back(parse_header_elem());
        } while (accept("=>"));
        expect("]");
        return out;
    }

    OrderElement parse_header_elem()
    {
        const Token& name = expect_kind(Token::Kind::Name, "header type");
        auto id = registry_.find(name.text);
        if (!id)
            fail(name, "unknown header type " + name.text);
        OrderElement el{name.text, std::nullopt};
        if (accept("<")) {
            const auto& declared = registry_.descriptor(*id).parameter;
            if (peek().kind == Token::Kind::Ellipsis) {
                const Token& t = next();
                if (!declared)
                    fail(t, name.text + " takes no parameter");
                el.parameter = *declared;
            } else {
                const Token& p = expect_kind(Token::Kind::Name, "parameter header type");
                if (!registry_.find(p.text))
                    fail(p, "unknown header type " + p.text);
                if (!declared || *declared != p.text)
                    fail(p, name.text + " is not parameterized by " + p.text);
                el.parameter = p.text;
            }
            expect(">");
        }
        return el;
    }

    FieldRef parse_field_ref(Source source)
    {
        accept(".");
        const Token& acc = expect_kind(Token::Kind::Name, "accessor name");
        expect("[");
        OrderElement el = parse_header_elem();
        expect("]");
        FieldRef ref;
        ref.accessor = acc.text;
        ref.header = HeaderRef{el.type, el.parameter, 0};
        ref.source = source;
        try {
            ref.bind(registry_);
        } catch (const ContractError& e) {
            fail(acc, e.what());
        }
        return ref;
    }

    bool at_field_ref() const
    {
        const Token& t = peek();
        if (t.kind == Token::Kind::Punct && t.text == ".")
            return true;
        return t.kind == Token::Kind::Name && peek(1).kind == Token::Kind::Punct
               && peek(1).text == "[";
    }

    Check parse_check(Phase phase)
    {
        Check c;
        expect("(");
        c.lhs = parse_field_ref(Source::CurrentPacket);
        expect(",");
        const Token& op = next();
        auto cmp = parse_comparator(op.text);
        if (!cmp || op.text == "!=")
            fail(op, "expected comparator (==, neq, <, <=, >, >=), got '" + op.text + "'");
        c.op = *cmp;
        expect(",");

        if (at_field_ref()) {
            c.rhs.base = parse_field_ref(phase == Phase::Egress ? Source::IngressSnapshot
                                                                : Source::CurrentPacket);
        } else {
            std::visit([&](auto&& t) { c.rhs.base = std::move(t); }, parse_term());
        }
        while (peek_punct("+") || peek_punct("-")) {
            const bool negate = next().text == "-";
            c.rhs.offsets.push_back({negate, parse_term()});
        }
        expect(")");
        return c;
    }

    std::variant<Literal, ConstantName> parse_term()
    {
        const Token& t = peek();
        if (t.kind == Token::Kind::Int || peek_punct("-"))
            return Literal{parse_signed_int(), {}};
        if (t.kind == Token::Kind::Name) {
            next();
            if (!constants_->count(t.text))
                fail(t, "unbound constant " + t.text);
            return ConstantName{t.text};
        }
        fail(t, "expected integer, constant or field reference");
    }

    std::int64_t parse_signed_int()
    {
        const bool neg = accept("-");
        const Token& t = expect_kind(Token::Kind::Int, "integer");
        return neg ? -t.value : t.value;
    }

    // Static assertions

    StaticAssertion parse_assertion()
    {
        const std::size_t start = peek().offset;
        StaticAssertion a;
        a.lhs = parse_sum();
        const Token& op = next();
        auto cmp = parse_comparator(op.text);
        if (!cmp || op.text == "!=")
            fail(op, "static assertion requires a comparator, got '" + op.text + "'");
        a.op = *cmp;
        a.rhs = parse_sum();
        a.text = trim(src_.substr(start, peek().offset - start));
        return a;
    }

    ConstExpr parse_sum()
    {
        ConstExpr lhs = parse_product();
        while (peek_punct("+") || peek_punct("-")) {
            const auto kind = next().text == "+" ? ConstExpr::Kind::Add : ConstExpr::Kind::Sub;
            ConstExpr e;
            e.kind = kind;
            e.operands.push_back(std::move(lhs));
            e.operands.push_back(parse_product());
            lhs = std::move(e);
        }
        return lhs;
    }

    ConstExpr parse_product()
    {
        ConstExpr lhs = parse_unary();
        while (accept("*")) {
            ConstExpr e;
            e.kind = ConstExpr::Kind::Mul;
            e.operands.push_back(std::move(lhs));
            e.operands.push_back(parse_unary());
            lhs = std::move(e);
        }
        return lhs;
    }

    ConstExpr parse_unary()
    {
        if (accept("-")) {
            ConstExpr e;
            e.kind = ConstExpr::Kind::Neg;
            e.operands.push_back(parse_unary());
            return e;
        }
        if (accept("(")) {
            ConstExpr e = parse_sum();
            expect(")");
            return e;
        }
        const Token& t = next();
        ConstExpr e;
        if (t.kind == Token::Kind::Int) {
            e.kind = ConstExpr::Kind::Int;
            e.value = t.value;
        } else if (t.kind == Token::Kind::Name && t.text != "neq") {
            if (!constants_->count(t.text))
                fail(t, "unbound constant " + t.text);
            e.kind = ConstExpr::Kind::Name;
            e.name = t.text;
        } else {
            fail(t, "expected integer, constant or '(' in static assertion");
        }
        return e;
    }

    // Token helpers

    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }

    const Token& next()
    {
        const Token& t = peek();
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }

    bool peek_punct(std::string_view p) const
    {
        return peek().kind == Token::Kind::Punct && peek().text == p;
    }

    bool accept(std::string_view p)
    {
        if (!peek_punct(p))
            return false;
        next();
        return true;
    }

    void expect(std::string_view p)
    {
        if (!accept(p))
            fail(peek(), "expected '" + std::string(p) + "', got " + describe(peek()));
    }

    void expect_name(std::string_view name)
    {
        const Token& t = peek();
        if (t.kind != Token::Kind::Name || t.text != name)
            fail(t, "expected '" + std::string(name) + "', got " + describe(t));
        next();
    }

    const Token& expect_kind(Token::Kind kind, std::string_view what)
    {
        if (peek().kind != kind)
            fail(peek(), "expected " + std::string(what) + ", got " + describe(peek()));
        return next();
    }

    static std::string describe(const Token& t)
    {
        return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    }

    [[noreturn]] static void fail(const Token& t, const std::string& what)
    {
        throw SpecError(what, t.line, t.column);
    }

    static std::string trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        return std::string(s);
    }

    std::string_view src_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const HeaderRegistry& registry_;
    const ConstantBindings* constants_ = nullptr;
    bool seen_static_ = false;
};

// Elaboration helpers

std::variant<Literal, ConstantName> fold_term(const std::variant<Literal, ConstantName>& t,
                                              const ConstantBindings& constants)
{
    if (const auto* c = std::get_if<ConstantName>(&t)) {
        auto it = constants.find(c->name);
        if (it == constants.end())
            throw ElaborationError("unbound constant " + c->name);
        return Literal{it->second, c->name};
    }
    return t;
}

std::size_t occurrences_in(const ResolvedOrder& order, HeaderTypeId type)
{
    std::size_t n = 0;
    for (const auto& el : order.elements)
        n += el.type == type ? 1 : 0;
    return n;
}

PhaseContract close_phase(const PhaseSpec& spec, Phase phase, const ContractSpec& contract,
                          const std::optional<ResolvedOrder>& ingress_order,
                          const HeaderRegistry& registry)
{
    PhaseContract out;
    out.order = registry.verify_order(spec.order);
    const std::string where = "contract " + contract.nf + " " + std::string(to_string(phase));

    for (std::size_t i = 0; i < spec.checks.size(); ++i) {
        Check c = spec.checks[i];
        const std::string label = where + " check #" + std::to_string(i) + " " + c.to_string();

        try {
            c.lhs.bind(registry);
        } catch (const ContractError& e) {
            throw ElaborationError(label + ": " + e.what());
        }
        if (c.lhs.header.occurrence >= occurrences_in(out.order, c.lhs.binding->type))
            throw ElaborationError(label + ": " + c.lhs.header.to_string()
                                   + " is not in the " + std::string(to_string(phase))
                                   + " order");

        std::optional<ValueKind> rhs_kind = ValueKind::Integer;
        if (auto* ref = std::get_if<FieldRef>(&c.rhs.base)) {
            try {
                ref->bind(registry);
            } catch (const ContractError& e) {
                throw ElaborationError(label + ": " + e.what());
            }
            const ResolvedOrder* target = ref->source == Source::IngressSnapshot
                                              ? (ingress_order ? &*ingress_order : nullptr)
                                              : &out.order;
            if (!target)
                throw ElaborationError(label + ": snapshot reference "
                                       + ref->to_string() + " without an ingress order");
            if (ref->header.occurrence >= occurrences_in(*target, ref->binding->type))
                throw ElaborationError(label + ": dangling reference " + ref->to_string()
                                       + " (" + ref->header.to_string()
                                       + " is not in the "
                                       + (ref->source == Source::IngressSnapshot ? "ingress"
                                                                                 : "phase")
                                       + " order)");
            rhs_kind = ref->binding->kind;
            if (rhs_kind == ValueKind::Bytes && !c.rhs.offsets.empty())
                throw ElaborationError(label + ": arithmetic on a byte-sequence field");
        } else if (const auto* name = std::get_if<ConstantName>(&c.rhs.base)) {
            auto it = contract.constants.find(name->name);
            if (it == contract.constants.end())
                throw ElaborationError(label + ": unbound constant " + name->name);
            c.rhs.base = Literal{it->second, name->name};
        }
        for (auto& o : c.rhs.offsets)
            o.term = fold_term(o.term, contract.constants);

        if (c.lhs.binding->kind != *rhs_kind)
            throw ElaborationError(label + ": cannot compare "
                                   + (c.lhs.binding->kind == ValueKind::Bytes ? "bytes" : "integer")
                                   + " with "
                                   + (*rhs_kind == ValueKind::Bytes ? "bytes" : "integer"));
        if (c.lhs.binding->kind == ValueKind::Bytes && c.op != Comparator::Eq
            && c.op != Comparator::Neq)
            throw ElaborationError(label + ": byte-sequence fields admit only == and neq");
        out.checks.push_back(std::move(c));
    }
    return out;
}

} // namespace

ContractSpec parse_contract_spec(std::string_view text, const HeaderRegistry& registry,
                                 std::string nf)
{
    return Parser(text, registry).parse(std::move(nf));
}

Contract elaborate(const ContractSpec& spec, const HeaderRegistry& registry)
{
    if (!registry.frozen())
        throw ElaborationError("registry must be frozen before elaboration");

    Contract out;
    out.nf = spec.nf;
    out.constants = spec.constants;
    for (const auto& a : spec.static_assertions)
        out.static_assertions.push_back(a.check(spec.constants));

    std::optional<ResolvedOrder> ingress_order;
    if (spec.ingress) {
        out.ingress = close_phase(*spec.ingress, Phase::Ingress, spec, std::nullopt, registry);
        ingress_order = out.ingress->order;
    }
    if (spec.egress)
        out.egress = close_phase(*spec.egress, Phase::Egress, spec, ingress_order, registry);
    return out;
}

Contract elaborate(std::string_view text, const HeaderRegistry& registry, std::string nf)
{
    return elaborate(parse_contract_spec(text, registry, std::move(nf)), registry);
}

} // namespace pktc
