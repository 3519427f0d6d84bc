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

#include "pktc/registry.hpp"

#include "pktc/checksum.hpp"
#include "pktc/headers.hpp"

namespace pktc {

std::string format_value(const Value& v)
{
    if (const auto* i = std::get_if<std::uint64_t>(&v))
        return std::to_string(*i);
    return format_bytes(std::get<Bytes>(v));
}

std::string OrderElement::to_string() const
{
    return parameter ? type + "<" + *parameter + ">" : type;
}

std::string OrderSpec::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i)
            out += "=>";
        out += elements[i].to_string();
    }
    return out + "]";
}

HeaderTypeId HeaderRegistry::register_header(HeaderDescriptor d)
{
    if (frozen_)
        throw RegistryError("registry is frozen; cannot register " + d.id);
    if (d.id.empty())
        throw RegistryError("header id must not be empty");
    if (by_name_.count(d.id))
        throw RegistryError("duplicate header id " + d.id);
    for (const auto& p : d.predecessors)
        if (p != d.id && !by_name_.count(p))
            throw RegistryError(d.id + ": dangling predecessor reference " + p);
    if (d.parameter && *d.parameter != d.id && !by_name_.count(*d.parameter))
        throw RegistryError(d.id + ": dangling parameter reference " + *d.parameter);

    std::unordered_map<std::string, std::size_t> accessors;
    for (std::size_t i = 0; i < d.accessors.size(); ++i)
        if (!accessors.emplace(d.accessors[i].name, i).second)
            throw RegistryError(d.id + ": duplicate accessor " + d.accessors[i].name);

    if (descriptors_.size() >= 0xffff)
        throw RegistryError("registry full");
    const auto id = static_cast<HeaderTypeId>(descriptors_.size());
    if (d.predecessors.empty() && !root_)
        root_ = id;
    by_name_.emplace(d.id, id);
    accessor_by_name_.push_back(std::move(accessors));
    descriptors_.push_back(std::move(d));
    return id;
}

std::optional<HeaderTypeId> HeaderRegistry::find(std::string_view id) const
{
    auto it = by_name_.find(std::string(id));
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

HeaderTypeId HeaderRegistry::require(std::string_view id) const
{
    if (auto found = find(id))
        return *found;
    throw RegistryError("unknown header type " + std::string(id));
}

std::optional<std::size_t> HeaderRegistry::accessor_index(HeaderTypeId id,
                                                          std::string_view accessor) const
{
    const auto& m = accessor_by_name_.at(id);
    auto it = m.find(std::string(accessor));
    if (it == m.end())
        return std::nullopt;
    return it->second;
}

ResolvedOrder HeaderRegistry::verify_order(const OrderSpec& spec) const
{
    verify_calls_.fetch_add(1, std::memory_order_relaxed);

    if (spec.elements.empty())
        throw OrderError("order must not be empty");

    ResolvedOrder out;
    out.source = spec;
    for (const auto& el : spec.elements) {
        auto type = find(el.type);
        if (!type)
            throw OrderError("order " + spec.to_string()
                             + ": unknown header type " + el.type);
        std::optional<HeaderTypeId> param;
        if (el.parameter) {
            param = find(*el.parameter);
            if (!param)
                throw OrderError("order " + spec.to_string()
                                 + ": unknown header type " + *el.parameter);
        }
        out.elements.push_back({*type, param});
    }

    const auto& first = descriptor(out.elements.front().type);
    if (!first.predecessors.empty())
        throw OrderError("order " + spec.to_string() + ": " + first.id
                         + " is not a chain root");

    for (std::size_t i = 0; i < out.elements.size(); ++i) {
        const auto& el = out.elements[i];
        const auto& d = descriptor(el.type);
        if (i > 0) {
            const auto& prev = descriptor(out.elements[i - 1].type);
            if (!d.predecessors.count(prev.id))
                throw OrderError("order " + spec.to_string()
                                 + ": predecessor violation " + prev.id + " => "
                                 + d.id + " (" + d.id + " may not follow "
                                 + prev.id + ")");
        }
        if (el.parameter) {
            const auto& pname = name(*el.parameter);
            if (!d.parameter || *d.parameter != pname)
                throw OrderError("order " + spec.to_string() + ": " + d.id
                                 + " is not parameterized by " + pname);
            bool upstream = false;
            for (std::size_t j = 0; j < i; ++j)
                upstream = upstream || out.elements[j].type == *el.parameter;
            if (!upstream)
                throw OrderError("order " + spec.to_string() + ": parameter "
                                 + pname + " of " + d.id
                                 + " does not appear earlier in the order");
        }
    }
    return out;
}

ChainMatch match_chain(const Packet& packet, const ResolvedOrder& order)
{
    const auto chain = packet.chain();
    const auto& reg = packet.registry();
    const std::size_t common = std::min(chain.size(), order.elements.size());

    for (std::size_t i = 0; i < common; ++i) {
        const auto& want = order.elements[i];
        if (chain[i].type != want.type)
            return {ChainMatch::Kind::TypeMismatch, i,
                    "header " + std::to_string(i) + " is " + reg.name(chain[i].type)
                        + ", expected " + reg.name(want.type)};
        if (want.parameter) {
            bool upstream = false;
            for (std::size_t j = 0; j < i; ++j)
                upstream = upstream || chain[j].type == *want.parameter;
            if (!upstream)
                return {ChainMatch::Kind::ParameterMissing, i,
                        reg.name(want.type) + " at " + std::to_string(i)
                            + " has no upstream " + reg.name(*want.parameter)};
        }
    }
    if (chain.size() != order.elements.size())
        return {ChainMatch::Kind::LengthMismatch, common,
                "chain has " + std::to_string(chain.size())
                    + " headers, expected " + std::to_string(order.elements.size())};
    return {};
}

ChainMatch match_chain(const Packet& packet, const OrderSpec& spec)
{
    const auto& reg = packet.registry();
    ResolvedOrder order;
    order.source = spec;
    for (const auto& el : spec.elements) {
        auto type = reg.find(el.type);
        if (!type)
            return {ChainMatch::Kind::TypeMismatch, order.elements.size(),
                    "unknown header type " + el.type};
        std::optional<HeaderTypeId> param;
        if (el.parameter) {
            param = reg.find(*el.parameter);
            if (!param)
                return {ChainMatch::Kind::TypeMismatch, order.elements.size(),
                        "unknown header type " + *el.parameter};
        }
        order.elements.push_back({*type, param});
    }
    return match_chain(packet, order);
}

// Standard headers

namespace {

FieldAccessor u8_field(std::string name, std::size_t off, std::uint8_t mask = 0xff,
                       unsigned shift = 0)
{
    return {std::move(name), ValueKind::Integer,
            [=](const Packet& p, const ChainEntry& e) -> Value {
                return std::uint64_t{static_cast<std::uint8_t>(
                    (p.bytes()[e.offset + off] >> shift) & mask)};
            }};
}

FieldAccessor be16_field(std::string name, std::size_t off,
                         std::uint16_t mask = 0xffff, unsigned shift = 0)
{
    return {std::move(name), ValueKind::Integer,
            [=](const Packet& p, const ChainEntry& e) -> Value {
                return std::uint64_t{static_cast<std::uint16_t>(
                    (load_be16(p.bytes().data() + e.offset + off) >> shift) & mask)};
            }};
}

FieldAccessor be32_field(std::string name, std::size_t off,
                         std::uint32_t mask = 0xffffffff, unsigned shift = 0)
{
    return {std::move(name), ValueKind::Integer,
            [=](const Packet& p, const ChainEntry& e) -> Value {
                return std::uint64_t{
                    (load_be32(p.bytes().data() + e.offset + off) >> shift) & mask};
            }};
}

FieldAccessor bytes_field(std::string name, std::size_t off, std::size_t len)
{
    return {std::move(name), ValueKind::Bytes,
            [=](const Packet& p, const ChainEntry& e) -> Value {
                const auto* b = p.bytes().data() + e.offset + off;
                return Bytes(b, b + len);
            }};
}

FieldAccessor length_fn()
{
    return {"len", ValueKind::Integer,
            [](const Packet&, const ChainEntry& e) -> Value {
                return std::uint64_t{e.length};
            }};
}

// 1 when the upper-layer checksum verifies against the nearest preceding
// IPv6 header, 0 otherwise (including when there is no IPv6 header).
FieldAccessor checksum_ok_fn(std::uint8_t next_header)
{
    return {"checksum_ok", ValueKind::Integer,
            [=](const Packet& p, const ChainEntry& e) -> Value {
                const auto ipv6 = p.registry().find(Ipv6Hdr::name);
                const ChainEntry* net = nullptr;
                for (const auto& c : p.chain())
                    if (ipv6 && c.type == *ipv6 && c.end() <= e.offset)
                        net = &c;
                if (!net)
                    return std::uint64_t{0};
                const auto* ip = p.bytes().data() + net->offset;
                const auto upper = p.view().subspan(e.offset);
                const auto sum = pseudo_header_checksum(
                    load_array<16>(ip + 8), load_array<16>(ip + 24),
                    static_cast<std::uint32_t>(upper.size()), next_header, upper);
                return std::uint64_t{sum == 0 ? 1u : 0u};
            }};
}

std::optional<std::string> after_ip_protocol(std::uint8_t proto, ByteView after)
{
    switch (proto) {
    case kProtoTcp:
        return std::string(TcpHdr::name);
    case kProtoRouting:
        if (after.size() >= 3 && after[2] == kRoutingTypeSrv6)
            return std::string(Srv6RoutingHdr::name);
        return std::nullopt;
    case kProtoIcmpv6:
        if (!after.empty() && after[0] == kIcmpv6PktTooBigType)
            return std::string(Icmpv6PktTooBig::name);
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

template <typename H>
std::set<std::string> predecessor_names(type_list<>)
{
    return {};
}

template <typename H, typename... Ps>
std::set<std::string> predecessor_names(type_list<Ps...>)
{
    return {std::string(Ps::name)...};
}

template <typename H>
HeaderDescriptor typed_descriptor()
{
    HeaderDescriptor d;
    d.id = std::string(H::name);
    d.min_size = H::min_size;
    d.predecessors = predecessor_names<H>(typename H::predecessors{});
    d.reserialize = [](ByteView h) { return H::decode(h).encode(); };
    d.validate = [](ByteView h) { (void)H::decode(h); };
    d.accessors.push_back(length_fn());
    return d;
}

} // namespace

void register_standard_headers(HeaderRegistry& registry)
{
    {
        auto d = typed_descriptor<EthHdr>();
        d.size_rule = [](ByteView) -> std::size_t { return 14; };
        d.validate = nullptr;
        d.next_header = [](ByteView h, ByteView) -> std::optional<std::string> {
            if (load_be16(h.data() + 12) == kEtherTypeIpv6)
                return std::string(Ipv6Hdr::name);
            return std::nullopt;
        };
        d.accessors.push_back(bytes_field("dst", 0, 6));
        d.accessors.push_back(bytes_field("src", 6, 6));
        d.accessors.push_back(be16_field("ether_type", 12));
        registry.register_header(std::move(d));
    }
    {
        auto d = typed_descriptor<Ipv6Hdr>();
        d.size_rule = [](ByteView) -> std::size_t { return 40; };
        d.validate = [](ByteView h) {
            if ((h[0] >> 4) != 6)
                throw ParseError("Ipv6Hdr: version nibble is "
                                 + std::to_string(h[0] >> 4) + ", expected 6");
        };
        d.next_header = [](ByteView h, ByteView after) {
            return after_ip_protocol(h[6], after);
        };
        d.accessors.push_back(be32_field("version", 0, 0xf, 28));
        d.accessors.push_back(be32_field("traffic_class", 0, 0xff, 20));
        d.accessors.push_back(be32_field("flow_label", 0, 0xfffff));
        d.accessors.push_back(be16_field("payload_len", 4));
        d.accessors.push_back(u8_field("next_header", 6));
        d.accessors.push_back(u8_field("hop_limit", 7));
        d.accessors.push_back(bytes_field("src", 8, 16));
        d.accessors.push_back(bytes_field("dst", 24, 16));
        // Bytes actually following the fixed header, for checking payload_len.
        d.accessors.push_back({"actual_payload_len", ValueKind::Integer,
                               [](const Packet& p, const ChainEntry& e) -> Value {
                                   return std::uint64_t{p.size() - e.end()};
                               }});
        registry.register_header(std::move(d));
    }
    {
        auto d = typed_descriptor<Srv6RoutingHdr>();
        d.size_rule = [](ByteView rest) -> std::size_t {
            return 8 + 8 * std::size_t{rest[1]};
        };
        d.next_header = [](ByteView h, ByteView after) {
            return after_ip_protocol(h[0], after);
        };
        d.accessors.push_back(u8_field("next_header", 0));
        d.accessors.push_back(u8_field("hdr_ext_len", 1));
        d.accessors.push_back(u8_field("routing_type", 2));
        d.accessors.push_back(u8_field("segments_left", 3));
        d.accessors.push_back(u8_field("last_entry", 4));
        d.accessors.push_back(u8_field("flags", 5));
        d.accessors.push_back(be16_field("tag", 6));
        d.accessors.push_back({"segments", ValueKind::Bytes,
                               [](const Packet& p, const ChainEntry& e) -> Value {
                                   auto b = p.bytes().begin() + e.offset;
                                   return Bytes(b + 8, b + e.length);
                               }});
        d.accessors.push_back({"segments_count", ValueKind::Integer,
                               [](const Packet&, const ChainEntry& e) -> Value {
                                   return std::uint64_t{(e.length - 8) / 16};
                               }});
        registry.register_header(std::move(d));
    }
    {
        auto d = typed_descriptor<TcpHdr>();
        d.parameter = std::string(Ipv6Hdr::name);
        d.size_rule = [](ByteView rest) -> std::size_t {
            const std::size_t words = rest[12] >> 4;
            if (words < 5)
                throw ParseError("TcpHdr: data offset " + std::to_string(words)
                                 + " below minimum 5");
            return words * 4;
        };
        d.validate = nullptr;
        d.accessors.push_back(be16_field("src_port", 0));
        d.accessors.push_back(be16_field("dst_port", 2));
        d.accessors.push_back(be32_field("seq", 4));
        d.accessors.push_back(be32_field("ack", 8));
        d.accessors.push_back(be16_field("data_offset", 12, 0xf, 12));
        d.accessors.push_back(be16_field("flags", 12, 0x1ff));
        d.accessors.push_back(be16_field("window", 14));
        d.accessors.push_back(be16_field("checksum", 16));
        d.accessors.push_back(be16_field("urgent_ptr", 18));
        d.accessors.push_back(checksum_ok_fn(kProtoTcp));
        registry.register_header(std::move(d));
    }
    {
        auto d = typed_descriptor<Icmpv6PktTooBig>();
        d.parameter = std::string(Ipv6Hdr::name);
        d.size_rule = [](ByteView rest) -> std::size_t { return rest.size(); };
        d.validate = [](ByteView h) {
            if (h[0] != kIcmpv6PktTooBigType || h[1] != 0)
                throw ParseError("Icmpv6PktTooBig: type/code "
                                 + std::to_string(h[0]) + "/" + std::to_string(h[1])
                                 + ", expected 2/0");
        };
        d.accessors.push_back(u8_field("msg_type", 0));
        d.accessors.push_back(u8_field("code", 1));
        d.accessors.push_back(be16_field("checksum", 2));
        d.accessors.push_back(be32_field("mtu", 4));
        d.accessors.push_back({"invoking_len", ValueKind::Integer,
                               [](const Packet&, const ChainEntry& e) -> Value {
                                   return std::uint64_t{e.length - 8};
                               }});
        d.accessors.push_back(checksum_ok_fn(kProtoIcmpv6));
        registry.register_header(std::move(d));
    }
}

const HeaderRegistry& standard_registry()
{
    static HeaderRegistry registry;
    static const bool ready = [] {
        register_standard_headers(registry);
        registry.freeze();
        return true;
    }();
    (void)ready;
    return registry;
}

} // namespace pktc
