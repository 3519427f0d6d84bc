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

#include "pktc/packet.hpp"

#include <algorithm>

#include "pktc/registry.hpp"

namespace pktc {

Packet::Packet() : registry_(&standard_registry()) {}

Packet::Packet(Bytes bytes, const HeaderRegistry& registry)
    : bytes_(std::move(bytes)), registry_(&registry)
{}

Packet Packet::parse(Bytes bytes, const HeaderRegistry& registry)
{
    Packet p(std::move(bytes), registry);
    p.parse_rest();
    return p;
}

std::size_t Packet::parse_header(HeaderTypeId type, std::size_t at)
{
    const HeaderDescriptor& d = registry_->descriptor(type);
    if (at < payload_offset_)
        throw ParseError(d.id + ": offset " + std::to_string(at)
                         + " overlaps the parsed chain");
    if (at > bytes_.size() || bytes_.size() - at < d.min_size)
        throw ParseError(d.id + ": truncated buffer at offset "
                         + std::to_string(at));

    const ByteView rest = ByteView(bytes_).subspan(at);
    const std::size_t len = d.size_rule ? d.size_rule(rest) : d.min_size;
    if (len < d.min_size || len > rest.size())
        throw ParseError(d.id + ": truncated buffer (header length "
                         + std::to_string(len) + ", "
                         + std::to_string(rest.size()) + " bytes left)");
    if (d.validate)
        d.validate(rest.first(len));

    const auto occurrence = static_cast<std::uint16_t>(
        std::count_if(chain_.begin(), chain_.end(),
                       [type](const ChainEntry& e) { return e.type == type; }));
    chain_.push_back(ChainEntry{type, occurrence, at, len});
    payload_offset_ = at + len;
    return len;
}

std::size_t Packet::parse_header(std::string_view type_name, std::size_t at)
{
    return parse_header(registry_->require(type_name), at);
}

void Packet::parse_rest()
{
    std::optional<HeaderTypeId> next;
    if (chain_.empty()) {
        next = registry_->root();
    } else {
        const ChainEntry& last = chain_.back();
        const HeaderDescriptor& d = registry_->descriptor(last.type);
        if (d.next_header) {
            if (auto name = d.next_header(header_bytes(last),
                                          ByteView(bytes_).subspan(last.end())))
                next = registry_->find(*name);
        }
    }

    while (next) {
        try {
            parse_header(*next, payload_offset_);
        } catch (const ParseError& e) {
            parse_error_ = e.what();
            return;
        }
        const ChainEntry& last = chain_.back();
        const HeaderDescriptor& d = registry_->descriptor(last.type);
        next.reset();
        if (d.next_header) {
            if (auto name = d.next_header(header_bytes(last),
                                          ByteView(bytes_).subspan(last.end())))
                next = registry_->find(*name);
        }
    }
}

void Packet::reparse()
{
    chain_.clear();
    payload_offset_ = 0;
    parse_error_.reset();
    parse_rest();
}

const ChainEntry* Packet::find(HeaderTypeId type, std::uint16_t occurrence) const noexcept
{
    for (const auto& e : chain_)
        if (e.type == type && e.occurrence == occurrence)
            return &e;
    return nullptr;
}

const ChainEntry* Packet::find(std::string_view type_name, std::uint16_t occurrence) const
{
    auto id = registry_->find(type_name);
    return id ? find(*id, occurrence) : nullptr;
}

std::optional<std::size_t> Packet::index_of(HeaderTypeId type,
                                            std::uint16_t occurrence) const noexcept
{
    for (std::size_t i = 0; i < chain_.size(); ++i)
        if (chain_[i].type == type && chain_[i].occurrence == occurrence)
            return i;
    return std::nullopt;
}

void Packet::splice(std::size_t at, std::size_t erase, ByteView insert)
{
    if (at > bytes_.size() || erase > bytes_.size() - at)
        throw EncodeError("splice range outside packet");
    Bytes out;
    out.reserve(bytes_.size() - erase + insert.size());
    out.insert(out.end(), bytes_.begin(), bytes_.begin() + at);
    out.insert(out.end(), insert.begin(), insert.end());
    out.insert(out.end(), bytes_.begin() + at + erase, bytes_.end());
    bytes_ = std::move(out);
    chain_.clear();
    payload_offset_ = 0;
    parse_error_.reset();
}

Bytes Packet::serialize() const
{
    Bytes out;
    out.reserve(bytes_.size());
    std::size_t cursor = 0;
    for (const auto& e : chain_) {
        out.insert(out.end(), bytes_.begin() + cursor, bytes_.begin() + e.offset);
        const HeaderDescriptor& d = registry_->descriptor(e.type);
        if (d.reserialize) {
            Bytes h = d.reserialize(header_bytes(e));
            out.insert(out.end(), h.begin(), h.end());
        } else {
            auto h = header_bytes(e);
            out.insert(out.end(), h.begin(), h.end());
        }
        cursor = e.end();
    }
    out.insert(out.end(), bytes_.begin() + cursor, bytes_.end());
    return out;
}

} // namespace pktc
