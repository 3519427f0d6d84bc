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

#include "pktc/bytes.hpp"

#include <arpa/inet.h>

#include <cstdio>

namespace pktc {

std::string format_mac(ByteView mac)
{
    std::string out;
    char buf[4];
    for (std::size_t i = 0; i < mac.size(); ++i) {
        std::snprintf(buf, sizeof(buf), i == 0 ? "%02x" : ":%02x", mac[i]);
        out += buf;
    }
    return out;
}

std::string format_ipv6(ByteView addr)
{
    if (addr.size() != 16)
        return format_hex(addr);
    char buf[INET6_ADDRSTRLEN];
    if (::inet_ntop(AF_INET6, addr.data(), buf, sizeof(buf)) == nullptr)
        return format_hex(addr);
    return buf;
}

std::string format_hex(ByteView bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(2 + bytes.size() * 2);
    for (auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

std::string format_bytes(ByteView bytes)
{
    switch (bytes.size()) {
    case 6:
        return format_mac(bytes);
    case 16:
        return format_ipv6(bytes);
    default:
        return format_hex(bytes);
    }
}

Ipv6Addr parse_ipv6(const std::string& text)
{
    Ipv6Addr out{};
    if (::inet_pton(AF_INET6, text.c_str(), out.data()) != 1)
        throw ParseError("invalid IPv6 address '" + text + "'");
    return out;
}

} // namespace pktc
