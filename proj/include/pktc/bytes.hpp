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

#ifndef PKTC_BYTES_HPP
#define PKTC_BYTES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pktc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using MutableByteView = std::span<std::uint8_t>;

using MacAddr = std::array<std::uint8_t, 6>;
using Ipv6Addr = std::array<std::uint8_t, 16>;

/// Base of every error the library throws.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Truncated buffer or a header whose type/version fields do not match.
class ParseError : public Error
{
public:
    using Error::Error;
};

/// A header value that cannot be serialized because its invariants fail.
class EncodeError : public Error
{
public:
    using Error::Error;
};

// Big-endian load/store. Callers guarantee bounds.

inline std::uint16_t load_be16(const std::uint8_t* p) noexcept
{
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept
{
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16)
           | (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

inline void store_be16(std::uint8_t* p, std::uint16_t v) noexcept
{
    p[0] = static_cast<std::uint8_t>(v >> 8);
    p[1] = static_cast<std::uint8_t>(v);
}

inline void store_be32(std::uint8_t* p, std::uint32_t v) noexcept
{
    p[0] = static_cast<std::uint8_t>(v >> 24);
    p[1] = static_cast<std::uint8_t>(v >> 16);
    p[2] = static_cast<std::uint8_t>(v >> 8);
    p[3] = static_cast<std::uint8_t>(v);
}

template <std::size_t N>
std::array<std::uint8_t, N> load_array(const std::uint8_t* p) noexcept
{
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = p[i];
    return out;
}

// Text forms: MACs as aa:bb:cc:dd:ee:ff, IPv6 per RFC 5952, anything else hex.
std::string format_mac(ByteView mac);
std::string format_ipv6(ByteView addr);
std::string format_hex(ByteView bytes);

/// Renders 6-byte values as MACs, 16-byte values as IPv6, others as hex.
std::string format_bytes(ByteView bytes);

Ipv6Addr parse_ipv6(const std::string& text);

} // namespace pktc

#endif /* PKTC_BYTES_HPP */
