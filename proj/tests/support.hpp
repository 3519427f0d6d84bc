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

// Test helpers: independent oracles that share no code with the library,
// hand-assembled packets, and a seeded loop for property tests.

#ifndef PKTC_TESTS_SUPPORT_HPP
#define PKTC_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pktc/bytes.hpp"

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

// One's-complement sum the slow way: 16-bit words, end-around carry after
// every addition, odd byte padded on the right.
inline std::uint16_t checksum(const Bytes& data)
{
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i < data.size(); i += 2) {
        std::uint32_t word = std::uint32_t(data[i]) << 8;
        if (i + 1 < data.size())
            word |= data[i + 1];
        sum += word;
        while (sum > 0xffff)
            sum = (sum & 0xffff) + 1;
    }
    return static_cast<std::uint16_t>(~sum & 0xffff);
}

inline void be16(Bytes& b, unsigned v)
{
    b.push_back(std::uint8_t(v >> 8));
    b.push_back(std::uint8_t(v));
}

inline void be32(Bytes& b, std::uint32_t v)
{
    be16(b, v >> 16);
    be16(b, v & 0xffff);
}

inline void le16(Bytes& b, unsigned v)
{
    b.push_back(std::uint8_t(v));
    b.push_back(std::uint8_t(v >> 8));
}

inline void le32(Bytes& b, std::uint32_t v)
{
    le16(b, v & 0xffff);
    le16(b, v >> 16);
}

inline void append(Bytes& b, const Bytes& more)
{
    b.insert(b.end(), more.begin(), more.end());
}

// IPv6 pseudo-header (src, dst, upper length, 3 zero bytes, next header)
// followed by the upper-layer bytes with its checksum field already zero.
inline std::uint16_t pseudo_checksum(const Bytes& src, const Bytes& dst, std::uint8_t nh,
                                     const Bytes& upper)
{
    Bytes p = src;
    append(p, dst);
    be32(p, static_cast<std::uint32_t>(upper.size()));
    p.insert(p.end(), {0, 0, 0, nh});
    append(p, upper);
    return checksum(p);
}

inline Bytes addr(std::uint8_t last)
{
    Bytes a(16, 0);
    a[0] = 0x20;
    a[1] = 0x01;
    a[2] = 0x0d;
    a[3] = 0xb8;
    a[15] = last;
    return a;
}

inline Bytes mac(std::uint8_t last)
{
    return {0x02, 0, 0, 0, 0, last};
}

inline Bytes eth(const Bytes& dst, const Bytes& src)
{
    Bytes b = dst;
    append(b, src);
    be16(b, 0x86dd);
    return b;
}

inline Bytes ipv6(unsigned payload_len, std::uint8_t nh, const Bytes& src, const Bytes& dst,
                  std::uint8_t hop = 64)
{
    Bytes b{0x60, 0, 0, 0};
    be16(b, payload_len);
    b.push_back(nh);
    b.push_back(hop);
    append(b, src);
    append(b, dst);
    return b;
}

// TCP with no options and `data` bytes of 0xab, checksum over the
// pseudo-header.
inline Bytes tcp(const Bytes& src, const Bytes& dst, std::size_t data)
{
    Bytes t;
    be16(t, 40000);
    be16(t, 443);
    be32(t, 0x01020304);
    be32(t, 0);
    t.push_back(5 << 4);
    t.push_back(0x10);
    be16(t, 0xffff);
    be16(t, 0); // checksum
    be16(t, 0);
    t.insert(t.end(), data, 0xab);
    const auto sum = pseudo_checksum(src, dst, 6, t);
    t[16] = std::uint8_t(sum >> 8);
    t[17] = std::uint8_t(sum);
    return t;
}

// SRv6 routing header with `segs` segments, next header 59.
inline Bytes srh(std::size_t segs, std::uint8_t segments_left)
{
    Bytes b{59, std::uint8_t(2 * segs), 4, segments_left, std::uint8_t(segs - 1), 0, 0, 0};
    for (std::size_t i = 0; i < segs; ++i)
        append(b, addr(std::uint8_t(0x80 + i)));
    return b;
}

// Eth/IPv6/TCP frame whose IPv6 payload_len is `payload_len` (>= 20).
inline Bytes tcp6_frame(unsigned payload_len)
{
    const Bytes s = addr(1), d = addr(2);
    Bytes f = eth(mac(0xbb), mac(0xaa));
    append(f, ipv6(payload_len, 6, s, d));
    append(f, tcp(s, d, payload_len - 20));
    return f;
}

inline Bytes srv6_frame(std::size_t segs, std::uint8_t segments_left, std::size_t data)
{
    const Bytes r = srh(segs, segments_left);
    Bytes f = eth(mac(0xbb), mac(0xaa));
    append(f, ipv6(static_cast<unsigned>(r.size() + data), 43, addr(1), addr(2)));
    append(f, r);
    f.insert(f.end(), data, 0xcd);
    return f;
}

// Classic pcap file, little-endian, written byte by byte.
inline Bytes pcap_file(const std::vector<Bytes>& records)
{
    Bytes f;
    le32(f, 0xa1b2c3d4);
    le16(f, 2);
    le16(f, 4);
    le32(f, 0);
    le32(f, 0);
    le32(f, 65535);
    le32(f, 1);
    std::uint32_t t = 1000;
    for (const auto& r : records) {
        le32(f, t++);
        le32(f, 250);
        le32(f, static_cast<std::uint32_t>(r.size()));
        le32(f, static_cast<std::uint32_t>(r.size()));
        append(f, r);
    }
    return f;
}

} // namespace oracle

namespace props {

inline constexpr int kCases = 500;

// Runs `body(rng, case_index)` kCases times from a fixed seed so failures
// reproduce; doctest's INFO in the body reports the case.
template <typename F>
void for_all(std::uint64_t seed, F&& body, int cases = kCases)
{
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        body(rng, i);
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::uint8_t> b(n);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng());
    return b;
}

} // namespace props

#endif /* PKTC_TESTS_SUPPORT_HPP */
