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

#include "pktc/checksum.hpp"

namespace pktc {

namespace {

// Accumulates into 64 bits and folds once at the end; fine for any buffer
// below 2^48 bytes.
std::uint64_t sum_words(ByteView data, std::uint64_t acc) noexcept
{
    const std::size_t n = data.size();
    std::size_t i = 0;
    for (; i + 1 < n; i += 2)
        acc += load_be16(data.data() + i);
    if (i < n)
        acc += std::uint64_t{data[i]} << 8;
    return acc;
}

std::uint16_t fold(std::uint64_t acc) noexcept
{
    while (acc >> 16)
        acc = (acc & 0xffff) + (acc >> 16);
    return static_cast<std::uint16_t>(~acc & 0xffff);
}

} // namespace

std::uint16_t internet_checksum(ByteView data) noexcept
{
    return fold(sum_words(data, 0));
}

std::uint16_t pseudo_header_checksum(const Ipv6Addr& src, const Ipv6Addr& dst,
                                     std::uint32_t upper_len,
                                     std::uint8_t next_header,
                                     ByteView upper_layer)
{
    if (upper_len != upper_layer.size())
        throw Error("pseudo-header length " + std::to_string(upper_len)
                    + " does not match upper-layer size "
                    + std::to_string(upper_layer.size()));

    std::uint8_t tail[8];
    store_be32(tail, upper_len);
    tail[4] = tail[5] = tail[6] = 0;
    tail[7] = next_header;

    std::uint64_t acc = sum_words(src, 0);
    acc = sum_words(dst, acc);
    acc = sum_words(tail, acc);
    acc = sum_words(upper_layer, acc);
    return fold(acc);
}

} // namespace pktc
