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

#ifndef PKTC_CHECKSUM_HPP
#define PKTC_CHECKSUM_HPP

#include "pktc/bytes.hpp"

namespace pktc {

inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoRouting = 43;
inline constexpr std::uint8_t kProtoIcmpv6 = 58;
inline constexpr std::uint8_t kProtoNoNext = 59;

/*
 * RFC 1071 Internet checksum: one's complement of the one's complement sum
 * of 16-bit big-endian words. Odd lengths are padded with a zero byte.
 * A result of 0xFFFF is returned as-is (no zero/0xFFFF folding).
 */
std::uint16_t internet_checksum(ByteView data) noexcept;

/// Checksum over the IPv6 pseudo-header followed by the upper-layer bytes.
/// The checksum field inside upper_layer must already be zeroed, or hold the
/// transmitted value when verifying (a correct packet then yields 0).
/// Throws Error when upper_len != upper_layer.size().
std::uint16_t pseudo_header_checksum(const Ipv6Addr& src, const Ipv6Addr& dst,
                                     std::uint32_t upper_len,
                                     std::uint8_t next_header,
                                     ByteView upper_layer);

} // namespace pktc

#endif /* PKTC_CHECKSUM_HPP */
