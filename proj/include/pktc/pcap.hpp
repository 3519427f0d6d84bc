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

#ifndef PKTC_PCAP_HPP
#define PKTC_PCAP_HPP

#include <filesystem>
#include <vector>

#include "pktc/bytes.hpp"

namespace pktc {

// Classic pcap, microsecond timestamps, Ethernet link type.
inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kPcapLinktypeEthernet = 1;
inline constexpr std::uint32_t kPcapSnaplen = 65535;

class PcapError : public Error
{
public:
    using Error::Error;
};

struct PcapRecord
{
    std::uint32_t ts_sec = 0;
    std::uint32_t ts_usec = 0;
    std::uint32_t orig_len = 0; // 0: use data.size() when writing
    Bytes data;

    bool operator==(const PcapRecord&) const = default;
};

/// Little-endian output. Input may be either byte order.
Bytes encode_pcap(const std::vector<PcapRecord>& records);
std::vector<PcapRecord> decode_pcap(ByteView file);

std::vector<PcapRecord> read_pcap(const std::filesystem::path& path);
void write_pcap(const std::filesystem::path& path, const std::vector<PcapRecord>& records);

} // namespace pktc

#endif /* PKTC_PCAP_HPP */
