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

#include "pktc/pcap.hpp"

#include <fstream>
#include <iterator>

namespace pktc {

namespace {

constexpr std::size_t kFileHeader = 24;
constexpr std::size_t kRecordHeader = 16;

void put_le32(Bytes& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le16(Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

struct Reader
{
    ByteView data;
    bool swapped = false;

    std::uint32_t u32(std::size_t at) const
    {
        const std::uint32_t le = std::uint32_t{data[at]} | std::uint32_t{data[at + 1]} << 8
                                 | std::uint32_t{data[at + 2]} << 16
                                 | std::uint32_t{data[at + 3]} << 24;
        return swapped ? load_be32(data.data() + at) : le;
    }
    std::uint16_t u16(std::size_t at) const
    {
        const auto le = static_cast<std::uint16_t>(data[at] | data[at + 1] << 8);
        return swapped ? load_be16(data.data() + at) : le;
    }
};

} // namespace

Bytes encode_pcap(const std::vector<PcapRecord>& records)
{
    Bytes out;
    put_le32(out, kPcapMagic);
    put_le16(out, 2);
    put_le16(out, 4);
    put_le32(out, 0); // thiszone
    put_le32(out, 0); // sigfigs
    put_le32(out, kPcapSnaplen);
    put_le32(out, kPcapLinktypeEthernet);
    for (const auto& r : records) {
        if (r.data.size() > kPcapSnaplen)
            throw PcapError("pcap record larger than snaplen");
        if (r.ts_usec >= 1000000)
            throw PcapError("pcap timestamp microseconds out of range");
        put_le32(out, r.ts_sec);
        put_le32(out, r.ts_usec);
        put_le32(out, static_cast<std::uint32_t>(r.data.size()));
        put_le32(out, r.orig_len ? r.orig_len : static_cast<std::uint32_t>(r.data.size()));
        out.insert(out.end(), r.data.begin(), r.data.end());
    }
    return out;
}

std::vector<PcapRecord> decode_pcap(ByteView file)
{
    if (file.size() < kFileHeader)
        throw PcapError("pcap: truncated file header");
    Reader rd{file};
    if (rd.u32(0) != kPcapMagic) {
        rd.swapped = true;
        if (rd.u32(0) != kPcapMagic)
            throw PcapError("pcap: bad magic " + format_hex(file.subspan(0, 4)));
    }
    if (rd.u16(4) != 2)
        throw PcapError("pcap: unsupported version " + std::to_string(rd.u16(4)));
    const std::uint32_t linktype = rd.u32(20);
    if (linktype != kPcapLinktypeEthernet)
        throw PcapError("pcap: unsupported link type " + std::to_string(linktype));

    std::vector<PcapRecord> records;
    std::size_t at = kFileHeader;
    while (at < file.size()) {
        if (file.size() - at < kRecordHeader)
            throw PcapError("pcap: truncated record header at offset " + std::to_string(at));
        PcapRecord r;
        r.ts_sec = rd.u32(at);
        r.ts_usec = rd.u32(at + 4);
        const std::uint32_t incl = rd.u32(at + 8);
        r.orig_len = rd.u32(at + 12);
        at += kRecordHeader;
        if (file.size() - at < incl)
            throw PcapError("pcap: truncated record data at offset " + std::to_string(at));
        r.data.assign(file.begin() + at, file.begin() + at + incl);
        at += incl;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<PcapRecord> read_pcap(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PcapError("cannot open " + path.string());
    const Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pcap(data);
}

void write_pcap(const std::filesystem::path& path, const std::vector<PcapRecord>& records)
{
    const Bytes data = encode_pcap(records);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw PcapError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw PcapError("write failed: " + path.string());
}

} // namespace pktc
