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

#include <doctest.h>

#include <filesystem>

#include "pktc/pcap.hpp"
#include "support.hpp"

using namespace pktc;

TEST_CASE("reads a file written by the oracle")
{
    const Bytes rec(60, 0x5a);
    const auto records = decode_pcap(oracle::pcap_file({rec}));
    REQUIRE(records.size() == 1);
    CHECK(records[0].data == rec);
    CHECK(records[0].orig_len == 60);
    CHECK(records[0].ts_sec == 1000);
    CHECK(records[0].ts_usec == 250);
}

TEST_CASE("writes the same bytes as the oracle")
{
    const std::vector<Bytes> data{Bytes(60, 1), Bytes(1, 2), Bytes(1500, 3)};
    std::vector<PcapRecord> records;
    std::uint32_t t = 1000;
    for (const auto& d : data)
        records.push_back({t++, 250, 0, d});
    CHECK(encode_pcap(records) == oracle::pcap_file(data));
}

TEST_CASE("big-endian files decode too")
{
    Bytes f{0xa1, 0xb2, 0xc3, 0xd4, 0, 2, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0xff, 0xff, 0, 0, 0, 1,
            0, 0, 0, 9, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0xaa, 0xbb};
    const auto r = decode_pcap(f);
    REQUIRE(r.size() == 1);
    CHECK(r[0].ts_sec == 9);
    CHECK(r[0].data == Bytes{0xaa, 0xbb});
}

TEST_CASE("malformed files")
{
    Bytes f = oracle::pcap_file({Bytes(60, 0)});
    SUBCASE("bad magic")
    {
        f[0] = 0xef;
        f[1] = 0xbe;
        f[2] = 0xad;
        f[3] = 0xde;
        CHECK_THROWS_WITH_AS(decode_pcap(f), doctest::Contains("bad magic"), PcapError);
    }
    SUBCASE("link type")
    {
        f[20] = 113;
        CHECK_THROWS_WITH_AS(decode_pcap(f), doctest::Contains("link type"), PcapError);
    }
    SUBCASE("truncated record data")
    {
        f.pop_back();
        CHECK_THROWS_WITH_AS(decode_pcap(f), doctest::Contains("truncated"), PcapError);
    }
    SUBCASE("truncated record header")
    {
        f.resize(24 + 10);
        CHECK_THROWS_AS(decode_pcap(f), PcapError);
    }
    SUBCASE("truncated file header")
    {
        f.resize(10);
        CHECK_THROWS_AS(decode_pcap(f), PcapError);
    }
}

TEST_CASE("file round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "pktc_test_pcap.pcap";
    const std::vector<PcapRecord> records{{1, 2, 0, Bytes(70, 9)}, {3, 999999, 0, Bytes(14, 1)}};
    write_pcap(path, records);
    const auto back = read_pcap(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1].ts_usec == 999999);
    CHECK(back[0].data == records[0].data);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_pcap(path), PcapError);
}
