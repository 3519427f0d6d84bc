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

#include "pktc/checksum.hpp"
#include "pktc/headers.hpp"
#include "support.hpp"

using namespace pktc;

static_assert(valid_order<EthHdr, Ipv6Hdr, TcpHdr>);
static_assert(valid_order<EthHdr, Ipv6Hdr, Srv6RoutingHdr, Srv6RoutingHdr, TcpHdr>);
static_assert(valid_order<EthHdr, Ipv6Hdr, Icmpv6PktTooBig>);
static_assert(!valid_order<EthHdr, Icmpv6PktTooBig, Ipv6Hdr>);
static_assert(!valid_order<Ipv6Hdr, TcpHdr>);
static_assert(!valid_order<EthHdr, TcpHdr>);
static_assert(!valid_order<EthHdr, Ipv6Hdr, TcpHdr, Srv6RoutingHdr>);

TEST_CASE("EthHdr encodes dst, src, ether type")
{
    EthHdr e;
    e.dst = {1, 2, 3, 4, 5, 6};
    e.src = {7, 8, 9, 10, 11, 12};
    const Bytes b = e.encode();
    REQUIRE(b.size() == 14);
    CHECK(b[0] == 1);
    CHECK(b[6] == 7);
    CHECK(b[12] == 0x86);
    CHECK(b[13] == 0xdd);
    CHECK(EthHdr::decode(b) == e);
    CHECK_THROWS_AS(EthHdr::decode(ByteView(b).first(13)), ParseError);
}

TEST_CASE("Ipv6Hdr payload_len 1300 is bytes 0x05 0x14")
{
    Ipv6Hdr h;
    h.payload_len = 1300;
    h.next_header = kProtoTcp;
    h.traffic_class = 0xab;
    h.flow_label = 0xcdef1;
    const Bytes b = h.encode();
    REQUIRE(b.size() == 40);
    CHECK(b[0] == 0x6a);
    CHECK(b[1] == 0xbc);
    CHECK(b[2] == 0xde);
    CHECK(b[3] == 0xf1);
    CHECK(b[4] == 0x05);
    CHECK(b[5] == 0x14);
    CHECK(b[6] == 6);
    CHECK(Ipv6Hdr::decode(b) == h);
}

TEST_CASE("Ipv6Hdr rejects wrong version and oversized flow label")
{
    Bytes b = Ipv6Hdr{}.encode();
    b[0] = 0x40;
    CHECK_THROWS_AS(Ipv6Hdr::decode(b), ParseError);
    Ipv6Hdr h;
    h.flow_label = 0x100000;
    CHECK_THROWS_AS(h.encode(), EncodeError);
}

TEST_CASE("Srv6RoutingHdr sizes")
{
    SUBCASE("hdr_ext_len 4 is 40 bytes and 2 segments")
    {
        const Bytes raw = oracle::srh(2, 1);
        const auto h = Srv6RoutingHdr::decode(raw);
        CHECK(h.hdr_ext_len == 4);
        CHECK(h.size() == 40);
        CHECK(h.segments.size() == 2);
        CHECK(h.last_entry == 1);
        CHECK(h.encode() == raw);
    }
    SUBCASE("one segment is 24 bytes with hdr_ext_len 2")
    {
        const auto h = Srv6RoutingHdr::with_segments({parse_ipv6("fc00::1")}, kProtoNoNext, 1);
        const Bytes b = h.encode();
        CHECK(b.size() == 24);
        CHECK(b[1] == 0x02);
        CHECK(b[2] == 4);
        CHECK(b[4] == 0);
    }
}

TEST_CASE("Srv6RoutingHdr rejects inconsistent headers")
{
    Bytes raw = oracle::srh(2, 1);
    SUBCASE("routing type") { raw[2] = 3; }
    SUBCASE("odd hdr_ext_len") { raw[1] = 3; }
    SUBCASE("last_entry out of step") { raw[4] = 2; }
    SUBCASE("segments_left past last entry") { raw[3] = 3; }
    SUBCASE("truncated") { raw.resize(30); }
    CHECK_THROWS_AS(Srv6RoutingHdr::decode(raw), ParseError);
}

TEST_CASE("TcpHdr options and reserved bits survive a round trip")
{
    TcpHdr t;
    t.src_port = 1;
    t.dst_port = 2;
    t.data_offset = 7;
    t.reserved = 5;
    t.flags = 0x1ff;
    t.options = {1, 1, 1, 1, 2, 4, 5, 0};
    const Bytes b = t.encode();
    CHECK(b.size() == 28);
    CHECK(TcpHdr::decode(b) == t);

    Bytes bad = b;
    bad[12] = 4 << 4;
    CHECK_THROWS_AS(TcpHdr::decode(bad), ParseError);
}

TEST_CASE("Icmpv6PktTooBig carries the invoking packet to the end")
{
    Icmpv6PktTooBig m;
    m.mtu = 1280;
    m.invoking_packet = Bytes(100, 0x42);
    const Bytes b = m.encode();
    CHECK(b.size() == 108);
    CHECK(b[0] == 2);
    CHECK(b[1] == 0);
    CHECK(load_be32(b.data() + 4) == 1280);
    CHECK(Icmpv6PktTooBig::decode(b) == m);

    Bytes wrong = b;
    wrong[0] = 1;
    CHECK_THROWS_AS(Icmpv6PktTooBig::decode(wrong), ParseError);
}

TEST_CASE("decode then encode is the identity on valid headers")
{
    props::for_all(0xeade, [](std::mt19937_64& rng, int i) {
        INFO("case " << i);
        Ipv6Hdr ip;
        ip.traffic_class = std::uint8_t(rng());
        ip.flow_label = std::uint32_t(rng() & 0xfffff);
        ip.payload_len = std::uint16_t(rng());
        ip.next_header = std::uint8_t(rng());
        ip.hop_limit = std::uint8_t(rng());
        for (auto& x : ip.src)
            x = std::uint8_t(rng());
        const Bytes ib = ip.encode();
        REQUIRE(Ipv6Hdr::decode(ib).encode() == ib);

        TcpHdr t;
        t.seq = std::uint32_t(rng());
        t.data_offset = std::uint8_t(5 + rng() % 11);
        t.reserved = std::uint8_t(rng() & 7);
        t.flags = std::uint16_t(rng() & 0x1ff);
        t.options = props::random_bytes(rng, (t.data_offset - 5) * 4u);
        const Bytes tb = t.encode();
        REQUIRE(TcpHdr::decode(tb).encode() == tb);

        std::vector<Ipv6Addr> segs(1 + rng() % 8);
        for (auto& s : segs)
            for (auto& x : s)
                x = std::uint8_t(rng());
        const auto n = segs.size();
        auto srh = Srv6RoutingHdr::with_segments(std::move(segs), std::uint8_t(rng()),
                                                 std::uint8_t(rng() % (n + 1)));
        srh.flags = std::uint8_t(rng());
        srh.tag = std::uint16_t(rng());
        const Bytes sb = srh.encode();
        REQUIRE(sb.size() == 8 + 16 * n);
        REQUIRE(Srv6RoutingHdr::decode(sb).encode() == sb);
    });
}
