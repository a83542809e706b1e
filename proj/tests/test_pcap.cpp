// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <random>

#include "wsnemu/pcap.hpp"

using namespace wsnemu;
using namespace wsnemu::pcap;

namespace {

const Bytes kGoldenHeader = {
    0xD4, 0xC3, 0xB2, 0xA1, // magic, little-endian
    0x02, 0x00, 0x04, 0x00, // version 2.4
    0x00, 0x00, 0x00, 0x00, // thiszone
    0x00, 0x00, 0x00, 0x00, // sigfigs
    0xFF, 0xFF, 0x00, 0x00, // snaplen 65535
    0xC3, 0x00, 0x00, 0x00, // linktype 195
};

Bytes randomMpdu(std::mt19937& rng)
{
    std::uniform_int_distribution<int> lenDist(5, 127);
    std::uniform_int_distribution<int> byteDist(0, 255);
    Bytes out(static_cast<size_t>(lenDist(rng)));
    for (auto& b : out)
        b = static_cast<uint8_t>(byteDist(rng));
    return out;
}

std::string tempPath(const char* name)
{
    return std::string("/tmp/wsnemu_test_") + name + "_" + std::to_string(::getpid()) + ".pcap";
}

} // namespace

TEST_CASE("global header golden bytes")
{
    GlobalHeader h;
    CHECK(encodeGlobalHeader(h) == kGoldenHeader);
    CHECK(encodeGlobalHeader(h).size() == 24);

    auto decoded = decodeGlobalHeader(kGoldenHeader);
    REQUIRE(decoded.ok());
    CHECK(*decoded == h);
}

TEST_CASE("record packing")
{
    Bytes mpdu(11, 0xAB);
    auto rec = encodeRecord(1'000'352, mpdu);
    REQUIRE(rec.ok());
    REQUIRE(rec->size() == 16 + 11);
    ByteReader r(*rec);
    CHECK(r.u32le() == 1);   // tsSec
    CHECK(r.u32le() == 352); // tsUsec
    CHECK(r.u32le() == 11);  // capturedLen
    CHECK(r.u32le() == 11);  // originalLen

    auto empty = encodeRecord(0, {});
    REQUIRE(empty.ok());
    CHECK(empty->size() == 16);

    Bytes big(70000, 0);
    CHECK(encodeRecord(0, big).error() == PcapError::Oversize);
}

TEST_CASE("stream decoder: byte-at-a-time feed")
{
    Bytes stream = encodeGlobalHeader(GlobalHeader{});
    Bytes mpduA(7, 0x11), mpduB(9, 0x22);
    auto a = encodeRecord(100, mpduA);
    auto b = encodeRecord(200, mpduB);
    stream.insert(stream.end(), a->begin(), a->end());
    stream.insert(stream.end(), b->begin(), b->end());

    StreamDecoder dec;
    std::vector<Record> got;
    for (uint8_t byte : stream) {
        auto r = dec.feed(ByteView(&byte, 1));
        for (auto& rec : r.records)
            got.push_back(std::move(rec));
    }
    REQUIRE(got.size() == 2);
    CHECK(got[0].data == mpduA);
    CHECK(got[0].timeUs() == 100);
    CHECK(got[1].data == mpduB);
    CHECK(got[1].timeUs() == 200);
    CHECK(dec.finish().ok());
}

TEST_CASE("stream decoder: error classification")
{
    StreamDecoder garbage;
    Bytes junk = {0x0A, 0x0B, 0x0C, 0x0D};
    junk.resize(24, 0);
    garbage.feed(junk);
    REQUIRE(garbage.failed());
    CHECK(garbage.error() == PcapError::BadMagic);

    // byte-swapped big-endian magic is rejected too
    StreamDecoder swapped;
    GlobalHeader h;
    Bytes hdr = encodeGlobalHeader(h);
    std::swap(hdr[0], hdr[3]);
    std::swap(hdr[1], hdr[2]);
    swapped.feed(hdr);
    REQUIRE(swapped.failed());
    CHECK(swapped.error() == PcapError::BadMagic);

    StreamDecoder ethernet;
    h.linktype = 1;
    ethernet.feed(encodeGlobalHeader(h));
    REQUIRE(ethernet.failed());
    CHECK(ethernet.error() == PcapError::WrongLinktype);

    StreamDecoder truncated;
    GlobalHeader ok;
    Bytes stream = encodeGlobalHeader(ok);
    auto rec = encodeRecord(5, Bytes(11, 0x33));
    stream.insert(stream.end(), rec->begin(), rec->end() - 4);
    truncated.feed(stream);
    CHECK(!truncated.failed());
    auto end = truncated.finish();
    REQUIRE(!end.ok());
    CHECK(end.error() == PcapError::Truncated);
}

TEST_CASE("stream decoder: oversize declared length is BadRecord")
{
    StreamDecoder dec;
    Bytes stream = encodeGlobalHeader(GlobalHeader{});
    Bytes recHeader;
    ByteWriter w(recHeader);
    w.u32le(0);
    w.u32le(0);
    w.u32le(0xFFFFFFFF); // capturedLen way past snaplen
    w.u32le(0xFFFFFFFF);
    stream.insert(stream.end(), recHeader.begin(), recHeader.end());
    dec.feed(stream);
    REQUIRE(dec.failed());
    CHECK(dec.error() == PcapError::BadRecord);
}

TEST_CASE("property: stream round-trip under random chunkings")
{
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> recCount(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::pair<SimTimeUs, Bytes>> sent;
        Bytes stream = encodeGlobalHeader(GlobalHeader{});
        SimTimeUs t = 0;
        int n = recCount(rng);
        for (int i = 0; i < n; ++i) {
            t += rng() % 1'000'000;
            Bytes mpdu = randomMpdu(rng);
            auto rec = encodeRecord(t, mpdu);
            stream.insert(stream.end(), rec->begin(), rec->end());
            sent.emplace_back(t, mpdu);
        }

        StreamDecoder dec;
        std::vector<Record> got;
        size_t pos = 0;
        std::uniform_int_distribution<size_t> chunkDist(1, 13);
        while (pos < stream.size()) {
            size_t len = std::min(chunkDist(rng), stream.size() - pos);
            auto r = dec.feed(ByteView(stream.data() + pos, len));
            for (auto& rec : r.records)
                got.push_back(std::move(rec));
            pos += len;
        }
        REQUIRE(got.size() == sent.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].timeUs() == sent[i].first);
            CHECK(got[i].data == sent[i].second);
        }
        CHECK(dec.finish().ok());
    }
}

TEST_CASE("file writer round-trip")
{
    std::string path = tempPath("writer");

    FileWriter writer;
    writer.open(path);
    writer.flush();
    {
        auto contents = readFile(path);
        REQUIRE(contents.ok());
        CHECK(contents->records.empty());
    }

    Bytes a(11, 0x01), b(12, 0x02), c(13, 0x03);
    writer.append(100, a);
    writer.append(250, b);
    writer.append(250, c);
    writer.flush();

    auto contents = readFile(path);
    REQUIRE(contents.ok());
    CHECK(contents->header.linktype == kLinktypeIeee802154WithFcs);
    REQUIRE(contents->records.size() == 3);
    CHECK(contents->records[0].data == a);
    CHECK(contents->records[1].data == b);
    CHECK(contents->records[2].data == c);
    SimTimeUs prev = 0;
    for (auto& rec : contents->records) {
        CHECK(rec.timeUs() >= prev);
        prev = rec.timeUs();
    }

    writer.close();
    std::remove(path.c_str());
}

TEST_CASE("header-only file is 24 bytes")
{
    std::string path = tempPath("empty");
    {
        FileWriter writer;
        writer.open(path);
    }
    std::FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f);
    std::fseek(f, 0, SEEK_END);
    CHECK(std::ftell(f) == 24);
    std::fclose(f);
    std::remove(path.c_str());
}
