// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "wsnemu/crc16.hpp"
#include "wsnemu/mac.hpp"

using namespace wsnemu;
using namespace wsnemu::mac;

namespace {

// Frame-control oracle assembled from the standard's bit offsets, kept apart
// from FrameControl::toBits so layout regressions show up.
uint16_t fcfBits(unsigned type, bool sec, bool pending, bool ack, bool panComp,
                 unsigned destMode, unsigned version, unsigned srcMode)
{
    return static_cast<uint16_t>(type | (sec ? 1u << 3 : 0) | (pending ? 1u << 4 : 0) |
                                 (ack ? 1u << 5 : 0) | (panComp ? 1u << 6 : 0) |
                                 (destMode << 10) | (version << 12) | (srcMode << 14));
}

MacFrame sampleDataFrame()
{
    MacFrame f;
    f.fcf.frameType = FrameType::Data;
    f.fcf.panIdCompression = true;
    f.fcf.destAddrMode = AddrMode::Short;
    f.fcf.srcAddrMode = AddrMode::Short;
    f.seq = 0x07;
    f.destPanId = 0x0022;
    f.dest = MacAddress::makeShort(0x0001);
    f.srcPanId = 0x0022;
    f.src = MacAddress::makeShort(0x0002);
    f.payload = {'h', 'i'};
    return f;
}

MacFrame randomFrame(std::mt19937& rng)
{
    std::uniform_int_distribution<int> byteDist(0, 255);
    std::uniform_int_distribution<int> modeDist(0, 2);
    std::uniform_int_distribution<int> boolDist(0, 1);
    auto randomAddr = [&](AddrMode mode) {
        if (mode == AddrMode::Short)
            return MacAddress::makeShort(static_cast<uint16_t>(rng() & 0xFFFF));
        if (mode == AddrMode::Extended)
            return MacAddress::makeExtended((uint64_t(rng()) << 32) | rng());
        return MacAddress::none();
    };
    static const AddrMode kModes[] = {AddrMode::None, AddrMode::Short, AddrMode::Extended};
    static const FrameType kTypes[] = {FrameType::Beacon, FrameType::Data, FrameType::Ack,
                                       FrameType::MacCommand};

    MacFrame f;
    f.fcf.frameType = kTypes[rng() % 4];
    f.fcf.framePending = boolDist(rng);
    f.fcf.ackRequest = boolDist(rng);
    f.fcf.destAddrMode = kModes[modeDist(rng)];
    f.fcf.srcAddrMode = kModes[modeDist(rng)];
    f.fcf.frameVersion = static_cast<uint8_t>(boolDist(rng));
    f.fcf.panIdCompression = f.fcf.destAddrMode != AddrMode::None &&
                             f.fcf.srcAddrMode != AddrMode::None && boolDist(rng);
    f.seq = static_cast<uint8_t>(byteDist(rng));
    f.dest = randomAddr(f.fcf.destAddrMode);
    f.src = randomAddr(f.fcf.srcAddrMode);
    if (f.fcf.destAddrMode != AddrMode::None)
        f.destPanId = static_cast<uint16_t>(rng() & 0xFFFF);
    if (f.fcf.srcAddrMode != AddrMode::None)
        f.srcPanId = f.fcf.panIdCompression ? f.destPanId : static_cast<uint16_t>(rng() & 0xFFFF);

    size_t headerLen = 3 + (f.fcf.destAddrMode != AddrMode::None ? 2 : 0) +
                       (f.fcf.destAddrMode == AddrMode::Short   ? 2
                        : f.fcf.destAddrMode == AddrMode::Extended ? 8
                                                                   : 0) +
                       (f.fcf.srcAddrMode != AddrMode::None && !f.fcf.panIdCompression ? 2 : 0) +
                       (f.fcf.srcAddrMode == AddrMode::Short   ? 2
                        : f.fcf.srcAddrMode == AddrMode::Extended ? 8
                                                                  : 0);
    size_t maxPayload = kMaxPhyPacketSize - kFcsSize - headerLen;
    std::uniform_int_distribution<size_t> payloadDist(0, maxPayload);
    f.payload.resize(payloadDist(rng));
    for (auto& b : f.payload)
        b = static_cast<uint8_t>(byteDist(rng));
    return f;
}

} // namespace

TEST_CASE("fcf bit layout vectors")
{
    // data, panIdCompression, short/short, version 0
    FrameControl fcf;
    fcf.frameType = FrameType::Data;
    fcf.panIdCompression = true;
    fcf.destAddrMode = AddrMode::Short;
    fcf.srcAddrMode = AddrMode::Short;
    CHECK(fcf.toBits() == 0x8841);
    CHECK(fcf.toBits() == fcfBits(1, false, false, false, true, 2, 0, 2));

    FrameControl ack;
    ack.frameType = FrameType::Ack;
    CHECK(ack.toBits() == 0x0002);

    FrameControl ext;
    ext.frameType = FrameType::Data;
    ext.panIdCompression = true;
    ext.destAddrMode = AddrMode::Extended;
    ext.srcAddrMode = AddrMode::Extended;
    ext.frameVersion = 1;
    CHECK(ext.toBits() == fcfBits(1, false, false, false, true, 3, 1, 3));
}

TEST_CASE("encode: compressed short/short data frame starts 0x41 0x88")
{
    auto encoded = encodeFrame(sampleDataFrame());
    REQUIRE(encoded.ok());
    CHECK((*encoded)[0] == 0x41);
    CHECK((*encoded)[1] == 0x88);
    // FCF(2) + seq(1) + destPAN(2) + dest(2) + src(2) + payload(2) + FCS(2)
    CHECK(encoded->size() == 13);
}

TEST_CASE("encode: ack frame is the 5-byte minimum MPDU")
{
    MacFrame f;
    f.fcf.frameType = FrameType::Ack;
    f.seq = 5;
    auto encoded = encodeFrame(f);
    REQUIRE(encoded.ok());
    REQUIRE(encoded->size() == 5);
    CHECK((*encoded)[0] == 0x02);
    CHECK((*encoded)[1] == 0x00);
    CHECK((*encoded)[2] == 0x05);
    uint16_t fcs = computeFcs(ByteView(*encoded).first(3));
    CHECK((*encoded)[3] == (fcs & 0xFF));
    CHECK((*encoded)[4] == (fcs >> 8));
}

TEST_CASE("encode: length cap enforced before emitting")
{
    MacFrame f = sampleDataFrame();
    f.payload.resize(130);
    auto encoded = encodeFrame(f);
    REQUIRE(!encoded.ok());
    CHECK(encoded.error() == MacError::FrameTooLong);

    // exactly at the cap is fine: header 9 (compressed) + payload 116 + fcs 2
    f.payload.resize(116);
    auto atCap = encodeFrame(f);
    REQUIRE(atCap.ok());
    CHECK(atCap->size() == 127);
}

TEST_CASE("encode rejects inconsistent addressing")
{
    MacFrame f = sampleDataFrame();
    f.fcf.panIdCompression = true;
    f.fcf.srcAddrMode = AddrMode::None;
    f.src = MacAddress::none();
    CHECK(encodeFrame(f).error() == MacError::InvalidParameter);

    MacFrame g = sampleDataFrame();
    g.fcf.securityEnabled = true;
    CHECK(encodeFrame(g).error() == MacError::Unsupported);
}

TEST_CASE("decode: round-trips the sample frame")
{
    MacFrame f = sampleDataFrame();
    auto encoded = encodeFrame(f);
    REQUIRE(encoded.ok());
    auto decoded = decodeFrame(*encoded);
    REQUIRE(decoded.ok());
    CHECK(*decoded == f);
}

TEST_CASE("decode: corrupted checksum reports FcsMismatch")
{
    auto encoded = encodeFrame(sampleDataFrame());
    REQUIRE(encoded.ok());
    encoded->back() ^= 0xFF;
    auto decoded = decodeFrame(*encoded);
    REQUIRE(!decoded.ok());
    CHECK(decoded.error() == MacError::FcsMismatch);
}

TEST_CASE("decode: short input reports Truncated")
{
    Bytes three = {0x41, 0x88, 0x01};
    CHECK(decodeFrame(three).error() == MacError::Truncated);
    CHECK(decodeFrame({}).error() == MacError::Truncated);
}

TEST_CASE("decode: security and reserved modes report Unsupported")
{
    // Craft headers with a valid FCS so the classification gate is reached.
    auto withFcs = [](Bytes body) {
        uint16_t fcs = computeFcs(body);
        body.push_back(static_cast<uint8_t>(fcs & 0xFF));
        body.push_back(static_cast<uint8_t>(fcs >> 8));
        return body;
    };

    Bytes secured = withFcs({0x0A, 0x00, 0x01}); // data + security bit
    CHECK(decodeFrame(secured).error() == MacError::Unsupported);

    Bytes reservedMode = withFcs({0x01, 0x04, 0x01}); // destAddrMode == 1
    CHECK(decodeFrame(reservedMode).error() == MacError::Unsupported);

    Bytes version2 = withFcs({0x01, 0x20, 0x01}); // frameVersion == 2
    CHECK(decodeFrame(version2).error() == MacError::Unsupported);
}

TEST_CASE("property: encode/decode round-trip over randomized frames")
{
    std::mt19937 rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        MacFrame f = randomFrame(rng);
        auto encoded = encodeFrame(f);
        REQUIRE(encoded.ok());
        REQUIRE(encoded->size() <= kMaxPhyPacketSize);
        auto decoded = decodeFrame(*encoded);
        REQUIRE(decoded.ok());
        CHECK(*decoded == f);
    }
}

TEST_CASE("property: decoder is total on random bytes")
{
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> lenDist(0, 140);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int trial = 0; trial < 5000; ++trial) {
        Bytes noise(static_cast<size_t>(lenDist(rng)));
        for (auto& b : noise)
            b = static_cast<uint8_t>(byteDist(rng));
        auto decoded = decodeFrame(noise); // must classify, never crash
        if (!decoded.ok()) {
            auto e = decoded.error();
            CHECK((e == MacError::FcsMismatch || e == MacError::Truncated ||
                   e == MacError::Unsupported || e == MacError::FrameTooLong));
        }
    }
}

TEST_CASE("buildDataMpdu applies pan id compression")
{
    McpsDataRequest req;
    req.srcAddrMode = AddrMode::Short;
    req.dstPanId = 0x0022;
    req.dstAddr = MacAddress::makeShort(0x0001);
    req.msdu = {'h', 'i'};
    req.ackRequest = false;

    auto frame = buildDataMpdu(req, 1, 0x0022, MacAddress::makeShort(0x0002));
    REQUIRE(frame.ok());
    CHECK(frame->fcf.panIdCompression);
    CHECK(frame->fcf.frameType == FrameType::Data);
    CHECK(frame->payload == Bytes{'h', 'i'});
    CHECK(frame->seq == 1);

    auto encoded = encodeFrame(*frame);
    REQUIRE(encoded.ok());
    auto decoded = decodeFrame(*encoded);
    REQUIRE(decoded.ok());
    CHECK(*decoded == *frame);
}

TEST_CASE("buildDataMpdu: no compression across pans")
{
    McpsDataRequest req;
    req.srcAddrMode = AddrMode::Short;
    req.dstPanId = 0x0022;
    req.dstAddr = MacAddress::makeShort(0x0001);
    auto frame = buildDataMpdu(req, 1, 0x0033, MacAddress::makeShort(0x0002));
    REQUIRE(frame.ok());
    CHECK(!frame->fcf.panIdCompression);
    CHECK(frame->srcPanId == 0x0033);
}

TEST_CASE("buildDataMpdu: oversize msdu and empty msdu")
{
    McpsDataRequest req;
    req.srcAddrMode = AddrMode::Short;
    req.dstPanId = 0x0022;
    req.dstAddr = MacAddress::makeShort(0x0001);
    req.msdu.resize(200);
    auto tooLong = buildDataMpdu(req, 1, 0x0022, MacAddress::makeShort(0x0002));
    REQUIRE(!tooLong.ok());
    CHECK(tooLong.error() == MacError::FrameTooLong);

    req.msdu.clear();
    auto empty = buildDataMpdu(req, 1, 0x0022, MacAddress::makeShort(0x0002));
    REQUIRE(empty.ok());
    CHECK(empty->payload.empty());
}

TEST_CASE("frameToIndication copies fields verbatim")
{
    MacFrame f = sampleDataFrame();
    auto ind = frameToIndication(f, 255, 1234);
    REQUIRE(ind.ok());
    CHECK(ind->msdu == f.payload);
    CHECK(ind->linkQuality == 255);
    CHECK(ind->timestamp == 1234);
    CHECK(ind->src == f.src);
    CHECK(ind->dst == f.dest);
    CHECK(ind->srcPanId == f.destPanId); // compressed frame: one pan id

    MacFrame ack;
    ack.fcf.frameType = FrameType::Ack;
    CHECK(frameToIndication(ack, 0, 0).error() == MacError::InvalidParameter);
}

TEST_CASE("airtime formula")
{
    CHECK(*airtimeUs(5) == 352);
    CHECK(*airtimeUs(127) == 4256);
    CHECK(airtimeUs(4).error() == MacError::InvalidParameter);
    CHECK(airtimeUs(128).error() == MacError::InvalidParameter);

    uint32_t prev = *airtimeUs(5);
    for (size_t len = 6; len <= 127; ++len) {
        uint32_t cur = *airtimeUs(len);
        CHECK(cur == prev + 32);
        prev = cur;
    }
}
