// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "wsnemu/slip.hpp"

using namespace wsnemu;
using namespace wsnemu::slip;

namespace {

// Transcription of the RFC 1055 reference send_packet byte-stuffing, used as
// the encoding oracle (without the leading END, which the RFC leaves
// optional and our encoder always emits).
Bytes referenceEncodeBody(ByteView payload)
{
    Bytes out;
    for (uint8_t b : payload) {
        switch (b) {
        case 0xC0:
            out.push_back(0xDB);
            out.push_back(0xDC);
            break;
        case 0xDB:
            out.push_back(0xDB);
            out.push_back(0xDD);
            break;
        default:
            out.push_back(b);
        }
    }
    out.push_back(0xC0);
    return out;
}

Bytes randomPayload(std::mt19937& rng, size_t maxLen)
{
    std::uniform_int_distribution<size_t> lenDist(0, maxLen);
    // Bias toward the bytes that need escaping.
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<int> byteDist(0, 255);
    Bytes out(lenDist(rng));
    for (auto& b : out) {
        int p = pick(rng);
        b = p == 0 ? 0xC0 : p == 1 ? 0xDB : static_cast<uint8_t>(byteDist(rng));
    }
    return out;
}

} // namespace

TEST_CASE("encode vectors")
{
    CHECK(encode({}) == Bytes{0xC0, 0xC0});
    CHECK(encode(Bytes{0x01, 0xC0, 0x02}) == Bytes{0xC0, 0x01, 0xDB, 0xDC, 0x02, 0xC0});
    CHECK(encode(Bytes{0xDB}) == Bytes{0xC0, 0xDB, 0xDD, 0xC0});
}

TEST_CASE("encode agrees with the reference algorithm")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes payload = randomPayload(rng, 64);
        Bytes expected;
        expected.push_back(0xC0);
        Bytes body = referenceEncodeBody(payload);
        expected.insert(expected.end(), body.begin(), body.end());
        CHECK(encode(payload) == expected);
    }
}

TEST_CASE("decode vectors")
{
    Decoder dec;
    auto r = dec.feed(Bytes{0xC0, 0x01, 0xDB, 0xDC, 0x02, 0xC0});
    REQUIRE(r.frames.size() == 1);
    CHECK(r.frames[0] == Bytes{0x01, 0xC0, 0x02});
    CHECK(r.protocolErrors == 0);

    Decoder dec2;
    auto r2 = dec2.feed(Bytes{0xC0, 0xC0, 0xC0});
    CHECK(r2.frames.empty());
    CHECK(r2.protocolErrors == 0);
    CHECK(r2.overflowErrors == 0);
}

TEST_CASE("invalid escape is an error and the decoder recovers")
{
    Decoder dec;
    auto r = dec.feed(Bytes{0xC0, 0xDB, 0x41});
    CHECK(r.frames.empty());
    CHECK(r.protocolErrors == 1);

    // recovery at the next END
    auto r2 = dec.feed(encode(Bytes{0x10, 0x20}));
    REQUIRE(r2.frames.size() == 1);
    CHECK(r2.frames[0] == Bytes{0x10, 0x20});
}

TEST_CASE("escape before frame boundary drops the frame, keeps sync")
{
    Decoder dec;
    auto r = dec.feed(Bytes{0xC0, 0x01, 0xDB, 0xC0, 0x41, 0xC0});
    CHECK(r.protocolErrors == 1);
    REQUIRE(r.frames.size() == 1);
    CHECK(r.frames[0] == Bytes{0x41});
}

TEST_CASE("overflow drops the frame and surfaces the error")
{
    Decoder dec(8);
    Bytes big(9, 0x11);
    auto r = dec.feed(encode(big));
    CHECK(r.frames.empty());
    CHECK(r.overflowErrors == 1);

    auto r2 = dec.feed(encode(Bytes{0x01}));
    REQUIRE(r2.frames.size() == 1);
    CHECK(r2.frames[0] == Bytes{0x01});
}

TEST_CASE("property: round-trip under every single-byte chunking")
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        Bytes payload = randomPayload(rng, 200);
        Bytes wire = encode(payload);

        Decoder dec;
        std::vector<Bytes> got;
        for (uint8_t b : wire) {
            auto r = dec.feed(ByteView(&b, 1));
            CHECK(r.protocolErrors == 0);
            CHECK(r.overflowErrors == 0);
            for (auto& f : r.frames)
                got.push_back(std::move(f));
        }
        if (payload.empty()) {
            CHECK(got.empty());
        } else {
            REQUIRE(got.size() == 1);
            CHECK(got[0] == payload);
        }
    }
}

TEST_CASE("property: chunk-boundary invariance on multi-frame streams")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Bytes wire;
        std::vector<Bytes> payloads;
        std::uniform_int_distribution<int> frameCount(1, 5);
        int n = frameCount(rng);
        for (int i = 0; i < n; ++i) {
            Bytes p = randomPayload(rng, 60);
            if (!p.empty())
                payloads.push_back(p);
            Bytes w = encode(p);
            wire.insert(wire.end(), w.begin(), w.end());
        }

        // whole-buffer reference
        Decoder ref;
        auto refResult = ref.feed(wire);
        REQUIRE(refResult.frames.size() == payloads.size());

        // random chunking
        Decoder dec;
        std::vector<Bytes> got;
        size_t pos = 0;
        std::uniform_int_distribution<size_t> chunkDist(1, 7);
        while (pos < wire.size()) {
            size_t len = std::min(chunkDist(rng), wire.size() - pos);
            auto r = dec.feed(ByteView(wire.data() + pos, len));
            for (auto& f : r.frames)
                got.push_back(std::move(f));
            pos += len;
        }
        CHECK(got == payloads);
    }
}
