// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "wsnemu/crc16.hpp"

using namespace wsnemu;

namespace {

// Independent reference: plain polynomial-division CRC, MSB-first over
// bit-reversed input, result bit-reversed back. Exercises a different code
// path than the table-driven implementation under test.
uint8_t reverse8(uint8_t v)
{
    uint8_t r = 0;
    for (int i = 0; i < 8; ++i)
        r = static_cast<uint8_t>((r << 1) | ((v >> i) & 1));
    return r;
}

uint16_t reverse16(uint16_t v)
{
    uint16_t r = 0;
    for (int i = 0; i < 16; ++i)
        r = static_cast<uint16_t>((r << 1) | ((v >> i) & 1));
    return r;
}

uint16_t referenceFcs(ByteView data)
{
    uint16_t crc = 0x0000;
    for (uint8_t byte : data) {
        crc ^= static_cast<uint16_t>(reverse8(byte) << 8);
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 0x8000) ? static_cast<uint16_t>((crc << 1) ^ 0x1021)
                                 : static_cast<uint16_t>(crc << 1);
    }
    return reverse16(crc);
}

Bytes ascii(const char* s)
{
    Bytes out;
    for (const char* p = s; *p; ++p)
        out.push_back(static_cast<uint8_t>(*p));
    return out;
}

} // namespace

TEST_CASE("fcs reference check value")
{
    CHECK(referenceFcs(ascii("123456789")) == 0x2189);
    CHECK(referenceFcs({}) == 0x0000);
}

TEST_CASE("fcs of empty input is zero")
{
    CHECK(mac::computeFcs({}) == 0x0000);
}

TEST_CASE("fcs check value 0x2189")
{
    CHECK(mac::computeFcs(ascii("123456789")) == 0x2189);
}

TEST_CASE("fcs matches bit-serial reference on random inputs")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> lenDist(0, 200);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int trial = 0; trial < 2000; ++trial) {
        Bytes data(static_cast<size_t>(lenDist(rng)));
        for (auto& b : data)
            b = static_cast<uint8_t>(byteDist(rng));
        CHECK(mac::computeFcs(data) == referenceFcs(data));
    }
}

TEST_CASE("fcs residue: appending the little-endian fcs yields zero")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> lenDist(0, 130);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int trial = 0; trial < 2000; ++trial) {
        Bytes data(static_cast<size_t>(lenDist(rng)));
        for (auto& b : data)
            b = static_cast<uint8_t>(byteDist(rng));
        uint16_t fcs = mac::computeFcs(data);
        data.push_back(static_cast<uint8_t>(fcs & 0xFF));
        data.push_back(static_cast<uint8_t>(fcs >> 8));
        CHECK(mac::computeFcs(data) == 0x0000);
    }
}

TEST_CASE("incremental update equals whole-buffer computation")
{
    Bytes data = ascii("incremental input of moderate length");
    uint16_t crc = 0x0000;
    for (uint8_t b : data)
        crc = mac::updateFcs(crc, b);
    CHECK(crc == mac::computeFcs(data));
}
