// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/crc16.hpp"

#include <array>

namespace wsnemu::mac {

namespace {

// 0x8408 is the bit-reversed ITU-T polynomial x^16 + x^12 + x^5 + 1.
constexpr uint16_t kPolyReflected = 0x8408;

constexpr std::array<uint16_t, 256> makeTable()
{
    std::array<uint16_t, 256> table{};
    for (uint16_t i = 0; i < 256; ++i) {
        uint16_t crc = i;
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 1) ? static_cast<uint16_t>((crc >> 1) ^ kPolyReflected)
                            : static_cast<uint16_t>(crc >> 1);
        table[i] = crc;
    }
    return table;
}

constexpr auto kTable = makeTable();

} // namespace

uint16_t updateFcs(uint16_t crc, uint8_t byte)
{
    return static_cast<uint16_t>((crc >> 8) ^ kTable[(crc ^ byte) & 0xFF]);
}

uint16_t computeFcs(ByteView data)
{
    uint16_t crc = 0x0000;
    for (uint8_t b : data)
        crc = updateFcs(crc, b);
    return crc;
}

} // namespace wsnemu::mac
