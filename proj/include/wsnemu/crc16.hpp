// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_CRC16_HPP
#define WSNEMU_CRC16_HPP

#include "wsnemu/bytes.hpp"

namespace wsnemu::mac {

/// CRC-16 over the MPDU as the IEEE 802.15.4 FCS: ITU-T polynomial 0x1021 in
/// reflected (LSB-first) form, initial value 0x0000, no final XOR.
/// Check value: computeFcs("123456789") == 0x2189.
uint16_t computeFcs(ByteView data);

/// Incremental form for streamed input. Seed with 0x0000.
uint16_t updateFcs(uint16_t crc, uint8_t byte);

} // namespace wsnemu::mac

#endif
