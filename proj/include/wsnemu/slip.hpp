// SPDX-License-Identifier: Apache-2.0
//
// RFC 1055 SLIP framing for the virtual node serial legs.

#ifndef WSNEMU_SLIP_HPP
#define WSNEMU_SLIP_HPP

#include <cstdint>
#include <vector>

#include "wsnemu/bytes.hpp"

namespace wsnemu::slip {

constexpr uint8_t kEnd = 0xC0;
constexpr uint8_t kEsc = 0xDB;
constexpr uint8_t kEscEnd = 0xDC;
constexpr uint8_t kEscEsc = 0xDD;

constexpr size_t kDefaultMaxFrame = 256;

/// END-delimited, byte-stuffed encoding. A leading END is always emitted so
/// that desynchronization on the receiving side is bounded to one frame.
Bytes encode(ByteView payload);

struct DecodeResult {
    std::vector<Bytes> frames;
    size_t protocolErrors = 0; // ESC followed by neither ESC_END nor ESC_ESC
    size_t overflowErrors = 0; // frame exceeded the maximum size
};

/// Streaming decoder: chunks may split frames at any byte boundary. Empty
/// frames (back-to-back END) are discarded. After an error the decoder
/// discards input until the next END.
class Decoder {
public:
    explicit Decoder(size_t maxFrame = kDefaultMaxFrame) : maxFrame_(maxFrame) {}

    DecodeResult feed(ByteView chunk);

    bool idle() const { return phase_ == Phase::Idle; }
    size_t buffered() const { return buffer_.size(); }

private:
    enum class Phase { Idle, InFrame, AfterEscape };

    Phase phase_ = Phase::Idle;
    Bytes buffer_;
    size_t maxFrame_;
};

} // namespace wsnemu::slip

#endif
