// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/slip.hpp"

namespace wsnemu::slip {

Bytes encode(ByteView payload)
{
    Bytes out;
    out.reserve(payload.size() + 2);
    out.push_back(kEnd);
    for (uint8_t b : payload) {
        if (b == kEnd) {
            out.push_back(kEsc);
            out.push_back(kEscEnd);
        } else if (b == kEsc) {
            out.push_back(kEsc);
            out.push_back(kEscEsc);
        } else {
            out.push_back(b);
        }
    }
    out.push_back(kEnd);
    return out;
}

DecodeResult Decoder::feed(ByteView chunk)
{
    DecodeResult result;
    for (uint8_t b : chunk) {
        switch (phase_) {
        case Phase::Idle:
            if (b == kEnd) {
                phase_ = Phase::InFrame;
                buffer_.clear();
            }
            break;
        case Phase::InFrame:
            if (b == kEnd) {
                if (!buffer_.empty()) {
                    result.frames.push_back(std::move(buffer_));
                    buffer_ = {};
                }
            } else if (b == kEsc) {
                phase_ = Phase::AfterEscape;
            } else {
                if (buffer_.size() >= maxFrame_) {
                    ++result.overflowErrors;
                    buffer_.clear();
                    phase_ = Phase::Idle;
                } else {
                    buffer_.push_back(b);
                }
            }
            break;
        case Phase::AfterEscape:
            if (b == kEscEnd || b == kEscEsc) {
                if (buffer_.size() >= maxFrame_) {
                    ++result.overflowErrors;
                    buffer_.clear();
                    phase_ = Phase::Idle;
                } else {
                    buffer_.push_back(b == kEscEnd ? kEnd : kEsc);
                    phase_ = Phase::InFrame;
                }
            } else if (b == kEnd) {
                // ESC directly before a frame boundary: drop the broken frame
                // but keep the END as the start of the next one.
                ++result.protocolErrors;
                buffer_.clear();
                phase_ = Phase::InFrame;
            } else {
                ++result.protocolErrors;
                buffer_.clear();
                phase_ = Phase::Idle;
            }
            break;
        }
    }
    return result;
}

} // namespace wsnemu::slip
