// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_BYTES_HPP
#define WSNEMU_BYTES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wsnemu {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

/// Simulation time in microseconds (PCAP-native resolution).
using SimTimeUs = uint64_t;

/// Appends integers to a byte vector in either byte order.
class ByteWriter {
public:
    explicit ByteWriter(Bytes& out) : out_(out) {}

    void u8(uint8_t v) { out_.push_back(v); }
    void i8(int8_t v) { out_.push_back(static_cast<uint8_t>(v)); }

    void u16le(uint16_t v)
    {
        out_.push_back(static_cast<uint8_t>(v));
        out_.push_back(static_cast<uint8_t>(v >> 8));
    }

    void u32le(uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64le(uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u16be(uint16_t v)
    {
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v));
    }

    void u32be(uint32_t v)
    {
        for (int i = 3; i >= 0; --i)
            out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64be(uint64_t v)
    {
        for (int i = 7; i >= 0; --i)
            out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }

private:
    Bytes& out_;
};

/// Cursor over a byte view. Bounds-checked: callers test remaining() before
/// reading, or use the try-variants.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    size_t remaining() const { return data_.size() - pos_; }
    size_t position() const { return pos_; }

    uint8_t u8() { return data_[pos_++]; }
    int8_t i8() { return static_cast<int8_t>(data_[pos_++]); }

    uint16_t u16le()
    {
        uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    uint32_t u32le()
    {
        uint32_t v = 0;
        for (int i = 3; i >= 0; --i)
            v = (v << 8) | data_[pos_ + static_cast<size_t>(i)];
        pos_ += 4;
        return v;
    }

    uint64_t u64le()
    {
        uint64_t v = 0;
        for (int i = 7; i >= 0; --i)
            v = (v << 8) | data_[pos_ + static_cast<size_t>(i)];
        pos_ += 8;
        return v;
    }

    uint16_t u16be()
    {
        uint16_t v = static_cast<uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    uint32_t u32be()
    {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v = (v << 8) | data_[pos_ + static_cast<size_t>(i)];
        pos_ += 4;
        return v;
    }

    uint64_t u64be()
    {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = (v << 8) | data_[pos_ + static_cast<size_t>(i)];
        pos_ += 8;
        return v;
    }

    Bytes raw(size_t n)
    {
        Bytes out(data_.begin() + static_cast<ptrdiff_t>(pos_),
                  data_.begin() + static_cast<ptrdiff_t>(pos_ + n));
        pos_ += n;
        return out;
    }

    ByteView view(size_t n)
    {
        ByteView v = data_.subspan(pos_, n);
        pos_ += n;
        return v;
    }

private:
    ByteView data_;
    size_t pos_ = 0;
};

std::string toHex(ByteView data, char sep = ' ');
Bytes fromHex(const std::string& text);

} // namespace wsnemu

#endif
