// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/mac.hpp"

#include <sstream>

#include "wsnemu/crc16.hpp"

namespace wsnemu::mac {

namespace {

constexpr uint16_t kTypeMask = 0x0007;
constexpr uint16_t kSecurityBit = 1 << 3;
constexpr uint16_t kPendingBit = 1 << 4;
constexpr uint16_t kAckRequestBit = 1 << 5;
constexpr uint16_t kPanCompressionBit = 1 << 6;
constexpr int kDestModeShift = 10;
constexpr int kVersionShift = 12;
constexpr int kSrcModeShift = 14;

bool validAddrMode(uint8_t bits) { return bits == 0 || bits == 2 || bits == 3; }

size_t addrLen(AddrMode mode)
{
    switch (mode) {
    case AddrMode::None: return 0;
    case AddrMode::Short: return 2;
    case AddrMode::Extended: return 8;
    }
    return 0;
}

void writeAddr(ByteWriter& w, const MacAddress& addr)
{
    if (addr.mode == AddrMode::Short)
        w.u16le(addr.shortAddr);
    else if (addr.mode == AddrMode::Extended)
        w.u64le(addr.extAddr);
}

MacAddress readAddr(ByteReader& r, AddrMode mode)
{
    if (mode == AddrMode::Short)
        return MacAddress::makeShort(r.u16le());
    if (mode == AddrMode::Extended)
        return MacAddress::makeExtended(r.u64le());
    return MacAddress::none();
}

} // namespace

std::string MacAddress::toString() const
{
    std::ostringstream os;
    os << std::hex;
    switch (mode) {
    case AddrMode::None:
        return "-";
    case AddrMode::Short: {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "0x%04x", shortAddr);
        return buf;
    }
    case AddrMode::Extended: {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(extAddr));
        return buf;
    }
    }
    return "?";
}

const char* errorToString(MacError e)
{
    switch (e) {
    case MacError::FrameTooLong: return "FrameTooLong";
    case MacError::InvalidParameter: return "InvalidParameter";
    case MacError::FcsMismatch: return "FcsMismatch";
    case MacError::Truncated: return "Truncated";
    case MacError::Unsupported: return "Unsupported";
    }
    return "?";
}

const char* statusToString(MacStatus s)
{
    switch (s) {
    case MacStatus::Success: return "Success";
    case MacStatus::TransactionOverflow: return "TransactionOverflow";
    case MacStatus::FrameTooLong: return "FrameTooLong";
    case MacStatus::NoAck: return "NoAck";
    case MacStatus::InvalidParameter: return "InvalidParameter";
    case MacStatus::ChannelAccessFailure: return "ChannelAccessFailure";
    }
    return "?";
}

uint16_t FrameControl::toBits() const
{
    uint16_t bits = static_cast<uint16_t>(frameType) & kTypeMask;
    if (securityEnabled)
        bits |= kSecurityBit;
    if (framePending)
        bits |= kPendingBit;
    if (ackRequest)
        bits |= kAckRequestBit;
    if (panIdCompression)
        bits |= kPanCompressionBit;
    bits |= static_cast<uint16_t>(static_cast<uint16_t>(destAddrMode) << kDestModeShift);
    bits |= static_cast<uint16_t>((frameVersion & 0x3) << kVersionShift);
    bits |= static_cast<uint16_t>(static_cast<uint16_t>(srcAddrMode) << kSrcModeShift);
    return bits;
}

Result<Bytes, MacError> encodeFrame(const MacFrame& frame)
{
    const FrameControl& fcf = frame.fcf;

    if (fcf.securityEnabled)
        return MacError::Unsupported;
    if (!validAddrMode(static_cast<uint8_t>(fcf.destAddrMode)) ||
        !validAddrMode(static_cast<uint8_t>(fcf.srcAddrMode)))
        return MacError::InvalidParameter;
    if (fcf.destAddrMode != frame.dest.mode || fcf.srcAddrMode != frame.src.mode)
        return MacError::InvalidParameter;
    if (fcf.panIdCompression &&
        (fcf.destAddrMode == AddrMode::None || fcf.srcAddrMode == AddrMode::None))
        return MacError::InvalidParameter;
    // Compression means one PAN id on the wire; a frame claiming two is
    // not encodable.
    if (fcf.panIdCompression && frame.srcPanId != frame.destPanId)
        return MacError::InvalidParameter;
    if (fcf.frameVersion > 1)
        return MacError::InvalidParameter;

    size_t headerLen = 3 + (fcf.destAddrMode != AddrMode::None ? 2 : 0) +
                       addrLen(fcf.destAddrMode) +
                       (fcf.srcAddrMode != AddrMode::None && !fcf.panIdCompression ? 2 : 0) +
                       addrLen(fcf.srcAddrMode);
    if (headerLen + frame.payload.size() + kFcsSize > kMaxPhyPacketSize)
        return MacError::FrameTooLong;

    Bytes out;
    out.reserve(headerLen + frame.payload.size() + kFcsSize);
    ByteWriter w(out);
    w.u16le(fcf.toBits());
    w.u8(frame.seq);
    if (fcf.destAddrMode != AddrMode::None) {
        w.u16le(frame.destPanId);
        writeAddr(w, frame.dest);
    }
    if (fcf.srcAddrMode != AddrMode::None) {
        if (!fcf.panIdCompression)
            w.u16le(frame.srcPanId);
        writeAddr(w, frame.src);
    }
    w.raw(frame.payload);
    w.u16le(computeFcs(out));
    return out;
}

Result<MacFrame, MacError> decodeFrame(ByteView mpdu)
{
    if (mpdu.size() < kMinMpduSize)
        return MacError::Truncated;
    if (mpdu.size() > kMaxPhyPacketSize)
        return MacError::FrameTooLong;

    // FCS gate first: a frame that fails its checksum carries no trustworthy
    // header bits.
    ByteView body = mpdu.first(mpdu.size() - kFcsSize);
    uint16_t wireFcs =
        static_cast<uint16_t>(mpdu[mpdu.size() - 2] | (mpdu[mpdu.size() - 1] << 8));
    if (computeFcs(body) != wireFcs)
        return MacError::FcsMismatch;

    ByteReader r(body);
    uint16_t bits = r.u16le();

    uint8_t destBits = (bits >> kDestModeShift) & 0x3;
    uint8_t srcBits = (bits >> kSrcModeShift) & 0x3;
    if (bits & kSecurityBit)
        return MacError::Unsupported;
    if (!validAddrMode(destBits) || !validAddrMode(srcBits))
        return MacError::Unsupported;
    uint8_t version = (bits >> kVersionShift) & 0x3;
    if (version > 1)
        return MacError::Unsupported;

    MacFrame frame;
    frame.fcf.frameType = static_cast<FrameType>(bits & kTypeMask);
    frame.fcf.securityEnabled = false;
    frame.fcf.framePending = bits & kPendingBit;
    frame.fcf.ackRequest = bits & kAckRequestBit;
    frame.fcf.panIdCompression = bits & kPanCompressionBit;
    frame.fcf.destAddrMode = static_cast<AddrMode>(destBits);
    frame.fcf.frameVersion = version;
    frame.fcf.srcAddrMode = static_cast<AddrMode>(srcBits);

    if (frame.fcf.panIdCompression &&
        (frame.fcf.destAddrMode == AddrMode::None || frame.fcf.srcAddrMode == AddrMode::None))
        return MacError::Unsupported;

    size_t need = 1 + (frame.fcf.destAddrMode != AddrMode::None ? 2 : 0) +
                  addrLen(frame.fcf.destAddrMode) +
                  (frame.fcf.srcAddrMode != AddrMode::None && !frame.fcf.panIdCompression ? 2 : 0) +
                  addrLen(frame.fcf.srcAddrMode);
    if (r.remaining() < need)
        return MacError::Truncated;

    frame.seq = r.u8();
    if (frame.fcf.destAddrMode != AddrMode::None) {
        frame.destPanId = r.u16le();
        frame.dest = readAddr(r, frame.fcf.destAddrMode);
    }
    if (frame.fcf.srcAddrMode != AddrMode::None) {
        frame.srcPanId = frame.fcf.panIdCompression ? frame.destPanId : r.u16le();
        frame.src = readAddr(r, frame.fcf.srcAddrMode);
    }
    frame.payload = r.raw(r.remaining());
    return frame;
}

Result<MacFrame, MacError> buildDataMpdu(const McpsDataRequest& req, uint8_t seq,
                                         uint16_t srcPanId, const MacAddress& srcAddr)
{
    if (req.srcAddrMode != srcAddr.mode)
        return MacError::InvalidParameter;
    if (req.dstAddr.mode == AddrMode::None && srcAddr.mode == AddrMode::None)
        return MacError::InvalidParameter;

    MacFrame frame;
    frame.fcf.frameType = FrameType::Data;
    frame.fcf.ackRequest = req.ackRequest;
    frame.fcf.destAddrMode = req.dstAddr.mode;
    frame.fcf.srcAddrMode = srcAddr.mode;
    frame.fcf.panIdCompression = req.dstAddr.mode != AddrMode::None &&
                                 srcAddr.mode != AddrMode::None && req.dstPanId == srcPanId;
    frame.seq = seq;
    frame.destPanId = req.dstPanId;
    frame.dest = req.dstAddr;
    frame.srcPanId = srcPanId;
    frame.src = srcAddr;
    frame.payload = req.msdu;

    // Validate the length budget by encoding once.
    auto encoded = encodeFrame(frame);
    if (!encoded)
        return encoded.error();
    return frame;
}

Result<McpsDataIndication, MacError> frameToIndication(const MacFrame& frame, uint8_t lqi,
                                                       SimTimeUs timestamp)
{
    if (frame.fcf.frameType != FrameType::Data)
        return MacError::InvalidParameter;

    McpsDataIndication ind;
    ind.srcPanId = frame.srcPanId;
    ind.src = frame.src;
    ind.dstPanId = frame.destPanId;
    ind.dst = frame.dest;
    ind.msdu = frame.payload;
    ind.linkQuality = lqi;
    ind.timestamp = timestamp;
    return ind;
}

Result<uint32_t, MacError> airtimeUs(size_t psduLen)
{
    if (psduLen < kMinMpduSize || psduLen > kMaxPhyPacketSize)
        return MacError::InvalidParameter;
    return static_cast<uint32_t>((kSyncHeaderBytes + psduLen) * kAirtimeUsPerByte);
}

} // namespace wsnemu::mac
