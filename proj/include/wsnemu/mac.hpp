// SPDX-License-Identifier: Apache-2.0
//
// IEEE 802.15.4-2006 MAC frame encoding/decoding and the MCPS-DATA
// service-primitive family. Frames are the MPDU: frame control, sequence
// number, addressing fields, payload, 16-bit FCS, at most 127 bytes on air.

#ifndef WSNEMU_MAC_HPP
#define WSNEMU_MAC_HPP

#include <compare>
#include <cstdint>
#include <string>

#include "wsnemu/bytes.hpp"
#include "wsnemu/result.hpp"

namespace wsnemu::mac {

constexpr size_t kMaxPhyPacketSize = 127; // aMaxPHYPacketSize
constexpr size_t kMinMpduSize = 5;        // FCF + seq + FCS
constexpr size_t kFcsSize = 2;
constexpr uint16_t kBroadcastShortAddr = 0xFFFF;

enum class FrameType : uint8_t {
    Beacon = 0,
    Data = 1,
    Ack = 2,
    MacCommand = 3,
};

enum class AddrMode : uint8_t {
    None = 0,
    // value 1 is reserved by the standard and rejected everywhere
    Short = 2,
    Extended = 3,
};

/// Source or destination address: none, 16-bit short, or 64-bit extended.
struct MacAddress {
    AddrMode mode = AddrMode::None;
    uint16_t shortAddr = 0;
    uint64_t extAddr = 0;

    static MacAddress none() { return {}; }
    static MacAddress makeShort(uint16_t addr) { return {AddrMode::Short, addr, 0}; }
    static MacAddress makeExtended(uint64_t addr) { return {AddrMode::Extended, 0, addr}; }

    bool operator==(const MacAddress&) const = default;
    std::string toString() const;
};

/// The 16-bit frame control field, bit layout per the 2006 revision:
/// type[0:2] sec[3] pending[4] ackReq[5] panComp[6] reserved[7:9]
/// dstMode[10:11] version[12:13] srcMode[14:15].
struct FrameControl {
    FrameType frameType = FrameType::Data;
    bool securityEnabled = false;
    bool framePending = false;
    bool ackRequest = false;
    bool panIdCompression = false;
    AddrMode destAddrMode = AddrMode::None;
    uint8_t frameVersion = 0;
    AddrMode srcAddrMode = AddrMode::None;

    uint16_t toBits() const;

    bool operator==(const FrameControl&) const = default;
};

struct MacFrame {
    FrameControl fcf;
    uint8_t seq = 0;
    uint16_t destPanId = 0; // on the wire iff destAddrMode != None
    MacAddress dest;
    // On the wire iff srcAddrMode != None and !panIdCompression; under
    // compression it must equal destPanId (decoding restores it from there).
    uint16_t srcPanId = 0;
    MacAddress src;
    Bytes payload;

    bool operator==(const MacFrame&) const = default;
};

enum class MacError : uint8_t {
    FrameTooLong,
    InvalidParameter,
    FcsMismatch,
    Truncated,
    Unsupported,
};

const char* errorToString(MacError e);

/// MCPS-DATA.confirm status codes.
enum class MacStatus : uint8_t {
    Success,
    TransactionOverflow,
    FrameTooLong,
    NoAck,
    InvalidParameter,
    ChannelAccessFailure,
};

const char* statusToString(MacStatus s);

struct McpsDataRequest {
    AddrMode srcAddrMode = AddrMode::Short;
    uint16_t dstPanId = 0;
    MacAddress dstAddr;
    uint8_t msduHandle = 0;
    Bytes msdu;
    bool ackRequest = false;
};

struct McpsDataConfirm {
    uint8_t msduHandle = 0;
    MacStatus status = MacStatus::Success;
    SimTimeUs timestamp = 0;
};

struct McpsDataIndication {
    uint16_t srcPanId = 0;
    MacAddress src;
    uint16_t dstPanId = 0;
    MacAddress dst;
    Bytes msdu;
    uint8_t linkQuality = 0;
    SimTimeUs timestamp = 0;
};

/// Serializes a frame to its on-air MPDU, FCS appended little-endian.
Result<Bytes, MacError> encodeFrame(const MacFrame& frame);

/// Parses and FCS-checks an MPDU. The returned frame carries no FCS bytes.
Result<MacFrame, MacError> decodeFrame(ByteView mpdu);

/// Builds the Data frame for an MCPS-DATA.request. PAN id compression is
/// applied when source and destination PANs match and both addresses are
/// present.
Result<MacFrame, MacError> buildDataMpdu(const McpsDataRequest& req, uint8_t seq,
                                         uint16_t srcPanId, const MacAddress& srcAddr);

/// Converts a received Data frame into an MCPS-DATA.indication.
Result<McpsDataIndication, MacError> frameToIndication(const MacFrame& frame, uint8_t lqi,
                                                       SimTimeUs timestamp);

constexpr uint32_t kAirtimeUsPerByte = 32; // 250 kbps O-QPSK
constexpr uint32_t kSyncHeaderBytes = 6;   // preamble + SFD + PHR

/// On-air duration of a PSDU: (6 + len) * 32 us. Valid for 5..127 bytes.
Result<uint32_t, MacError> airtimeUs(size_t psduLen);

} // namespace wsnemu::mac

#endif
