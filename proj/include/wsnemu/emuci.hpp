// SPDX-License-Identifier: Apache-2.0
//
// Emulation Control Interface wire protocol: length-prefixed binary
// command/response/indication messages over a byte stream. Integers on the
// wire are big-endian; the 32-bit length prefix counts everything after
// itself. FRAME payloads embed PCAP records verbatim (little-endian, as in
// capture files), so a capture writer can tee the stream unchanged.

#ifndef WSNEMU_EMUCI_HPP
#define WSNEMU_EMUCI_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "wsnemu/bytes.hpp"
#include "wsnemu/pcap.hpp"
#include "wsnemu/result.hpp"

namespace wsnemu::emuci {

constexpr uint8_t kProtocolVersion = 1;
constexpr uint16_t kDefaultPort = 4242;
constexpr uint32_t kMaxPayload = 1u << 24; // framing sanity bound

// Commands
constexpr uint8_t kMsgHello = 0x01;
constexpr uint8_t kMsgRegisterNode = 0x02;
constexpr uint8_t kMsgInjectFrame = 0x03;
constexpr uint8_t kMsgSetAttenuation = 0x04;
constexpr uint8_t kMsgInjectInterference = 0x05;
constexpr uint8_t kMsgAdvanceTime = 0x06;
constexpr uint8_t kMsgSubscribeFrames = 0x07;
constexpr uint8_t kMsgGetStats = 0x08;
// Responses
constexpr uint8_t kMsgAck = 0x80;
constexpr uint8_t kMsgNack = 0x81;
constexpr uint8_t kMsgTimeGrant = 0x82;
constexpr uint8_t kMsgStats = 0x83;
// Indications (seq always 0)
constexpr uint8_t kMsgFrameIndication = 0xC0;

const char* messageName(uint8_t msgType);

enum class NackCode : uint8_t {
    UnknownCommand = 1,
    NotReady = 2,
    VersionMismatch = 3,
    UnknownNode = 4,
    SelfLink = 5,
    TimeInPast = 6,
    MalformedPayload = 7,
    DuplicateNode = 8,
    FrameTooLong = 9,
    FrameTooShort = 10,
    BadState = 11,
    Overloaded = 12,
};

const char* nackCodeName(NackCode code);

struct Message {
    uint8_t msgType = 0;
    uint8_t seq = 0;
    Bytes payload;

    bool operator==(const Message&) const = default;
};

enum class FrameError : uint8_t {
    FrameTooLarge, // declared length exceeds the sanity bound; unrecoverable
    BadLength,     // declared length below the 2-byte minimum
};

Bytes encodeMessage(const Message& m);

/// Incremental framing decoder. A framing error is terminal for the stream:
/// resynchronization inside a length-prefixed stream is impossible.
class StreamDecoder {
public:
    struct FeedResult {
        std::vector<Message> messages;
    };

    FeedResult feed(ByteView chunk);

    bool failed() const { return failed_; }
    FrameError error() const { return error_; }
    size_t buffered() const { return pending_.size(); }

private:
    Bytes pending_;
    bool failed_ = false;
    FrameError error_ = FrameError::BadLength;
};

// --- typed payloads -------------------------------------------------------

struct RegisterNode {
    uint16_t nodeId = 0;
    uint16_t shortAddr = 0;
    uint16_t panId = 0;
    int8_t txPowerDbm = 0;
    int8_t sensitivityDbm = -85;
};

struct InjectFrame {
    uint16_t nodeId = 0;
    pcap::Record record;
};

struct SetAttenuation {
    uint16_t fromNode = 0;
    uint16_t toNode = 0;
    uint16_t quarterDb = 0;
};

constexpr uint16_t kAttenuationInfinite = 0xFFFF;

struct InjectInterference {
    uint16_t atNode = 0;
    int8_t powerDbm = 0;
    uint64_t startUs = 0;
    uint32_t durationUs = 0;
};

struct SubscribeFrames {
    bool all = false;
    std::vector<uint16_t> nodeIds; // used when !all
};

struct NodeStats {
    uint16_t nodeId = 0;
    uint32_t framesTx = 0;
    uint32_t framesRx = 0;
    uint32_t framesDropped = 0;
    uint64_t txAirtimeUs = 0;
    uint64_t rxAirtimeUs = 0;
    uint64_t energyMicroJoule = 0;

    bool operator==(const NodeStats&) const = default;
};

struct FrameIndication {
    uint16_t nodeId = 0; // capture point
    pcap::Record record;
};

enum class PayloadError : uint8_t { Malformed };

Bytes encodeHello(uint8_t version);
Result<uint8_t, PayloadError> decodeHello(ByteView payload);

Bytes encodeRegisterNode(const RegisterNode& r);
Result<RegisterNode, PayloadError> decodeRegisterNode(ByteView payload);

Bytes encodeInjectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu);
Result<InjectFrame, PayloadError> decodeInjectFrame(ByteView payload);

Bytes encodeSetAttenuation(const SetAttenuation& s);
Result<SetAttenuation, PayloadError> decodeSetAttenuation(ByteView payload);

Bytes encodeInjectInterference(const InjectInterference& i);
Result<InjectInterference, PayloadError> decodeInjectInterference(ByteView payload);

Bytes encodeAdvanceTime(uint64_t untilUs);
Result<uint64_t, PayloadError> decodeAdvanceTime(ByteView payload);

Bytes encodeSubscribeFrames(const SubscribeFrames& s);
Result<SubscribeFrames, PayloadError> decodeSubscribeFrames(ByteView payload);

Bytes encodeNack(NackCode code, const std::string& detail = {});
struct NackInfo {
    NackCode code;
    std::string detail;
};
Result<NackInfo, PayloadError> decodeNack(ByteView payload);

Bytes encodeTimeGrant(uint64_t reachedUs);
Result<uint64_t, PayloadError> decodeTimeGrant(ByteView payload);

Bytes encodeStats(const std::vector<NodeStats>& stats);
Result<std::vector<NodeStats>, PayloadError> decodeStats(ByteView payload);

Bytes encodeFrameIndication(uint16_t nodeId, SimTimeUs t, ByteView mpdu);
Result<FrameIndication, PayloadError> decodeFrameIndication(ByteView payload);

} // namespace wsnemu::emuci

#endif
