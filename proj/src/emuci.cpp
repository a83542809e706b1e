// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/emuci.hpp"

#include <cstring>

namespace wsnemu::emuci {

const char* messageName(uint8_t msgType)
{
    switch (msgType) {
    case kMsgHello: return "HELLO";
    case kMsgRegisterNode: return "REGISTER_NODE";
    case kMsgInjectFrame: return "INJECT_FRAME";
    case kMsgSetAttenuation: return "SET_ATTENUATION";
    case kMsgInjectInterference: return "INJECT_INTERFERENCE";
    case kMsgAdvanceTime: return "ADVANCE_TIME";
    case kMsgSubscribeFrames: return "SUBSCRIBE_FRAMES";
    case kMsgGetStats: return "GET_STATS";
    case kMsgAck: return "ACK";
    case kMsgNack: return "NACK";
    case kMsgTimeGrant: return "TIME_GRANT";
    case kMsgStats: return "STATS";
    case kMsgFrameIndication: return "FRAME_INDICATION";
    }
    return "UNKNOWN";
}

const char* nackCodeName(NackCode code)
{
    switch (code) {
    case NackCode::UnknownCommand: return "UnknownCommand";
    case NackCode::NotReady: return "NotReady";
    case NackCode::VersionMismatch: return "VersionMismatch";
    case NackCode::UnknownNode: return "UnknownNode";
    case NackCode::SelfLink: return "SelfLink";
    case NackCode::TimeInPast: return "TimeInPast";
    case NackCode::MalformedPayload: return "MalformedPayload";
    case NackCode::DuplicateNode: return "DuplicateNode";
    case NackCode::FrameTooLong: return "FrameTooLong";
    case NackCode::FrameTooShort: return "FrameTooShort";
    case NackCode::BadState: return "BadState";
    case NackCode::Overloaded: return "Overloaded";
    }
    return "?";
}

Bytes encodeMessage(const Message& m)
{
    Bytes out;
    out.reserve(4 + 2 + m.payload.size());
    ByteWriter w(out);
    w.u32be(static_cast<uint32_t>(2 + m.payload.size()));
    w.u8(m.msgType);
    w.u8(m.seq);
    w.raw(m.payload);
    return out;
}

StreamDecoder::FeedResult StreamDecoder::feed(ByteView chunk)
{
    FeedResult result;
    if (failed_)
        return result;
    pending_.insert(pending_.end(), chunk.begin(), chunk.end());

    for (;;) {
        if (pending_.size() < 4)
            return result;
        ByteReader r(pending_);
        uint32_t length = r.u32be();
        if (length < 2) {
            failed_ = true;
            error_ = FrameError::BadLength;
            pending_.clear();
            return result;
        }
        if (length > kMaxPayload + 2) {
            failed_ = true;
            error_ = FrameError::FrameTooLarge;
            pending_.clear();
            return result;
        }
        if (pending_.size() < 4 + length)
            return result;

        Message m;
        m.msgType = r.u8();
        m.seq = r.u8();
        m.payload = r.raw(length - 2);
        pending_.erase(pending_.begin(), pending_.begin() + 4 + length);
        result.messages.push_back(std::move(m));
    }
}

// --- typed payloads -------------------------------------------------------

Bytes encodeHello(uint8_t version) { return Bytes{version}; }

Result<uint8_t, PayloadError> decodeHello(ByteView payload)
{
    if (payload.size() != 1)
        return PayloadError::Malformed;
    return payload[0];
}

Bytes encodeRegisterNode(const RegisterNode& r)
{
    Bytes out;
    ByteWriter w(out);
    w.u16be(r.nodeId);
    w.u16be(r.shortAddr);
    w.u16be(r.panId);
    w.i8(r.txPowerDbm);
    w.i8(r.sensitivityDbm);
    return out;
}

Result<RegisterNode, PayloadError> decodeRegisterNode(ByteView payload)
{
    if (payload.size() != 8)
        return PayloadError::Malformed;
    ByteReader r(payload);
    RegisterNode out;
    out.nodeId = r.u16be();
    out.shortAddr = r.u16be();
    out.panId = r.u16be();
    out.txPowerDbm = r.i8();
    out.sensitivityDbm = r.i8();
    return out;
}

Bytes encodeInjectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu)
{
    Bytes out;
    ByteWriter w(out);
    w.u16be(nodeId);
    auto rec = pcap::encodeRecord(t, mpdu);
    // mpdu <= 127 bytes by construction, far below any snaplen
    w.raw(*rec);
    return out;
}

namespace {

Result<pcap::Record, PayloadError> decodeEmbeddedRecord(ByteReader& r)
{
    if (r.remaining() < pcap::kRecordHeaderSize)
        return PayloadError::Malformed;
    pcap::Record rec;
    rec.tsSec = r.u32le();
    rec.tsUsec = r.u32le();
    uint32_t capLen = r.u32le();
    rec.originalLen = r.u32le();
    if (capLen > rec.originalLen || r.remaining() != capLen)
        return PayloadError::Malformed;
    rec.data = r.raw(capLen);
    return rec;
}

} // namespace

Result<InjectFrame, PayloadError> decodeInjectFrame(ByteView payload)
{
    if (payload.size() < 2)
        return PayloadError::Malformed;
    ByteReader r(payload);
    InjectFrame out;
    out.nodeId = r.u16be();
    auto rec = decodeEmbeddedRecord(r);
    if (!rec)
        return rec.error();
    out.record = std::move(*rec);
    return out;
}

Bytes encodeSetAttenuation(const SetAttenuation& s)
{
    Bytes out;
    ByteWriter w(out);
    w.u16be(s.fromNode);
    w.u16be(s.toNode);
    w.u16be(s.quarterDb);
    return out;
}

Result<SetAttenuation, PayloadError> decodeSetAttenuation(ByteView payload)
{
    if (payload.size() != 6)
        return PayloadError::Malformed;
    ByteReader r(payload);
    SetAttenuation out;
    out.fromNode = r.u16be();
    out.toNode = r.u16be();
    out.quarterDb = r.u16be();
    return out;
}

Bytes encodeInjectInterference(const InjectInterference& i)
{
    Bytes out;
    ByteWriter w(out);
    w.u16be(i.atNode);
    w.i8(i.powerDbm);
    w.u64be(i.startUs);
    w.u32be(i.durationUs);
    return out;
}

Result<InjectInterference, PayloadError> decodeInjectInterference(ByteView payload)
{
    if (payload.size() != 15)
        return PayloadError::Malformed;
    ByteReader r(payload);
    InjectInterference out;
    out.atNode = r.u16be();
    out.powerDbm = r.i8();
    out.startUs = r.u64be();
    out.durationUs = r.u32be();
    return out;
}

Bytes encodeAdvanceTime(uint64_t untilUs)
{
    Bytes out;
    ByteWriter w(out);
    w.u64be(untilUs);
    return out;
}

Result<uint64_t, PayloadError> decodeAdvanceTime(ByteView payload)
{
    if (payload.size() != 8)
        return PayloadError::Malformed;
    ByteReader r(payload);
    return r.u64be();
}

Bytes encodeSubscribeFrames(const SubscribeFrames& s)
{
    Bytes out;
    ByteWriter w(out);
    w.u8(s.all ? 0x00 : 0x01);
    if (!s.all) {
        w.u16be(static_cast<uint16_t>(s.nodeIds.size()));
        for (uint16_t id : s.nodeIds)
            w.u16be(id);
    }
    return out;
}

Result<SubscribeFrames, PayloadError> decodeSubscribeFrames(ByteView payload)
{
    if (payload.empty())
        return PayloadError::Malformed;
    ByteReader r(payload);
    SubscribeFrames out;
    uint8_t scope = r.u8();
    if (scope == 0x00) {
        out.all = true;
        if (r.remaining() != 0)
            return PayloadError::Malformed;
        return out;
    }
    if (scope != 0x01 || r.remaining() < 2)
        return PayloadError::Malformed;
    uint16_t count = r.u16be();
    if (r.remaining() != static_cast<size_t>(count) * 2)
        return PayloadError::Malformed;
    out.nodeIds.reserve(count);
    for (uint16_t i = 0; i < count; ++i)
        out.nodeIds.push_back(r.u16be());
    return out;
}

Bytes encodeNack(NackCode code, const std::string& detail)
{
    Bytes out;
    out.push_back(static_cast<uint8_t>(code));
    out.insert(out.end(), detail.begin(), detail.end());
    return out;
}

Result<NackInfo, PayloadError> decodeNack(ByteView payload)
{
    if (payload.empty())
        return PayloadError::Malformed;
    NackInfo info;
    info.code = static_cast<NackCode>(payload[0]);
    info.detail.assign(payload.begin() + 1, payload.end());
    return info;
}

Bytes encodeTimeGrant(uint64_t reachedUs) { return encodeAdvanceTime(reachedUs); }

Result<uint64_t, PayloadError> decodeTimeGrant(ByteView payload)
{
    return decodeAdvanceTime(payload);
}

Bytes encodeStats(const std::vector<NodeStats>& stats)
{
    Bytes out;
    ByteWriter w(out);
    w.u16be(static_cast<uint16_t>(stats.size()));
    for (const NodeStats& s : stats) {
        w.u16be(s.nodeId);
        w.u32be(s.framesTx);
        w.u32be(s.framesRx);
        w.u32be(s.framesDropped);
        w.u64be(s.txAirtimeUs);
        w.u64be(s.rxAirtimeUs);
        w.u64be(s.energyMicroJoule);
    }
    return out;
}

Result<std::vector<NodeStats>, PayloadError> decodeStats(ByteView payload)
{
    if (payload.size() < 2)
        return PayloadError::Malformed;
    ByteReader r(payload);
    uint16_t count = r.u16be();
    constexpr size_t kPerNode = 2 + 4 + 4 + 4 + 8 + 8 + 8;
    if (r.remaining() != static_cast<size_t>(count) * kPerNode)
        return PayloadError::Malformed;
    std::vector<NodeStats> out;
    out.reserve(count);
    for (uint16_t i = 0; i < count; ++i) {
        NodeStats s;
        s.nodeId = r.u16be();
        s.framesTx = r.u32be();
        s.framesRx = r.u32be();
        s.framesDropped = r.u32be();
        s.txAirtimeUs = r.u64be();
        s.rxAirtimeUs = r.u64be();
        s.energyMicroJoule = r.u64be();
        out.push_back(s);
    }
    return out;
}

Bytes encodeFrameIndication(uint16_t nodeId, SimTimeUs t, ByteView mpdu)
{
    return encodeInjectFrame(nodeId, t, mpdu);
}

Result<FrameIndication, PayloadError> decodeFrameIndication(ByteView payload)
{
    auto inj = decodeInjectFrame(payload);
    if (!inj)
        return inj.error();
    FrameIndication out;
    out.nodeId = inj->nodeId;
    out.record = std::move(inj->record);
    return out;
}

} // namespace wsnemu::emuci
