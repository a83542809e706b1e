// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/emuci_client.hpp"

#include <stdexcept>

#include "wsnemu/log.hpp"

namespace wsnemu::emuci {

Client::Client(std::unique_ptr<net::ByteStream> stream) : stream_(std::move(stream)) {}

Client::~Client() { close(); }

void Client::close()
{
    if (stream_)
        stream_->close();
}

uint8_t Client::nextSeq()
{
    // 0 is reserved for indications
    if (++seq_ == 0)
        seq_ = 1;
    return seq_;
}

Message Client::awaitResponse(uint8_t seq)
{
    for (;;) {
        // consume already-decoded messages first
        while (!queued_.empty()) {
            Message m = std::move(queued_.front());
            queued_.erase(queued_.begin());

            if (m.msgType == kMsgFrameIndication) {
                auto ind = decodeFrameIndication(m.payload);
                if (!ind)
                    throw std::runtime_error("emuci: malformed FRAME_INDICATION from server");
                TraceEntry te;
                te.dir = TraceEntry::Dir::Received;
                te.msgType = m.msgType;
                te.seq = m.seq;
                te.indicationTs = ind->record.timeUs();
                trace_.push_back(te);
                if (indicationSink_)
                    indicationSink_(*ind);
                continue;
            }

            TraceEntry te;
            te.dir = TraceEntry::Dir::Received;
            te.msgType = m.msgType;
            te.seq = m.seq;
            if (m.msgType == kMsgTimeGrant) {
                if (auto grant = decodeTimeGrant(m.payload))
                    te.grantUs = *grant;
            }
            trace_.push_back(te);

            if (m.seq != seq)
                throw std::runtime_error("emuci: response sequence mismatch");
            return m;
        }

        uint8_t buf[4096];
        size_t n = stream_->read(buf, sizeof(buf));
        if (n == 0)
            throw std::runtime_error("emuci: connection closed while awaiting response");
        auto fed = decoder_.feed(ByteView(buf, n));
        if (decoder_.failed())
            throw std::runtime_error("emuci: framing error from server");
        for (auto& m : fed.messages)
            queued_.push_back(std::move(m));
    }
}

CommandStatus Client::toStatus(const Message& response)
{
    CommandStatus status;
    if (response.msgType == kMsgNack) {
        auto nack = decodeNack(response.payload);
        if (nack) {
            status.code = nack->code;
            status.detail = nack->detail;
        }
        return status;
    }
    status.ok = true;
    return status;
}

Message Client::transact(uint8_t msgType, Bytes payload)
{
    Message cmd;
    cmd.msgType = msgType;
    cmd.seq = nextSeq();
    cmd.payload = std::move(payload);

    TraceEntry te;
    te.dir = TraceEntry::Dir::Sent;
    te.msgType = cmd.msgType;
    te.seq = cmd.seq;
    trace_.push_back(te);

    Bytes wire = encodeMessage(cmd);
    LOG_TRACE("emuci client > ", messageName(cmd.msgType), " seq=", int(cmd.seq), " [",
              toHex(wire), "]");
    stream_->write(wire);
    return awaitResponse(cmd.seq);
}

CommandStatus Client::hello(uint8_t version)
{
    return toStatus(transact(kMsgHello, encodeHello(version)));
}

CommandStatus Client::registerNode(const RegisterNode& reg)
{
    return toStatus(transact(kMsgRegisterNode, encodeRegisterNode(reg)));
}

CommandStatus Client::injectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu)
{
    return toStatus(transact(kMsgInjectFrame, encodeInjectFrame(nodeId, t, mpdu)));
}

CommandStatus Client::setAttenuation(uint16_t fromNode, uint16_t toNode, uint16_t quarterDb)
{
    return toStatus(
        transact(kMsgSetAttenuation, encodeSetAttenuation({fromNode, toNode, quarterDb})));
}

CommandStatus Client::injectInterference(const InjectInterference& req)
{
    return toStatus(transact(kMsgInjectInterference, encodeInjectInterference(req)));
}

CommandStatus Client::subscribeFrames(const SubscribeFrames& scope)
{
    return toStatus(transact(kMsgSubscribeFrames, encodeSubscribeFrames(scope)));
}

Client::AdvanceResult Client::advanceTime(uint64_t untilUs)
{
    AdvanceResult result;
    Message response = transact(kMsgAdvanceTime, encodeAdvanceTime(untilUs));
    result.status = toStatus(response);
    if (result.status.ok) {
        if (response.msgType != kMsgTimeGrant)
            throw std::runtime_error("emuci: expected TIME_GRANT");
        auto grant = decodeTimeGrant(response.payload);
        if (!grant)
            throw std::runtime_error("emuci: malformed TIME_GRANT");
        result.reachedUs = *grant;
    }
    return result;
}

Client::StatsResult Client::getStats()
{
    StatsResult result;
    Message response = transact(kMsgGetStats, {});
    result.status = toStatus(response);
    if (result.status.ok) {
        if (response.msgType != kMsgStats)
            throw std::runtime_error("emuci: expected STATS");
        auto stats = decodeStats(response.payload);
        if (!stats)
            throw std::runtime_error("emuci: malformed STATS");
        result.stats = std::move(*stats);
    }
    return result;
}

} // namespace wsnemu::emuci
