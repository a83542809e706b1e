// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/world.hpp"

#include <algorithm>
#include <stdexcept>

#include "wsnemu/log.hpp"
#include "wsnemu/mac.hpp"

namespace wsnemu::emu {

using emuci::NackCode;

Behavior behaviorFromName(const std::string& name)
{
    if (name == "external")
        return Behavior::External;
    if (name == "sink")
        return Behavior::Sink;
    if (name == "echo")
        return Behavior::Echo;
    if (name == "scripted")
        return Behavior::Scripted;
    throw std::runtime_error("unknown node behavior '" + name + "'");
}

const char* outcomeName(Outcome o)
{
    switch (o) {
    case Outcome::Delivered: return "delivered";
    case Outcome::BelowSensitivity: return "belowSensitivity";
    case Outcome::Jammed: return "jammed";
    case Outcome::Isolated: return "isolated";
    }
    return "?";
}

World::World(WorldConfig config) : config_(config) {}

std::optional<NackCode> World::addNode(const NodeSetup& setup)
{
    if (nodes_.count(setup.nodeId))
        return NackCode::DuplicateNode;

    VirtualNode node;
    node.nodeId = setup.nodeId;
    node.shortAddr = setup.shortAddr ? setup.shortAddr : setup.nodeId;
    node.panId = setup.panId;
    node.txPowerDbm = setup.txPowerDbm;
    node.sensitivityDbm = setup.sensitivityDbm;
    node.behavior = setup.behavior;
    node.turnaroundUs = setup.turnaroundUs;
    node.script = setup.script;
    std::sort(node.script.begin(), node.script.end(),
              [](const ScriptedTx& a, const ScriptedTx& b) { return a.timeUs < b.timeUs; });

    uint16_t id = setup.nodeId;
    nodes_.emplace(id, std::move(node));

    for (const ScriptedTx& tx : nodes_.at(id).script) {
        Event e;
        e.t = tx.timeUs;
        e.kind = Event::Kind::ScriptEmit;
        e.nodeId = id;
        push(std::move(e));
    }
    return std::nullopt;
}

const VirtualNode* World::node(uint16_t nodeId) const
{
    auto it = nodes_.find(nodeId);
    return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<uint16_t> World::nodeIds() const
{
    std::vector<uint16_t> out;
    out.reserve(nodes_.size());
    for (const auto& [id, node] : nodes_)
        out.push_back(id);
    return out;
}

std::optional<NackCode> World::setAttenuation(uint16_t fromNode, uint16_t toNode,
                                              uint16_t quarterDb)
{
    if (!hasNode(fromNode) || !hasNode(toNode))
        return NackCode::UnknownNode;
    if (fromNode == toNode)
        return NackCode::SelfLink;

    // Takes effect for transmissions strictly after the current time: a
    // transmission starting exactly now still sees the previous value.
    auto key = std::make_pair(fromNode, toNode);
    auto it = matrix_.find(key);
    if (it == matrix_.end()) {
        matrix_[key] = LinkEntry{config_.defaultAttenuationQdb, quarterDb, now_};
    } else {
        uint16_t effectiveNow = now_ > it->second.switchUs ? it->second.after : it->second.before;
        it->second = LinkEntry{effectiveNow, quarterDb, now_};
    }
    return std::nullopt;
}

uint16_t World::attenuationAt(uint16_t fromNode, uint16_t toNode, SimTimeUs t) const
{
    auto it = matrix_.find(std::make_pair(fromNode, toNode));
    if (it == matrix_.end())
        return config_.defaultAttenuationQdb;
    return t > it->second.switchUs ? it->second.after : it->second.before;
}

std::optional<NackCode> World::injectInterference(const emuci::InjectInterference& req)
{
    if (!hasNode(req.atNode))
        return NackCode::UnknownNode;
    if (req.startUs < now_)
        return NackCode::TimeInPast;
    InterferenceSource src;
    src.atNode = req.atNode;
    src.powerDbm = req.powerDbm;
    src.startUs = req.startUs;
    src.durationUs = req.durationUs;
    interference_.push_back(src);
    return std::nullopt;
}

std::optional<NackCode> World::injectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu)
{
    auto it = nodes_.find(nodeId);
    if (it == nodes_.end())
        return NackCode::UnknownNode;
    if (mpdu.size() < mac::kMinMpduSize)
        return NackCode::FrameTooShort;
    if (mpdu.size() > mac::kMaxPhyPacketSize)
        return NackCode::FrameTooLong;

    SimTimeUs when = t;
    if (when < now_) {
        ++clampedInjections_;
        when = now_;
    }

    // The feed leg: SLIP-framed onto the node's serial, decoded and
    // transmitted when the step executes.
    Bytes framed = slip::encode(mpdu);
    it->second.feedPending.insert(it->second.feedPending.end(), framed.begin(), framed.end());

    Event e;
    e.t = when;
    e.kind = Event::Kind::FeedStep;
    e.nodeId = nodeId;
    push(std::move(e));
    return std::nullopt;
}

size_t World::pendingFeedBytes(uint16_t nodeId) const
{
    auto it = nodes_.find(nodeId);
    return it == nodes_.end() ? 0 : it->second.feedPending.size();
}

void World::scheduleTransmission(uint16_t fromNode, Bytes mpdu, SimTimeUs startUs)
{
    if (mpdu.size() < mac::kMinMpduSize || mpdu.size() > mac::kMaxPhyPacketSize)
        return;
    uint32_t airtime = *mac::airtimeUs(mpdu.size());

    TxRecord rec;
    rec.startUs = startUs;
    rec.endUs = startUs + airtime;
    rec.fromNode = fromNode;
    txRegistry_.push_back(rec);

    Event e;
    e.t = rec.endUs;
    e.kind = Event::Kind::TxComplete;
    e.nodeId = fromNode;
    e.mpdu = std::move(mpdu);
    e.startUs = startUs;
    e.txIndex = txRegistry_.size() - 1;
    push(std::move(e));
}

void World::push(Event e)
{
    e.seq = eventSeq_++;
    events_.push(std::move(e));
}

void World::advance(SimTimeUs untilUs)
{
    while (!events_.empty() && events_.top().t <= untilUs) {
        Event e = events_.top();
        events_.pop();
        now_ = e.t;
        execute(e);
    }
    if (untilUs > now_)
        now_ = untilUs;
}

void World::execute(const Event& e)
{
    switch (e.kind) {
    case Event::Kind::FeedStep:
        if (auto it = nodes_.find(e.nodeId); it != nodes_.end())
            runFeedStep(it->second, e.t);
        break;
    case Event::Kind::TxComplete:
        completeTransmission(e);
        break;
    case Event::Kind::ScriptEmit: {
        auto it = nodes_.find(e.nodeId);
        if (it == nodes_.end())
            break;
        VirtualNode& node = it->second;
        if (node.scriptPos < node.script.size()) {
            const ScriptedTx& tx = node.script[node.scriptPos++];
            scheduleTransmission(node.nodeId, tx.mpdu, e.t);
        }
        break;
    }
    }
}

void World::runFeedStep(VirtualNode& node, SimTimeUs t)
{
    Bytes pending = std::move(node.feedPending);
    node.feedPending = {};
    auto decoded = node.feedDecoder.feed(pending);
    node.counters.slipProtocolErrors += decoded.protocolErrors;
    node.counters.slipOverflowErrors += decoded.overflowErrors;
    for (Bytes& mpdu : decoded.frames)
        scheduleTransmission(node.nodeId, std::move(mpdu), t);
}

int32_t World::qdbAttenuation(uint16_t fromNode, uint16_t toNode, SimTimeUs t) const
{
    return attenuationAt(fromNode, toNode, t);
}

void World::completeTransmission(const Event& e)
{
    auto fromIt = nodes_.find(e.nodeId);
    if (fromIt == nodes_.end())
        return;
    VirtualNode& from = fromIt->second;

    const SimTimeUs startUs = e.startUs;
    const SimTimeUs endUs = e.t;
    const uint32_t airtime = static_cast<uint32_t>(endUs - startUs);

    from.counters.framesTx++;
    from.counters.txAirtimeUs += airtime;

    TransmissionLogEntry log;
    log.timeUs = startUs;
    log.fromNode = from.nodeId;
    log.mpdu = e.mpdu;

    // Capture at the source: the frame as sent.
    emitCapture(endUs, from.nodeId, true, e.mpdu);

    for (auto& [rid, receiver] : nodes_) {
        if (rid == from.nodeId)
            continue;

        ReceiverOutcome outcome;
        outcome.nodeId = rid;

        int32_t att = qdbAttenuation(from.nodeId, rid, startUs);
        if (att == emuci::kAttenuationInfinite) {
            outcome.outcome = Outcome::Isolated;
            log.outcomes.push_back(outcome);
            continue;
        }

        int32_t rxQdb = int32_t(from.txPowerDbm) * 4 - att;
        int32_t sensQdb = int32_t(receiver.sensitivityDbm) * 4;
        if (rxQdb < sensQdb) {
            outcome.outcome = Outcome::BelowSensitivity;
            receiver.counters.dropBelowSensitivity++;
            log.outcomes.push_back(outcome);
            continue;
        }

        bool jammed = false;
        for (const InterferenceSource& src : interference_) {
            if (!src.overlaps(startUs, endUs))
                continue;
            int32_t srcAtt = src.atNode == rid ? 0 : qdbAttenuation(src.atNode, rid, startUs);
            if (srcAtt == emuci::kAttenuationInfinite)
                continue;
            int32_t interfQdb = int32_t(src.powerDbm) * 4 - srcAtt;
            if (rxQdb - interfQdb < config_.sirThresholdQdb) {
                jammed = true;
                break;
            }
        }
        if (!jammed) {
            // A concurrent transmission acts as an interference source at
            // its sender's node.
            for (size_t i = 0; i < txRegistry_.size(); ++i) {
                if (i == e.txIndex)
                    continue;
                const TxRecord& other = txRegistry_[i];
                if (other.startUs >= endUs || startUs >= other.endUs)
                    continue;
                int32_t srcAtt = other.fromNode == rid
                                     ? 0
                                     : qdbAttenuation(other.fromNode, rid, startUs);
                if (srcAtt == emuci::kAttenuationInfinite)
                    continue;
                auto senderIt = nodes_.find(other.fromNode);
                if (senderIt == nodes_.end())
                    continue;
                int32_t interfQdb = int32_t(senderIt->second.txPowerDbm) * 4 - srcAtt;
                if (rxQdb - interfQdb < config_.sirThresholdQdb) {
                    jammed = true;
                    break;
                }
            }
        }

        if (jammed) {
            outcome.outcome = Outcome::Jammed;
            log.outcomes.push_back(outcome);
            if (config_.jamMode == JamMode::Drop) {
                receiver.counters.dropJammed++;
            } else {
                // Corrupt mode: the radio still syncs, the frame arrives
                // broken. Flip the last pre-FCS byte so the FCS check fails
                // downstream.
                Bytes corrupted = e.mpdu;
                corrupted[corrupted.size() - 3] ^= 0xFF;
                receiver.counters.rxAirtimeUs += airtime;
                emitCapture(endUs, rid, false, corrupted);
                deliver(receiver, std::move(corrupted), endUs);
            }
            continue;
        }

        outcome.outcome = Outcome::Delivered;
        int32_t lqi = 255 + (rxQdb - sensQdb);
        outcome.lqi = static_cast<uint8_t>(std::clamp<int32_t>(lqi, 0, 255));
        log.outcomes.push_back(outcome);

        receiver.counters.framesRx++;
        receiver.counters.rxAirtimeUs += airtime;
        emitCapture(endUs, rid, false, e.mpdu);
        deliver(receiver, e.mpdu, endUs);
    }

    txLog_.push_back(std::move(log));
}

void World::deliver(VirtualNode& to, Bytes bytes, SimTimeUs completeUs)
{
    Bytes framed = slip::encode(bytes);
    auto decoded = to.radioDecoder.feed(framed);
    to.counters.slipProtocolErrors += decoded.protocolErrors;
    to.counters.slipOverflowErrors += decoded.overflowErrors;
    for (const Bytes& mpdu : decoded.frames)
        behaviorConsume(to, mpdu, completeUs);
}

void World::feedRadioSerial(uint16_t nodeId, ByteView slipBytes, SimTimeUs t)
{
    auto it = nodes_.find(nodeId);
    if (it == nodes_.end())
        return;
    VirtualNode& node = it->second;
    auto decoded = node.radioDecoder.feed(slipBytes);
    node.counters.slipProtocolErrors += decoded.protocolErrors;
    node.counters.slipOverflowErrors += decoded.overflowErrors;
    for (const Bytes& mpdu : decoded.frames)
        behaviorConsume(node, mpdu, t);
}

void World::behaviorConsume(VirtualNode& node, const Bytes& mpdu, SimTimeUs t)
{
    if (node.behavior == Behavior::External)
        return; // the simulated side consumes via capture fanout instead

    auto decoded = mac::decodeFrame(mpdu);
    if (!decoded) {
        if (decoded.error() == mac::MacError::FcsMismatch)
            node.counters.dropFcs++;
        else
            node.counters.dropNonData++;
        return;
    }
    if (decoded->fcf.frameType != mac::FrameType::Data) {
        node.counters.dropNonData++;
        return;
    }

    node.counters.behaviorRx++;

    if (node.behavior != Behavior::Echo)
        return;

    const mac::MacFrame& frame = *decoded;
    bool unicastToMe = frame.dest.mode == mac::AddrMode::Short &&
                       frame.dest.shortAddr == node.shortAddr &&
                       frame.dest.shortAddr != mac::kBroadcastShortAddr &&
                       frame.destPanId == node.panId;
    if (!unicastToMe || frame.src.mode == mac::AddrMode::None)
        return;

    mac::MacFrame reply;
    reply.fcf.frameType = mac::FrameType::Data;
    reply.fcf.destAddrMode = frame.src.mode;
    reply.fcf.srcAddrMode = mac::AddrMode::Short;
    reply.fcf.panIdCompression = frame.srcPanId == node.panId;
    reply.seq = node.seqCounter++;
    reply.destPanId = frame.srcPanId;
    reply.dest = frame.src;
    reply.srcPanId = node.panId;
    reply.src = mac::MacAddress::makeShort(node.shortAddr);
    reply.payload = frame.payload;

    auto encoded = mac::encodeFrame(reply);
    if (!encoded) {
        LOG_WARN("echo node ", node.nodeId, " could not encode reply: ",
                 mac::errorToString(encoded.error()));
        return;
    }
    scheduleTransmission(node.nodeId, std::move(*encoded), t + node.turnaroundUs);
}

void World::emitCapture(SimTimeUs t, uint16_t pointNodeId, bool transmitPoint, const Bytes& bytes)
{
    if (!captureSink_)
        return;
    Capture cap;
    cap.timeUs = t;
    cap.pointNodeId = pointNodeId;
    cap.transmitPoint = transmitPoint;
    cap.bytes = bytes;
    captureSink_(cap);
}

std::vector<emuci::NodeStats> World::stats() const
{
    std::vector<emuci::NodeStats> out;
    out.reserve(nodes_.size());
    for (const auto& [id, node] : nodes_) {
        emuci::NodeStats s;
        s.nodeId = id;
        s.framesTx = static_cast<uint32_t>(node.counters.framesTx);
        s.framesRx = static_cast<uint32_t>(node.counters.framesRx);
        s.framesDropped = static_cast<uint32_t>(node.counters.framesDropped());
        s.txAirtimeUs = node.counters.txAirtimeUs;
        s.rxAirtimeUs = node.counters.rxAirtimeUs;
        s.energyMicroJoule = node.counters.txAirtimeUs * config_.txCostUwPerUs +
                             node.counters.rxAirtimeUs * config_.rxCostUwPerUs;
        out.push_back(s);
    }
    return out;
}

} // namespace wsnemu::emu
