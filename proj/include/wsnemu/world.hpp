// SPDX-License-Identifier: Apache-2.0
//
// Virtual radio world: sensor nodes joined by a directed quarter-dB
// attenuation matrix, interference supply points, SLIP serial legs, capture
// fanout and airtime/energy accounting. Entirely deterministic: identical
// command streams yield identical logs, captures and stats.

#ifndef WSNEMU_WORLD_HPP
#define WSNEMU_WORLD_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "wsnemu/bytes.hpp"
#include "wsnemu/emuci.hpp"
#include "wsnemu/slip.hpp"

namespace wsnemu::emu {

enum class Behavior : uint8_t {
    External, // stands in for a simulated node: traffic crosses the HIL boundary
    Sink,     // counts received frames
    Echo,     // returns each unicast data frame to its source
    Scripted, // transmits a predefined frame list
};

Behavior behaviorFromName(const std::string& name); // throws on unknown names

enum class Outcome : uint8_t { Delivered, BelowSensitivity, Jammed, Isolated };

const char* outcomeName(Outcome o);

struct ScriptedTx {
    SimTimeUs timeUs = 0;
    Bytes mpdu;
};

struct NodeCounters {
    uint64_t framesTx = 0;
    uint64_t framesRx = 0;
    uint64_t dropBelowSensitivity = 0;
    uint64_t dropJammed = 0;
    uint64_t dropFcs = 0;
    uint64_t dropNonData = 0;
    uint64_t slipProtocolErrors = 0;
    uint64_t slipOverflowErrors = 0;
    uint64_t txAirtimeUs = 0;
    uint64_t rxAirtimeUs = 0;
    uint64_t behaviorRx = 0; // well-formed data frames consumed by the behavior

    uint64_t framesDropped() const
    {
        return dropBelowSensitivity + dropJammed + dropFcs + dropNonData;
    }
};

struct NodeSetup {
    uint16_t nodeId = 0;
    uint16_t shortAddr = 0; // defaults to nodeId when 0
    uint16_t panId = 0x0022;
    int8_t txPowerDbm = 0;
    int8_t sensitivityDbm = -85;
    Behavior behavior = Behavior::Sink;
    SimTimeUs turnaroundUs = 0;
    std::vector<ScriptedTx> script;
};

struct VirtualNode {
    uint16_t nodeId = 0;
    uint16_t shortAddr = 0;
    uint16_t panId = 0;
    int8_t txPowerDbm = 0;
    int8_t sensitivityDbm = -85;
    Behavior behavior = Behavior::Sink;
    SimTimeUs turnaroundUs = 0;
    std::vector<ScriptedTx> script;
    size_t scriptPos = 0;

    // Serial legs. Feed direction carries frames the node must transmit
    // (the inject path); radio direction carries channel deliveries that the
    // node behavior consumes.
    Bytes feedPending;
    slip::Decoder feedDecoder;
    slip::Decoder radioDecoder;

    uint8_t seqCounter = 0;
    NodeCounters counters;
};

struct InterferenceSource {
    uint16_t atNode = 0; // signal supply point
    int8_t powerDbm = 0;
    SimTimeUs startUs = 0;
    uint32_t durationUs = 0;

    bool overlaps(SimTimeUs begin, SimTimeUs end) const
    {
        return startUs < end && begin < startUs + durationUs;
    }
};

struct ReceiverOutcome {
    uint16_t nodeId = 0;
    Outcome outcome = Outcome::Delivered;
    uint8_t lqi = 0;
};

struct TransmissionLogEntry {
    SimTimeUs timeUs = 0; // transmission start
    uint16_t fromNode = 0;
    Bytes mpdu;
    std::vector<ReceiverOutcome> outcomes;
};

/// A capture point observation: the frame as seen at a node, stamped at
/// frame completion time (end of airtime), the way sniffer hardware stamps.
struct Capture {
    SimTimeUs timeUs = 0;
    uint16_t pointNodeId = 0;
    bool transmitPoint = false; // true at the source, false at a destination
    Bytes bytes;
};

enum class JamMode : uint8_t {
    Drop,    // jammed receptions vanish
    Corrupt, // jammed receptions arrive with the last pre-FCS byte flipped
};

struct WorldConfig {
    uint16_t defaultAttenuationQdb = 160; // 40.0 dB
    int32_t sirThresholdQdb = 12;         // 3 dB
    JamMode jamMode = JamMode::Drop;
    uint32_t txCostUwPerUs = 60;
    uint32_t rxCostUwPerUs = 54;
};

class World {
public:
    using CaptureSink = std::function<void(const Capture&)>;

    explicit World(WorldConfig config = {});

    // -- topology ----------------------------------------------------------
    std::optional<emuci::NackCode> addNode(const NodeSetup& setup);
    bool hasNode(uint16_t nodeId) const { return nodes_.count(nodeId) != 0; }
    const VirtualNode* node(uint16_t nodeId) const;
    std::vector<uint16_t> nodeIds() const;

    // -- control operations (NackCode on failure) ---------------------------
    std::optional<emuci::NackCode> setAttenuation(uint16_t fromNode, uint16_t toNode,
                                                  uint16_t quarterDb);
    std::optional<emuci::NackCode> injectInterference(const emuci::InjectInterference& req);
    std::optional<emuci::NackCode> injectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu);

    // -- time ---------------------------------------------------------------
    void advance(SimTimeUs untilUs);
    SimTimeUs now() const { return now_; }

    // -- observability ------------------------------------------------------
    void setCaptureSink(CaptureSink sink) { captureSink_ = std::move(sink); }
    std::vector<emuci::NodeStats> stats() const;
    const std::vector<TransmissionLogEntry>& txLog() const { return txLog_; }
    uint64_t clampedInjections() const { return clampedInjections_; }
    uint16_t attenuationAt(uint16_t fromNode, uint16_t toNode, SimTimeUs t) const;
    size_t pendingFeedBytes(uint16_t nodeId) const;

    // Direct channel access, used by behaviors internally and by tests.
    void scheduleTransmission(uint16_t fromNode, Bytes mpdu, SimTimeUs startUs);
    void feedRadioSerial(uint16_t nodeId, ByteView slipBytes, SimTimeUs t);

private:
    struct LinkEntry {
        uint16_t before;
        uint16_t after;
        SimTimeUs switchUs = 0;
    };

    struct TxRecord {
        SimTimeUs startUs = 0;
        SimTimeUs endUs = 0;
        uint16_t fromNode = 0;
    };

    struct Event {
        SimTimeUs t = 0;
        uint64_t seq = 0;
        enum class Kind : uint8_t { FeedStep, TxComplete, ScriptEmit } kind = Kind::FeedStep;
        uint16_t nodeId = 0;
        Bytes mpdu;       // TxComplete
        SimTimeUs startUs = 0; // TxComplete: transmission start
        size_t txIndex = 0;    // TxComplete: registry slot

        struct Later {
            bool operator()(const Event& a, const Event& b) const
            {
                return a.t != b.t ? a.t > b.t : a.seq > b.seq;
            }
        };
    };

    void execute(const Event& e);
    void completeTransmission(const Event& e);
    void runFeedStep(VirtualNode& node, SimTimeUs t);
    void deliver(VirtualNode& to, Bytes bytes, SimTimeUs completeUs);
    void behaviorConsume(VirtualNode& node, const Bytes& mpdu, SimTimeUs t);
    void emitCapture(SimTimeUs t, uint16_t pointNodeId, bool transmitPoint, const Bytes& bytes);
    int32_t qdbAttenuation(uint16_t fromNode, uint16_t toNode, SimTimeUs t) const;
    void push(Event e);

    WorldConfig config_;
    SimTimeUs now_ = 0;
    uint64_t eventSeq_ = 0;
    std::map<uint16_t, VirtualNode> nodes_;
    std::map<std::pair<uint16_t, uint16_t>, LinkEntry> matrix_;
    std::vector<InterferenceSource> interference_;
    std::vector<TxRecord> txRegistry_;
    std::priority_queue<Event, std::vector<Event>, Event::Later> events_;
    std::vector<TransmissionLogEntry> txLog_;
    CaptureSink captureSink_;
    uint64_t clampedInjections_ = 0;
};

} // namespace wsnemu::emu

#endif
