// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_EMUCI_CLIENT_HPP
#define WSNEMU_EMUCI_CLIENT_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wsnemu/emuci.hpp"
#include "wsnemu/net.hpp"

namespace wsnemu::emuci {

/// One protocol event as seen on the wire, for post-run contract checks.
struct TraceEntry {
    enum class Dir : uint8_t { Sent, Received } dir = Dir::Sent;
    uint8_t msgType = 0;
    uint8_t seq = 0;
    uint64_t grantUs = 0;      // TIME_GRANT payload
    uint64_t indicationTs = 0; // FRAME_INDICATION record timestamp
};

struct CommandStatus {
    bool ok = false;
    NackCode code = NackCode::UnknownCommand;
    std::string detail;
};

/// Blocking client side of the control protocol. One command in flight at a
/// time; indications received while waiting are handed to the indication
/// sink (and recorded in the trace) in arrival order.
class Client {
public:
    explicit Client(std::unique_ptr<net::ByteStream> stream);
    ~Client();

    using IndicationSink = std::function<void(const FrameIndication&)>;
    void setIndicationSink(IndicationSink sink) { indicationSink_ = std::move(sink); }

    CommandStatus hello(uint8_t version = kProtocolVersion);
    CommandStatus registerNode(const RegisterNode& reg);
    CommandStatus injectFrame(uint16_t nodeId, SimTimeUs t, ByteView mpdu);
    CommandStatus setAttenuation(uint16_t fromNode, uint16_t toNode, uint16_t quarterDb);
    CommandStatus injectInterference(const InjectInterference& req);
    CommandStatus subscribeFrames(const SubscribeFrames& scope);

    struct AdvanceResult {
        CommandStatus status;
        uint64_t reachedUs = 0;
    };
    AdvanceResult advanceTime(uint64_t untilUs);

    struct StatsResult {
        CommandStatus status;
        std::vector<NodeStats> stats;
    };
    StatsResult getStats();

    /// Sends a raw pre-framed command and waits for its response (testing).
    Message transact(uint8_t msgType, Bytes payload);

    const std::vector<TraceEntry>& trace() const { return trace_; }
    void clearTrace() { trace_.clear(); }

    void close();

private:
    uint8_t nextSeq();
    Message awaitResponse(uint8_t seq);
    CommandStatus toStatus(const Message& response);

    std::unique_ptr<net::ByteStream> stream_;
    StreamDecoder decoder_;
    std::vector<Message> queued_; // decoded but not yet consumed
    uint8_t seq_ = 0;
    IndicationSink indicationSink_;
    std::vector<TraceEntry> trace_;
};

} // namespace wsnemu::emuci

#endif
