// SPDX-License-Identifier: Apache-2.0
//
// Discrete-event kernel with a hybrid scheduler: internal events from a
// priority queue, external events pulled from the emulation side through the
// control protocol in lockstep. The kernel never executes an event at time t
// before the emulation world has been granted up to t.

#ifndef WSNEMU_KERNEL_HPP
#define WSNEMU_KERNEL_HPP

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <vector>

#include "wsnemu/emuci_client.hpp"
#include "wsnemu/mac.hpp"
#include "wsnemu/pcap.hpp"

namespace wsnemu::sim {

/// Tiebreak classes at equal timestamps, lower first: a packet arrives,
/// then primitives are delivered, then protocol timers react.
enum class EventPriority : uint16_t {
    FrameArrival = 0,
    PrimitiveDelivery = 1,
    Timer = 2,
    Control = 3,
};

using EventHandle = uint64_t;

/// Execution trace row; two runs of one scenario must produce equal traces.
struct ExecTraceEntry {
    SimTimeUs timeUs = 0;
    uint16_t priority = 0;
    enum class Kind : uint8_t { Timer, FrameArrival, Confirm, Control } kind = Kind::Timer;
    uint64_t key = 0; // timer id / node id / msdu handle
    Bytes payload;    // frame bytes for arrivals; status byte for confirms

    bool operator==(const ExecTraceEntry&) const = default;
};

class Kernel;

/// Boundary module of one simulated node: turns MCPS-DATA.requests into
/// injected frames and incoming capture records into indications.
class ExternalInterfaceModule {
public:
    ExternalInterfaceModule(Kernel& kernel, uint16_t nodeId, uint16_t shortAddr, uint16_t panId)
        : kernel_(kernel), nodeId_(nodeId), shortAddr_(shortAddr), panId_(panId)
    {
    }

    uint16_t nodeId() const { return nodeId_; }
    uint16_t shortAddr() const { return shortAddr_; }
    uint16_t panId() const { return panId_; }

    using IndicationHandler = std::function<void(const mac::McpsDataIndication&)>;
    using ConfirmHandler = std::function<void(const mac::McpsDataConfirm&)>;
    void onIndication(IndicationHandler handler) { indicationHandler_ = std::move(handler); }
    void onConfirm(ConfirmHandler handler) { confirmHandler_ = std::move(handler); }

    /// Sends a request across the HIL boundary. Every call yields exactly one
    /// confirm event carrying the request's msduHandle; failures surface as
    /// confirm statuses, never as exceptions.
    void extSend(const mac::McpsDataRequest& req);

    struct Counters {
        uint64_t fcsDrops = 0;
        uint64_t nonDataDrops = 0;
        uint64_t otherAddressDrops = 0;
        uint64_t selfCaptures = 0;
        uint64_t malformedDrops = 0;
        uint64_t indications = 0;
        uint64_t requests = 0;
        uint64_t confirms = 0;
    };
    const Counters& counters() const { return counters_; }

private:
    friend class Kernel;

    void handleArrival(const pcap::Record& record);
    void deliverConfirm(const mac::McpsDataConfirm& confirm);

    Kernel& kernel_;
    uint16_t nodeId_;
    uint16_t shortAddr_;
    uint16_t panId_;
    uint8_t macSeq_ = 0;
    IndicationHandler indicationHandler_;
    ConfirmHandler confirmHandler_;
    Counters counters_;
};

class Kernel {
public:
    explicit Kernel(emuci::Client& client);

    SimTimeUs now() const { return now_; }

    EventHandle scheduleTimer(SimTimeUs t, std::function<void()> action,
                              EventPriority priority = EventPriority::Timer);
    /// Removes a pending event; reports whether it was still live.
    bool cancel(EventHandle handle);

    ExternalInterfaceModule& addModule(uint16_t nodeId, uint16_t shortAddr, uint16_t panId);
    ExternalInterfaceModule* module(uint16_t nodeId);

    /// Every capture record pulled from the backend, in wire order, before
    /// conversion to events. The scenario driver tees these into a file.
    using CaptureHook = std::function<void(const emuci::FrameIndication&)>;
    void setCaptureHook(CaptureHook hook) { captureHook_ = std::move(hook); }

    struct RunReport {
        uint64_t executedEvents = 0;
        uint64_t causalityClamps = 0;
        uint64_t maxLagUs = 0;
        uint64_t overrunCount = 0;
    };

    RunReport runLockstep(SimTimeUs untilUs);
    RunReport runRealtime(SimTimeUs untilUs, uint64_t toleranceUs);

    const std::vector<ExecTraceEntry>& execTrace() const { return execTrace_; }
    void clearExecTrace() { execTrace_.clear(); }
    void setTraceEnabled(bool on) { traceEnabled_ = on; }

    emuci::Client& client() { return client_; }

private:
    friend class ExternalInterfaceModule;

    struct Event {
        SimTimeUs t = 0;
        uint16_t priority = 0;
        uint64_t seq = 0;
        EventHandle handle = 0;
        enum class Kind : uint8_t { Timer, FrameArrival, Confirm } kind = Kind::Timer;
        std::function<void()> action;             // Timer
        uint16_t nodeId = 0;                      // FrameArrival
        pcap::Record record;                      // FrameArrival
        ExternalInterfaceModule* module = nullptr; // Confirm
        mac::McpsDataConfirm confirm;             // Confirm

        struct Later {
            bool operator()(const Event& a, const Event& b) const
            {
                if (a.t != b.t)
                    return a.t > b.t;
                if (a.priority != b.priority)
                    return a.priority > b.priority;
                return a.seq > b.seq;
            }
        };
    };

    RunReport run(SimTimeUs untilUs, bool paced, uint64_t toleranceUs);
    void push(Event e);
    void scheduleConfirm(ExternalInterfaceModule& module, const mac::McpsDataConfirm& confirm,
                         SimTimeUs t);
    void drainInbox(RunReport& report);
    void execute(Event& e, RunReport& report);
    std::optional<SimTimeUs> earliestEventTime() const;

    emuci::Client& client_;
    SimTimeUs now_ = 0;
    uint64_t eventSeq_ = 0;
    EventHandle nextHandle_ = 1;
    std::priority_queue<Event, std::vector<Event>, Event::Later> events_;
    std::map<EventHandle, bool> live_; // pending handles
    std::map<uint16_t, std::unique_ptr<ExternalInterfaceModule>> modules_;

    // Single-producer single-consumer inbox: the transport context appends,
    // the kernel drains at step boundaries.
    std::mutex inboxMu_;
    std::deque<emuci::FrameIndication> inbox_;

    CaptureHook captureHook_;
    bool traceEnabled_ = true;
    std::vector<ExecTraceEntry> execTrace_;
};

} // namespace wsnemu::sim

#endif
