// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/kernel.hpp"

#include <chrono>
#include <thread>

#include "wsnemu/log.hpp"

namespace wsnemu::sim {

using mac::MacStatus;

Kernel::Kernel(emuci::Client& client) : client_(client)
{
    client_.setIndicationSink([this](const emuci::FrameIndication& ind) {
        std::lock_guard lock(inboxMu_);
        inbox_.push_back(ind);
    });
}

EventHandle Kernel::scheduleTimer(SimTimeUs t, std::function<void()> action,
                                  EventPriority priority)
{
    if (t < now_)
        throw std::runtime_error("scheduleTimer: time in the past");
    Event e;
    e.t = t;
    e.priority = static_cast<uint16_t>(priority);
    e.kind = Event::Kind::Timer;
    e.action = std::move(action);
    e.handle = nextHandle_++;
    live_[e.handle] = true;
    EventHandle handle = e.handle;
    push(std::move(e));
    return handle;
}

bool Kernel::cancel(EventHandle handle)
{
    auto it = live_.find(handle);
    if (it == live_.end() || !it->second)
        return false;
    it->second = false; // lazily discarded when popped
    return true;
}

void Kernel::push(Event e)
{
    e.seq = eventSeq_++;
    events_.push(std::move(e));
}

ExternalInterfaceModule& Kernel::addModule(uint16_t nodeId, uint16_t shortAddr, uint16_t panId)
{
    auto module = std::make_unique<ExternalInterfaceModule>(*this, nodeId, shortAddr, panId);
    auto [it, inserted] = modules_.emplace(nodeId, std::move(module));
    if (!inserted)
        throw std::runtime_error("module for node already exists");
    return *it->second;
}

ExternalInterfaceModule* Kernel::module(uint16_t nodeId)
{
    auto it = modules_.find(nodeId);
    return it == modules_.end() ? nullptr : it->second.get();
}

void Kernel::scheduleConfirm(ExternalInterfaceModule& module, const mac::McpsDataConfirm& confirm,
                             SimTimeUs t)
{
    Event e;
    e.t = t;
    e.priority = static_cast<uint16_t>(EventPriority::PrimitiveDelivery);
    e.kind = Event::Kind::Confirm;
    e.module = &module;
    e.confirm = confirm;
    e.handle = nextHandle_++;
    live_[e.handle] = true;
    push(std::move(e));
}

void Kernel::drainInbox(RunReport& report)
{
    std::deque<emuci::FrameIndication> batch;
    {
        std::lock_guard lock(inboxMu_);
        batch.swap(inbox_);
    }
    for (auto& ind : batch) {
        if (captureHook_)
            captureHook_(ind);

        SimTimeUs ts = ind.record.timeUs();
        if (ts < now_) {
            // Late external event: clamp forward and count, never reorder
            // into the past.
            ++report.causalityClamps;
            ts = now_;
        }
        Event e;
        e.t = ts;
        e.priority = static_cast<uint16_t>(EventPriority::FrameArrival);
        e.kind = Event::Kind::FrameArrival;
        e.nodeId = ind.nodeId;
        e.record = std::move(ind.record);
        e.handle = nextHandle_++;
        live_[e.handle] = true;
        push(std::move(e));
    }
}

std::optional<SimTimeUs> Kernel::earliestEventTime() const
{
    if (events_.empty())
        return std::nullopt;
    return events_.top().t;
}

void Kernel::execute(Event& e, RunReport& report)
{
    ++report.executedEvents;
    if (traceEnabled_) {
        ExecTraceEntry entry;
        entry.timeUs = e.t;
        entry.priority = e.priority;
        switch (e.kind) {
        case Event::Kind::Timer:
            entry.kind = ExecTraceEntry::Kind::Timer;
            entry.key = e.handle;
            break;
        case Event::Kind::FrameArrival:
            entry.kind = ExecTraceEntry::Kind::FrameArrival;
            entry.key = e.nodeId;
            entry.payload = e.record.data;
            break;
        case Event::Kind::Confirm:
            entry.kind = ExecTraceEntry::Kind::Confirm;
            entry.key = e.confirm.msduHandle;
            entry.payload = {static_cast<uint8_t>(e.confirm.status)};
            break;
        }
        execTrace_.push_back(std::move(entry));
    }

    switch (e.kind) {
    case Event::Kind::Timer:
        if (e.action)
            e.action();
        break;
    case Event::Kind::FrameArrival: {
        auto it = modules_.find(e.nodeId);
        if (it != modules_.end())
            it->second->handleArrival(e.record);
        break;
    }
    case Event::Kind::Confirm:
        e.module->deliverConfirm(e.confirm);
        break;
    }
}

Kernel::RunReport Kernel::runLockstep(SimTimeUs untilUs)
{
    return run(untilUs, false, 0);
}

Kernel::RunReport Kernel::runRealtime(SimTimeUs untilUs, uint64_t toleranceUs)
{
    return run(untilUs, true, toleranceUs);
}

Kernel::RunReport Kernel::run(SimTimeUs untilUs, bool paced, uint64_t toleranceUs)
{
    using Clock = std::chrono::steady_clock;
    RunReport report;

    const SimTimeUs simStart = now_;
    const Clock::time_point wallStart = Clock::now();

    for (;;) {
        drainInbox(report);

        SimTimeUs target = untilUs;
        if (auto next = earliestEventTime(); next && *next < target)
            target = *next;

        if (paced) {
            auto wallTarget = wallStart + std::chrono::microseconds(target - simStart);
            std::this_thread::sleep_until(wallTarget);
            auto lag = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                                             wallTarget)
                           .count();
            if (lag > 0) {
                report.maxLagUs = std::max<uint64_t>(report.maxLagUs, static_cast<uint64_t>(lag));
                if (static_cast<uint64_t>(lag) > toleranceUs)
                    ++report.overrunCount;
            }
        }

        // Pull the emulation world up to the target before touching any
        // event at that time.
        auto grant = client_.advanceTime(target);
        if (!grant.status.ok)
            throw std::runtime_error(std::string("advance_time rejected: ") +
                                     emuci::nackCodeName(grant.status.code));
        drainInbox(report);

        // Arrivals may have landed before the target; execute everything due.
        while (!events_.empty() && events_.top().t <= target) {
            Event e = events_.top();
            events_.pop();
            auto liveIt = live_.find(e.handle);
            if (liveIt != live_.end()) {
                bool alive = liveIt->second;
                live_.erase(liveIt);
                if (!alive)
                    continue;
            }
            now_ = e.t;
            execute(e, report);
        }
        now_ = std::max(now_, target);

        if (target >= untilUs) {
            // Events scheduled during the final batch may still be due.
            if (auto next = earliestEventTime(); next && *next <= untilUs)
                continue;
            break;
        }
    }
    now_ = untilUs;
    return report;
}

// --- ExternalInterfaceModule -----------------------------------------------

void ExternalInterfaceModule::extSend(const mac::McpsDataRequest& req)
{
    ++counters_.requests;
    mac::McpsDataConfirm confirm;
    confirm.msduHandle = req.msduHandle;

    mac::MacAddress srcAddr = req.srcAddrMode == mac::AddrMode::None
                                  ? mac::MacAddress::none()
                                  : mac::MacAddress::makeShort(shortAddr_);
    if (req.srcAddrMode == mac::AddrMode::Extended) {
        confirm.status = MacStatus::InvalidParameter;
        confirm.timestamp = kernel_.now();
        kernel_.scheduleConfirm(*this, confirm, kernel_.now());
        return;
    }

    auto frame = mac::buildDataMpdu(req, macSeq_++, panId_, srcAddr);
    if (!frame) {
        confirm.status = frame.error() == mac::MacError::FrameTooLong
                             ? MacStatus::FrameTooLong
                             : MacStatus::InvalidParameter;
        confirm.timestamp = kernel_.now();
        kernel_.scheduleConfirm(*this, confirm, kernel_.now());
        return;
    }
    auto encoded = mac::encodeFrame(*frame);
    if (!encoded) {
        confirm.status = MacStatus::InvalidParameter;
        confirm.timestamp = kernel_.now();
        kernel_.scheduleConfirm(*this, confirm, kernel_.now());
        return;
    }

    auto status = kernel_.client().injectFrame(nodeId_, kernel_.now(), *encoded);
    if (!status.ok) {
        switch (status.code) {
        case emuci::NackCode::UnknownNode:
            confirm.status = MacStatus::InvalidParameter;
            break;
        case emuci::NackCode::FrameTooLong:
        case emuci::NackCode::FrameTooShort:
            confirm.status = MacStatus::FrameTooLong;
            break;
        default:
            confirm.status = MacStatus::TransactionOverflow;
            break;
        }
        confirm.timestamp = kernel_.now();
        kernel_.scheduleConfirm(*this, confirm, kernel_.now());
        return;
    }

    uint32_t airtime = *mac::airtimeUs(encoded->size());
    confirm.status = MacStatus::Success;
    confirm.timestamp = kernel_.now() + airtime;
    kernel_.scheduleConfirm(*this, confirm, kernel_.now() + airtime);
}

void ExternalInterfaceModule::deliverConfirm(const mac::McpsDataConfirm& confirm)
{
    ++counters_.confirms;
    if (confirmHandler_)
        confirmHandler_(confirm);
}

void ExternalInterfaceModule::handleArrival(const pcap::Record& record)
{
    auto decoded = mac::decodeFrame(record.data);
    if (!decoded) {
        if (decoded.error() == mac::MacError::FcsMismatch)
            ++counters_.fcsDrops;
        else
            ++counters_.malformedDrops;
        return;
    }

    const mac::MacFrame& frame = *decoded;
    // Capture points also report this node's own transmissions.
    if (frame.src.mode == mac::AddrMode::Short && frame.src.shortAddr == shortAddr_) {
        ++counters_.selfCaptures;
        return;
    }
    if (frame.fcf.frameType != mac::FrameType::Data) {
        ++counters_.nonDataDrops;
        return;
    }
    bool forMe = frame.dest.mode == mac::AddrMode::None ||
                 (frame.dest.mode == mac::AddrMode::Short &&
                  (frame.dest.shortAddr == shortAddr_ ||
                   frame.dest.shortAddr == mac::kBroadcastShortAddr));
    if (!forMe) {
        ++counters_.otherAddressDrops;
        return;
    }

    auto indication = mac::frameToIndication(frame, 255, record.timeUs());
    if (!indication) {
        ++counters_.nonDataDrops;
        return;
    }
    ++counters_.indications;
    if (indicationHandler_)
        indicationHandler_(*indication);
}

} // namespace wsnemu::sim
