// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/emuci_server.hpp"

#include "wsnemu/log.hpp"

namespace wsnemu::emuci {

Server::Server(emu::WorldConfig worldConfig, ServerOptions options)
    : worldConfig_(worldConfig), options_(std::move(options)), world_(worldConfig)
{
    world_.setCaptureSink([this](const emu::Capture& c) { onCapture(c); });
    if (!options_.worldPcapFile.empty())
        worldWriter_.open(options_.worldPcapFile);
}

Server::~Server() { stop(); }

void Server::start()
{
    if (options_.port == 0 && !listener_)
        return;
    if (!listener_)
        listener_ = std::make_unique<net::TcpListener>(options_.port, options_.bindAddr);
    acceptThread_ = std::thread([this] { acceptLoop(); });
}

uint16_t Server::port() const { return listener_ ? listener_->port() : options_.port; }

void Server::stop()
{
    if (stopping_.exchange(true))
        return;
    if (listener_)
        listener_->close();
    if (acceptThread_.joinable())
        acceptThread_.join();

    std::vector<std::unique_ptr<Session>> sessions;
    {
        std::lock_guard lock(sessionsMu_);
        sessions.swap(sessions_);
    }
    for (auto& session : sessions) {
        closeSession(*session);
        if (session->reader.joinable())
            session->reader.join();
        if (session->writer.joinable())
            session->writer.join();
    }
    worldWriter_.close();
}

void Server::acceptLoop()
{
    while (!stopping_) {
        auto stream = listener_->accept();
        if (!stream)
            return;
        attach(std::move(stream));
    }
}

void Server::attach(std::unique_ptr<net::ByteStream> stream)
{
    auto session = std::make_unique<Session>();
    session->stream = std::move(stream);
    Session* raw = session.get();
    {
        std::lock_guard lock(sessionsMu_);
        session->id = nextSessionId_++;
        sessions_.push_back(std::move(session));
    }
    raw->writer = std::thread([this, raw] { writerLoop(*raw); });
    raw->reader = std::thread([this, raw] { readerLoop(*raw); });
}

size_t Server::sessionCount() const
{
    std::lock_guard lock(sessionsMu_);
    size_t n = 0;
    for (const auto& s : sessions_)
        if (!s->dead)
            ++n;
    return n;
}

void Server::closeSession(Session& session)
{
    session.dead = true;
    {
        std::lock_guard lock(session.outMu);
        session.outClosed = true;
    }
    session.outCv.notify_all();
    session.stream->close();
}

void Server::readerLoop(Session& session)
{
    StreamDecoder decoder;
    uint8_t buf[4096];
    while (!session.dead) {
        size_t n = session.stream->read(buf, sizeof(buf));
        if (n == 0)
            break;
        auto fed = decoder.feed(ByteView(buf, n));
        for (const Message& msg : fed.messages)
            handleMessage(session, msg);
        if (decoder.failed()) {
            LOG_WARN("emuci session ", session.id, ": framing error (",
                     decoder.error() == FrameError::FrameTooLarge ? "frame too large"
                                                                  : "bad length",
                     "), closing");
            break;
        }
    }
    closeSession(session);
}

void Server::writerLoop(Session& session)
{
    bool closeStream = false;
    for (;;) {
        Bytes next;
        {
            std::unique_lock lock(session.outMu);
            session.outCv.wait(lock, [&] { return !session.outQueue.empty() || session.outClosed; });
            if (session.outQueue.empty()) {
                closeStream = session.closeAfterDrain;
                break;
            }
            next = std::move(session.outQueue.front());
            session.outQueue.pop_front();
        }
        try {
            session.stream->write(next);
        } catch (const std::exception& e) {
            LOG_DEBUG("emuci session ", session.id, ": write failed: ", e.what());
            session.dead = true;
            break;
        }
    }
    if (closeStream)
        session.stream->close();
}

void Server::enqueue(Session& session, const Message& msg)
{
    bool overflow = false;
    {
        std::lock_guard lock(session.outMu);
        if (session.outClosed)
            return;
        if (session.outQueue.size() >= options_.sessionQueueLimit) {
            overflow = true;
        } else {
            session.outQueue.push_back(encodeMessage(msg));
        }
    }
    if (overflow) {
        LOG_WARN("emuci session ", session.id, ": receiver too slow (",
                 options_.sessionQueueLimit, " messages queued), disconnecting");
        closeSession(session);
        return;
    }
    session.outCv.notify_one();
    LOG_TRACE("emuci server > session ", session.id, " ", messageName(msg.msgType),
              " seq=", int(msg.seq));
}

void Server::onCapture(const emu::Capture& capture)
{
    if (worldWriter_.isOpen())
        worldWriter_.append(capture.timeUs, capture.bytes);

    Bytes payload = encodeFrameIndication(capture.pointNodeId, capture.timeUs, capture.bytes);
    Message ind;
    ind.msgType = kMsgFrameIndication;
    ind.seq = 0;
    ind.payload = std::move(payload);

    {
        std::lock_guard lock(sessionsMu_);
        for (auto& session : sessions_) {
            if (session->dead || session->state != Session::State::Ready)
                continue;
            if (!session->subscribeAll && !session->subscribedNodes.count(capture.pointNodeId))
                continue;
            enqueue(*session, ind);
        }
    }

    std::lock_guard lock(tapsMu_);
    for (auto it = taps_.begin(); it != taps_.end();) {
        if (it->second(capture))
            ++it;
        else
            it = taps_.erase(it);
    }
}

uint64_t Server::addCaptureTap(RawCaptureSink sink)
{
    std::lock_guard lock(tapsMu_);
    uint64_t id = nextTapId_++;
    taps_.emplace_back(id, std::move(sink));
    return id;
}

void Server::removeCaptureTap(uint64_t id)
{
    std::lock_guard lock(tapsMu_);
    for (auto it = taps_.begin(); it != taps_.end(); ++it) {
        if (it->first == id) {
            taps_.erase(it);
            return;
        }
    }
}

void Server::handleMessage(Session& session, const Message& msg)
{
    LOG_TRACE("emuci server < session ", session.id, " ", messageName(msg.msgType),
              " seq=", int(msg.seq), " [", toHex(msg.payload), "]");

    auto ack = [&](Bytes payload = {}) {
        Message m;
        m.msgType = kMsgAck;
        m.seq = msg.seq;
        m.payload = std::move(payload);
        enqueue(session, m);
    };
    auto nack = [&](NackCode code, const std::string& detail = {}) {
        Message m;
        m.msgType = kMsgNack;
        m.seq = msg.seq;
        m.payload = encodeNack(code, detail);
        enqueue(session, m);
    };

    std::lock_guard lock(worldMu_);

    if (session.state == Session::State::Closed)
        return;
    if (session.state == Session::State::AwaitHello && msg.msgType != kMsgHello) {
        nack(NackCode::NotReady, "HELLO required first");
        return;
    }

    switch (msg.msgType) {
    case kMsgHello: {
        if (session.state == Session::State::Ready) {
            nack(NackCode::BadState, "session already established");
            return;
        }
        auto version = decodeHello(msg.payload);
        if (!version) {
            nack(NackCode::MalformedPayload);
            return;
        }
        if (*version != kProtocolVersion) {
            nack(NackCode::VersionMismatch,
                 "server speaks version " + std::to_string(kProtocolVersion));
            session.state = Session::State::Closed;
            // the response drains before the stream closes
            {
                std::lock_guard outLock(session.outMu);
                session.outClosed = true;
                session.closeAfterDrain = true;
            }
            session.outCv.notify_all();
            return;
        }
        session.state = Session::State::Ready;
        ack(Bytes{kProtocolVersion});
        return;
    }
    case kMsgRegisterNode: {
        auto reg = decodeRegisterNode(msg.payload);
        if (!reg) {
            nack(NackCode::MalformedPayload);
            return;
        }
        emu::NodeSetup setup;
        setup.nodeId = reg->nodeId;
        setup.shortAddr = reg->shortAddr;
        setup.panId = reg->panId;
        setup.txPowerDbm = reg->txPowerDbm;
        setup.sensitivityDbm = reg->sensitivityDbm;
        setup.behavior = emu::Behavior::External;
        if (auto err = world_.addNode(setup)) {
            nack(*err);
            return;
        }
        ack();
        return;
    }
    case kMsgInjectFrame: {
        auto inj = decodeInjectFrame(msg.payload);
        if (!inj) {
            nack(NackCode::MalformedPayload, "broken record framing");
            return;
        }
        if (auto err = world_.injectFrame(inj->nodeId, inj->record.timeUs(), inj->record.data)) {
            nack(*err);
            return;
        }
        ack();
        return;
    }
    case kMsgSetAttenuation: {
        auto set = decodeSetAttenuation(msg.payload);
        if (!set) {
            nack(NackCode::MalformedPayload);
            return;
        }
        if (auto err = world_.setAttenuation(set->fromNode, set->toNode, set->quarterDb)) {
            nack(*err);
            return;
        }
        ack();
        return;
    }
    case kMsgInjectInterference: {
        auto inj = decodeInjectInterference(msg.payload);
        if (!inj) {
            nack(NackCode::MalformedPayload);
            return;
        }
        if (auto err = world_.injectInterference(*inj)) {
            nack(*err);
            return;
        }
        ack();
        return;
    }
    case kMsgAdvanceTime: {
        auto until = decodeAdvanceTime(msg.payload);
        if (!until) {
            nack(NackCode::MalformedPayload);
            return;
        }
        if (*until < world_.now()) {
            nack(NackCode::TimeInPast);
            return;
        }
        // Indications produced here are enqueued before the grant.
        world_.advance(*until);
        Message grant;
        grant.msgType = kMsgTimeGrant;
        grant.seq = msg.seq;
        grant.payload = encodeTimeGrant(*until);
        enqueue(session, grant);
        return;
    }
    case kMsgSubscribeFrames: {
        auto sub = decodeSubscribeFrames(msg.payload);
        if (!sub) {
            nack(NackCode::MalformedPayload);
            return;
        }
        for (uint16_t id : sub->nodeIds) {
            if (!world_.hasNode(id)) {
                nack(NackCode::UnknownNode, "node " + std::to_string(id));
                return;
            }
        }
        session.subscribeAll = sub->all;
        session.subscribedNodes.clear();
        session.subscribedNodes.insert(sub->nodeIds.begin(), sub->nodeIds.end());
        ack();
        return;
    }
    case kMsgGetStats: {
        Message stats;
        stats.msgType = kMsgStats;
        stats.seq = msg.seq;
        stats.payload = encodeStats(world_.stats());
        enqueue(session, stats);
        return;
    }
    default:
        nack(NackCode::UnknownCommand, messageName(msg.msgType));
        return;
    }
}

} // namespace wsnemu::emuci
