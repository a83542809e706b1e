// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_EMUCI_SERVER_HPP
#define WSNEMU_EMUCI_SERVER_HPP

#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "wsnemu/emuci.hpp"
#include "wsnemu/net.hpp"
#include "wsnemu/pcap.hpp"
#include "wsnemu/world.hpp"

namespace wsnemu::emuci {

struct ServerOptions {
    uint16_t port = 0; // 0: no TCP listener (in-process sessions only)
    std::string bindAddr = "0.0.0.0";
    size_t sessionQueueLimit = 1024; // messages; slow receivers get dropped
    std::string worldPcapFile;       // optional capture of every point
};

/// Control-protocol server owning the emulation world. Any number of
/// concurrent sessions; every world mutation runs under one mutex, in
/// command-arrival order. Responses follow command order per session, and
/// an ADVANCE_TIME response is queued strictly after the indications that
/// advance produced.
class Server {
public:
    Server(emu::WorldConfig worldConfig, ServerOptions options);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// World access for setup and for sibling servers; hold worldMutex().
    emu::World& world() { return world_; }
    std::mutex& worldMutex() { return worldMu_; }

    void start();
    void stop();
    uint16_t port() const;

    /// Serves a connected stream as one session (in-process transport).
    void attach(std::unique_ptr<net::ByteStream> stream);

    /// Raw capture taps (legacy capture receivers). Called under the world
    /// mutex for every capture point event; a false return unsubscribes.
    using RawCaptureSink = std::function<bool(const emu::Capture&)>;
    uint64_t addCaptureTap(RawCaptureSink sink);
    void removeCaptureTap(uint64_t id);

    size_t sessionCount() const;

private:
    struct Session {
        uint64_t id = 0;
        std::unique_ptr<net::ByteStream> stream;
        std::thread reader;
        std::thread writer;

        std::mutex outMu;
        std::condition_variable outCv;
        std::deque<Bytes> outQueue;
        bool outClosed = false;
        bool closeAfterDrain = false;

        enum class State : uint8_t { AwaitHello, Ready, Closed } state = State::AwaitHello;
        bool subscribeAll = false;
        std::set<uint16_t> subscribedNodes;
        std::atomic<bool> dead{false};
    };

    void acceptLoop();
    void readerLoop(Session& session);
    void writerLoop(Session& session);
    void handleMessage(Session& session, const Message& msg);
    void enqueue(Session& session, const Message& msg);
    void closeSession(Session& session);
    void onCapture(const emu::Capture& capture);

    emu::WorldConfig worldConfig_;
    ServerOptions options_;
    emu::World world_;
    std::mutex worldMu_;

    std::unique_ptr<net::TcpListener> listener_;
    std::thread acceptThread_;
    std::atomic<bool> stopping_{false};

    mutable std::mutex sessionsMu_;
    std::vector<std::unique_ptr<Session>> sessions_;
    uint64_t nextSessionId_ = 1;

    std::mutex tapsMu_;
    std::vector<std::pair<uint64_t, RawCaptureSink>> taps_;
    uint64_t nextTapId_ = 1;

    pcap::FileWriter worldWriter_;
};

} // namespace wsnemu::emuci

#endif
