// SPDX-License-Identifier: Apache-2.0
//
// Blocking byte-stream transports: TCP sockets and an in-process duplex pipe
// so both coupling sides can run hermetically in one process.

#ifndef WSNEMU_NET_HPP
#define WSNEMU_NET_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "wsnemu/bytes.hpp"

namespace wsnemu::net {

/// Blocking duplex byte stream. read() returns 0 only at end-of-stream.
class ByteStream {
public:
    virtual ~ByteStream() = default;

    virtual size_t read(uint8_t* buf, size_t maxLen) = 0;
    virtual void write(ByteView data) = 0;
    virtual void close() = 0;

    /// Reads exactly n bytes; returns false on clean EOF before any byte.
    /// Throws on EOF mid-read.
    bool readExact(uint8_t* buf, size_t n);
};

struct ConnectionRefused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TcpStream : public ByteStream {
public:
    static std::unique_ptr<TcpStream> connect(const std::string& host, uint16_t port);
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream() override;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    size_t read(uint8_t* buf, size_t maxLen) override;
    void write(ByteView data) override;
    void close() override;

private:
    int fd_ = -1;
    std::mutex closeMu_;
};

class TcpListener {
public:
    explicit TcpListener(uint16_t port, const std::string& bindAddr = "0.0.0.0");
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    /// Blocks until a client connects; returns nullptr once closed.
    std::unique_ptr<TcpStream> accept();
    void close();
    uint16_t port() const { return port_; }

private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

/// One direction of an in-memory pipe.
class PipeBuffer {
public:
    size_t read(uint8_t* buf, size_t maxLen);
    void write(ByteView data);
    void close();

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<uint8_t> data_;
    bool closed_ = false;
};

class PipeStream : public ByteStream {
public:
    PipeStream(std::shared_ptr<PipeBuffer> in, std::shared_ptr<PipeBuffer> out)
        : in_(std::move(in)), out_(std::move(out))
    {
    }

    size_t read(uint8_t* buf, size_t maxLen) override { return in_->read(buf, maxLen); }
    void write(ByteView data) override { out_->write(data); }
    void close() override
    {
        in_->close();
        out_->close();
    }

private:
    std::shared_ptr<PipeBuffer> in_;
    std::shared_ptr<PipeBuffer> out_;
};

/// Connected in-memory stream pair (client end, server end).
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> makePipePair();

} // namespace wsnemu::net

#endif
