// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace wsnemu::net {

namespace {

[[noreturn]] void throwErrno(const std::string& what)
{
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

} // namespace

bool ByteStream::readExact(uint8_t* buf, size_t n)
{
    size_t got = 0;
    while (got < n) {
        size_t r = read(buf + got, n - got);
        if (r == 0) {
            if (got == 0)
                return false;
            throw std::runtime_error("stream closed mid-message");
        }
        got += r;
    }
    return true;
}

std::unique_ptr<TcpStream> TcpStream::connect(const std::string& host, uint16_t port)
{
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string portStr = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), portStr.c_str(), &hints, &res);
    if (rc != 0)
        throw std::runtime_error("cannot resolve '" + host + "': " + gai_strerror(rc));

    int fd = -1;
    int lastErr = 0;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0)
            continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
            break;
        lastErr = errno;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        if (lastErr == ECONNREFUSED)
            throw ConnectionRefused("connection refused by " + host + ":" + portStr);
        errno = lastErr;
        throwErrno("cannot connect to " + host + ":" + portStr);
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return std::make_unique<TcpStream>(fd);
}

TcpStream::~TcpStream() { close(); }

size_t TcpStream::read(uint8_t* buf, size_t maxLen)
{
    for (;;) {
        ssize_t n = ::recv(fd_, buf, maxLen, 0);
        if (n > 0)
            return static_cast<size_t>(n);
        if (n == 0)
            return 0;
        if (errno == EINTR)
            continue;
        if (errno == EBADF || errno == ECONNRESET)
            return 0; // treat a torn-down connection as EOF
        throwErrno("tcp read");
    }
}

void TcpStream::write(ByteView data)
{
    size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throwErrno("tcp write");
        }
        sent += static_cast<size_t>(n);
    }
}

void TcpStream::close()
{
    std::lock_guard lock(closeMu_);
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

TcpListener::TcpListener(uint16_t port, const std::string& bindAddr)
{
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0)
        throwErrno("socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bindAddr.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("bad bind address '" + bindAddr + "'");
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throwErrno("cannot bind port " + std::to_string(port));
    if (::listen(fd_, 16) != 0)
        throwErrno("listen");

    socklen_t len = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) == 0)
        port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() { close(); }

std::unique_ptr<TcpStream> TcpListener::accept()
{
    for (;;) {
        int client = ::accept(fd_, nullptr, nullptr);
        if (client >= 0) {
            int one = 1;
            ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return std::make_unique<TcpStream>(client);
        }
        if (errno == EINTR)
            continue;
        return nullptr; // listener closed
    }
}

void TcpListener::close()
{
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

size_t PipeBuffer::read(uint8_t* buf, size_t maxLen)
{
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !data_.empty() || closed_; });
    if (data_.empty())
        return 0;
    size_t n = std::min(maxLen, data_.size());
    for (size_t i = 0; i < n; ++i) {
        buf[i] = data_.front();
        data_.pop_front();
    }
    return n;
}

void PipeBuffer::write(ByteView data)
{
    std::lock_guard lock(mu_);
    if (closed_)
        return;
    data_.insert(data_.end(), data.begin(), data.end());
    cv_.notify_all();
}

void PipeBuffer::close()
{
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
}

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> makePipePair()
{
    auto aToB = std::make_shared<PipeBuffer>();
    auto bToA = std::make_shared<PipeBuffer>();
    auto a = std::make_unique<PipeStream>(bToA, aToB);
    auto b = std::make_unique<PipeStream>(aToB, bToA);
    return {std::move(a), std::move(b)};
}

} // namespace wsnemu::net
