#include "ncauth/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <list>
#include <memory>
#include <thread>

namespace ncauth {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

struct Worker {
    std::jthread thread;
    std::shared_ptr<std::atomic<bool>> done;
};

}  // namespace

Connection& Connection::operator=(Connection&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

Connection::~Connection() {
    if (fd_ >= 0) ::close(fd_);
}

Connection Connection::connect_to(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const auto service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
    for (auto* ai = res; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return Connection(fd);
        }
        ::close(fd);
    }
    throw TransportError(errno_text(("connect " + host + ":" + service).c_str()));
}

void Connection::set_deadline(std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void Connection::send_raw(std::span<const std::uint8_t> bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(errno_text("send"));
        }
        sent += static_cast<std::size_t>(n);
    }
}

void Connection::send_frame(const Frame& f) { send_raw(encode_frame(f)); }

bool Connection::read_exact(std::uint8_t* out, std::size_t n, bool eof_ok) {
    std::size_t got = 0;
    while (got < n) {
        ssize_t r = ::recv(fd_, out + got, n - got, 0);
        if (r == 0) {
            if (eof_ok && got == 0) return false;
            throw TransportError("connection closed mid-frame");
        }
        if (r < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw TransportError("session deadline exceeded");
            throw TransportError(errno_text("recv"));
        }
        got += static_cast<std::size_t>(r);
    }
    return true;
}

std::optional<Frame> Connection::receive_frame() {
    Bytes buf(Frame::kHeaderSize);
    if (!read_exact(buf.data(), buf.size(), true)) {
        return std::nullopt;
    }
    const auto header = decode_frame_header(buf);
    buf.resize(Frame::kHeaderSize + header.payload_len);
    read_exact(buf.data() + Frame::kHeaderSize, header.payload_len, false);
    return decode_frame(buf);
}

Server::Server(ServerOptions opts) : opts_(std::move(opts)) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const auto service = std::to_string(opts_.port);
    if (int rc = ::getaddrinfo(opts_.host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        throw TransportError("resolve " + opts_.host + ": " + ::gai_strerror(rc));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
    for (auto* ai = res; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
            listen_fd_ = fd;
            break;
        }
        ::close(fd);
    }
    if (listen_fd_ < 0) {
        throw TransportError(errno_text(("listen " + opts_.host + ":" + service).c_str()));
    }
    sockaddr_storage addr{};
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                       : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

Server::~Server() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::serve(std::size_t max_sessions) {
    std::list<Worker> workers;
    std::uint64_t accepted = 0;
    auto reap = [&workers] { workers.remove_if([](const Worker& w) { return w.done->load(); }); };

    while (!stopping_ && (max_sessions == 0 || accepted < max_sessions)) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int ready = ::poll(&pfd, 1, 100);
        reap();
        if (ready <= 0) continue;
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        auto done = std::make_shared<std::atomic<bool>>(false);
        const std::uint64_t index = accepted++;
        workers.push_back(Worker{std::jthread([this, fd, index, done] {
                                     handle(Connection(fd), index);
                                     done->store(true);
                                 }),
                                 done});
    }
    workers.clear();  // joins
}

void Server::handle(Connection conn, std::uint64_t index) {
    conn.set_deadline(opts_.session_deadline);
    VerifierSession session(opts_.verifier);
    auto rng = SeededRandom::derive(opts_.seed, index);
    SessionId sid{};
    try {
        while (!session.terminal()) {
            std::optional<Frame> in;
            try {
                in = conn.receive_frame();
            } catch (const FrameError& e) {
                for (const auto& f : session.abort(std::string("malformed frame: ") + e.what()).outgoing) {
                    conn.send_frame(f);
                }
                break;
            }
            if (!in) {
                session.abort("connection closed by peer");
                break;
            }
            if (session.state() == VerifierSession::State::AwaitHello) sid = in->session_id;
            for (const auto& f : session.step(*in, rng).outgoing) {
                conn.send_frame(f);
            }
        }
    } catch (const TransportError& e) {
        session.abort(std::string("transport: ") + e.what());
    }
    SessionLogEntry entry{index, sid, session.decision().value_or(Decision::Reject), session.reason(),
                          session.transcript()};
    std::lock_guard lock(log_mutex_);
    log_.push_back(std::move(entry));
}

std::vector<SessionLogEntry> Server::log() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

ClientResult run_client(const std::string& host, std::uint16_t port, ProverSession& prover, RandomSource& rng,
                        std::chrono::milliseconds deadline) {
    ClientResult result;
    try {
        auto conn = Connection::connect_to(host, port);
        conn.set_deadline(deadline);
        for (const auto& f : prover.start(rng)) {
            conn.send_frame(f);
        }
        while (!prover.terminal()) {
            auto in = conn.receive_frame();
            if (!in) {
                prover.abort("connection closed by verifier");
                break;
            }
            for (const auto& f : prover.step(*in, rng).outgoing) {
                conn.send_frame(f);
            }
        }
    } catch (const std::exception& e) {
        prover.abort(std::string("transport: ") + e.what());
    }
    result.decision = prover.decision().value_or(Decision::Reject);
    result.reason = prover.reason();
    result.transcript = prover.transcript();
    return result;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon + 1 == endpoint.size()) {
        throw std::invalid_argument("endpoint must be host:port, got '" + endpoint + "'");
    }
    std::string host = endpoint.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
    }
    unsigned long port = 0;
    try {
        std::size_t used = 0;
        port = std::stoul(endpoint.substr(colon + 1), &used);
        if (used != endpoint.size() - colon - 1) throw std::invalid_argument("port");
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid port in '" + endpoint + "'");
    }
    if (port > 65535) {
        throw std::invalid_argument("port out of range in '" + endpoint + "'");
    }
    return {host.empty() ? "127.0.0.1" : host, static_cast<std::uint16_t>(port)};
}

}  // namespace ncauth
