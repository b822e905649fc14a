#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncauth/session.hpp"
#include "ncauth/wire.hpp"

namespace ncauth {

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Owned TCP socket carrying length-delimited frames.
class Connection {
public:
    explicit Connection(int fd) : fd_(fd) {}
    Connection(Connection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Connection& operator=(Connection&& other) noexcept;
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;
    ~Connection();

    static Connection connect_to(const std::string& host, std::uint16_t port);

    // Per-operation send/receive timeout.
    void set_deadline(std::chrono::milliseconds timeout);

    void send_frame(const Frame& f);

    // nullopt on orderly close before a header starts. Throws FrameError for
    // a malformed frame and TransportError for I/O failures or timeouts.
    std::optional<Frame> receive_frame();

    void send_raw(std::span<const std::uint8_t> bytes);

private:
    bool read_exact(std::uint8_t* out, std::size_t n, bool eof_ok);

    int fd_ = -1;
};

struct SessionLogEntry {
    std::uint64_t connection_index = 0;
    SessionId session_id{};
    Decision decision = Decision::Reject;
    std::string reason;
    Transcript transcript;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    // 0 picks an ephemeral port; see Server::port().
    std::uint16_t port = 0;
    std::chrono::milliseconds session_deadline{10'000};
    VerifierSession::Config verifier;
    // Connection i draws its challenges from SeededRandom::derive(seed, i).
    std::uint64_t seed = 0;
};

/**
 * Verifier endpoint: one VerifierSession per connection, each on its own
 * thread. The decision is sent to the peer as the final ACCEPT/REJECT frame
 * and appended to the session log.
 */
class Server {
public:
    explicit Server(ServerOptions opts);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    // Serves until `max_sessions` connections have completed (0: until stop()).
    void serve(std::size_t max_sessions = 0);
    void stop() noexcept { stopping_ = true; }

    std::vector<SessionLogEntry> log() const;

private:
    void handle(Connection conn, std::uint64_t index);

    ServerOptions opts_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    mutable std::mutex log_mutex_;
    std::vector<SessionLogEntry> log_;
};

struct ClientResult {
    Decision decision = Decision::Reject;
    std::string reason;
    // Prover-side transcript.
    Transcript transcript;
};

// Runs `prover` against a server. Connection loss rejects locally.
ClientResult run_client(const std::string& host, std::uint16_t port, ProverSession& prover, RandomSource& rng,
                        std::chrono::milliseconds deadline = std::chrono::milliseconds{10'000});

// "host:port" split; throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace ncauth
