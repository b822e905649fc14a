#include <gtest/gtest.h>

#include <thread>

#include "ncauth/transport.hpp"

using namespace ncauth;

namespace {

KeyPair key(std::uint64_t seed) {
    SeededRandom rng(seed);
    return generate_keypair(SystemParams::protocol_defaults(), rng);
}

ServerOptions options(const KeyPair& kp, std::uint64_t seed) {
    ServerOptions opts;
    opts.seed = seed;
    opts.session_deadline = std::chrono::milliseconds(5000);
    opts.verifier.pinned_params = kp.params;
    opts.verifier.pinned_key = kp.public_key;
    return opts;
}

}  // namespace

TEST(Transport, ParseEndpoint) {
    EXPECT_EQ(parse_endpoint("127.0.0.1:8080"), (std::pair<std::string, std::uint16_t>{"127.0.0.1", 8080}));
    EXPECT_THROW(parse_endpoint("localhost"), std::invalid_argument);
    EXPECT_THROW(parse_endpoint("host:99999"), std::invalid_argument);
    EXPECT_THROW(parse_endpoint("host:abc"), std::invalid_argument);
}

TEST(Transport, LoopbackDhAndFs) {
    const auto kp = key(1);
    Server server(options(kp, 2));
    std::jthread serving([&] { server.serve(2); });

    SeededRandom rng(3);
    ProverSession dh({Scheme::Dh, 1, std::nullopt}, kp);
    const auto r1 = run_client("127.0.0.1", server.port(), dh, rng);
    EXPECT_EQ(r1.decision, Decision::Accept) << r1.reason;

    ProverSession fs({Scheme::Fs, 8, std::nullopt}, kp);
    const auto r2 = run_client("127.0.0.1", server.port(), fs, rng);
    EXPECT_EQ(r2.decision, Decision::Accept) << r2.reason;
    serving.join();

    const auto log = server.log();
    ASSERT_EQ(log.size(), 2u);
    for (const auto& e : log) {
        EXPECT_EQ(e.decision, Decision::Accept);
        EXPECT_EQ(replay_decision(e.transcript), true);
    }
}

TEST(Transport, MalformedFirstFrameGetsReject) {
    const auto kp = key(4);
    Server server(options(kp, 5));
    std::jthread serving([&] { server.serve(1); });

    auto conn = Connection::connect_to("127.0.0.1", server.port());
    conn.set_deadline(std::chrono::milliseconds(5000));
    Bytes junk(40, 0x55);
    conn.send_raw(junk);
    const auto reply = conn.receive_frame();
    ASSERT_TRUE(reply.has_value());
    EXPECT_EQ(reply->type, MsgType::Reject);
    serving.join();
    const auto log = server.log();
    ASSERT_EQ(log.size(), 1u);
    EXPECT_EQ(log[0].decision, Decision::Reject);
}

TEST(Transport, PeerHangupRejects) {
    const auto kp = key(6);
    Server server(options(kp, 7));
    std::jthread serving([&] { server.serve(1); });
    {
        auto conn = Connection::connect_to("127.0.0.1", server.port());
        ProverSession fs({Scheme::Fs, 3, std::nullopt}, kp);
        SeededRandom rng(8);
        for (const auto& f : fs.start(rng)) conn.send_frame(f);
    }
    serving.join();
    const auto log = server.log();
    ASSERT_EQ(log.size(), 1u);
    EXPECT_EQ(log[0].decision, Decision::Reject);
}

TEST(Transport, ConnectFailureIsReported) {
    std::uint16_t port;
    {
        Server probe(ServerOptions{});
        port = probe.port();
    }
    EXPECT_THROW(Connection::connect_to("127.0.0.1", port), TransportError);
}
