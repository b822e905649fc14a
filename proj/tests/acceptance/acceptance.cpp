// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "ncauth/lab.hpp"
#include "ncauth/session.hpp"
#include "ncauth/transport.hpp"

using namespace ncauth;
using Clock = std::chrono::steady_clock;

namespace {

// Wall-clock limits, seconds.
constexpr double kAlgebraLimit = 5.0;
constexpr double kDhCompletenessLimit = 10.0;
constexpr double kFsCompletenessLimit = 10.0;
constexpr double kSoundnessLimit = 60.0;
constexpr double kZkLimit = 30.0;
constexpr double kPsdLimit = 30.0;
constexpr double kTcpLimit = 60.0;

constexpr int kAlgebraCases = 1000;
constexpr int kFrameRoundTrips = 10'000;
constexpr int kReplaySessions = 100;
constexpr int kTcpCheatConnections = 1000;
constexpr std::uint16_t kTcpRounds = 8;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kSeed = 20261015;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit <= 0 || secs < limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << "; "
         << std::fixed;
    line.precision(2);
    line << secs << " s";
    if (limit > 0) line << " (limit " << limit << " s" << (in_time ? "" : ", exceeded") << ")";
    std::cout << line.str() << std::endl;
}

std::string check_summary(const ExperimentReport& r) {
    std::string s;
    for (const auto& c : r.checks) {
        if (!s.empty()) s += ", ";
        s += c.name + " " + c.observed + " (want " + c.expected + ")";
    }
    return s;
}

// Schoolbook product, independent of the library's multiplication.
RingElement oracle_mul(const RingElement& a, const RingElement& b) {
    const auto& desc = a.descriptor();
    const std::size_t d = desc.dimension();
    const std::uint64_t q = desc.modulus();
    std::vector<std::uint64_t> c(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) c[i * d + j] = (c[i * d + j] + std::uint64_t{a.at(i, k)} * b.at(k, j)) % q;
    return RingElement::from_entries(desc, std::span<const std::uint64_t>(c));
}

Outcome algebra_suite() {
    const std::array<RingDescriptor, 9> descs{RingDescriptor(2, 2), RingDescriptor(2, 3), RingDescriptor(2, 4),
                                              RingDescriptor(2, 5), RingDescriptor(3, 2), RingDescriptor(3, 3),
                                              RingDescriptor(3, 4), RingDescriptor(3, 5),
                                              SystemParams::protocol_defaults().ring};
    SeededRandom rng(kSeed);
    int scaled = 0, commute = 0, axioms = 0;
    for (int i = 0; i < kAlgebraCases; ++i) {
        const auto& desc = descs[i % descs.size()];
        const auto q = desc.modulus();

        // (a)r^m (b)r^n = (ab)r^(m+n) = (b)r^n (a)r^m
        const auto r = random_element(desc, rng);
        const auto a = rng.uniform(0, 1u << 20), b = rng.uniform(0, 1u << 20);
        const auto m = rng.uniform(0, 10), n = rng.uniform(0, 10);
        const auto lhs = oracle_mul(scale(a, pow(r, m)), scale(b, pow(r, n)));
        const auto ab = (a % q) * (b % q) % q;
        scaled += lhs == scale(ab, pow(r, m + n)) && lhs == oracle_mul(scale(b, pow(r, n)), scale(a, pow(r, m)));

        // f(r) h(r) = h(r) f(r)
        auto poly = [&] {
            std::vector<std::uint64_t> c(rng.uniform(1, 6));
            for (auto& x : c) x = rng.uniform(0, 1u << 16);
            return IntPolynomial(c);
        };
        const auto f = poly(), h = poly();
        const auto fr = evaluate(f, r), hr = evaluate(h, r);
        commute += check_commutes(f, h, r) && oracle_mul(fr, hr) == oracle_mul(hr, fr);

        const auto x = random_element(desc, rng), y = random_element(desc, rng), z = random_element(desc, rng);
        const auto zero = RingElement::zero(desc), one = RingElement::identity(desc);
        axioms += (x + y) + z == x + (y + z) && x + y == y + x && x + zero == x && x + scale(q - 1, x) == zero &&
                  x * y == oracle_mul(x, y) && (x * y) * z == x * (y * z) && x * one == x && one * x == x &&
                  x * (y + z) == x * y + x * z && (x + y) * z == x * z + y * z;
    }
    const bool pass = scaled == kAlgebraCases && commute == kAlgebraCases && axioms == kAlgebraCases;
    return {pass, "scaled-power identity " + std::to_string(scaled) + "/" + std::to_string(kAlgebraCases) +
                      ", polynomial commutativity " + std::to_string(commute) + "/" + std::to_string(kAlgebraCases) +
                      ", ring axioms " + std::to_string(axioms) + "/" + std::to_string(kAlgebraCases)};
}

Outcome dh_completeness() {
    CompletenessOptions o;
    o.dh_trials = 1000;
    o.fs_rounds = {};
    o.seed = kSeed;
    const auto r = run_completeness(o);
    return {r.passed(), check_summary(r)};
}

Outcome fs_completeness() {
    CompletenessOptions o;
    o.dh_trials = 0;
    o.fs_rounds = {1, 5, 10, 20};
    o.fs_sessions = 100;
    o.seed = kSeed;
    const auto r = run_completeness(o);
    // dh checks are vacuous at zero trials; keep only the FS ones.
    ExperimentReport fs_only = r;
    std::erase_if(fs_only.checks, [](const Check& c) { return c.name.rfind("dh_", 0) == 0; });
    return {fs_only.passed(), check_summary(fs_only)};
}

Outcome fs_soundness() {
    SoundnessOptions o;
    o.rounds = {1, 5, 10};
    o.trials = 100'000;
    o.sigmas = kSigmas;
    o.seed = kSeed;
    const auto r = run_soundness(o);
    return {r.passed(), check_summary(r)};
}

Outcome zero_knowledge() {
    ZkOptions o;
    o.seed = kSeed;
    o.retry_rounds = 10'000;
    const auto r = run_zk(o);
    return {r.passed(), check_summary(r)};
}

Outcome psd_oracle() {
    PsdOptions o;
    o.seed = kSeed;
    o.planted = 100;
    o.off_instances = 100;
    const auto r = run_psd(o);
    return {r.passed(), check_summary(r)};
}

Outcome wire_and_transcripts() {
    SeededRandom rng(kSeed);
    int frame_ok = 0;
    for (int i = 0; i < kFrameRoundTrips; ++i) {
        Frame f;
        f.type = static_cast<MsgType>(std::array<std::uint8_t, 8>{0x00, 0x01, 0x02, 0x10, 0x11, 0x12, 0x7E, 0x7F}
                                          [rng.uniform(0, 7)]);
        for (auto& b : f.session_id) b = static_cast<std::uint8_t>(rng.uniform(0, 255));
        f.round_index = static_cast<std::uint16_t>(rng.uniform(0, 65535));
        f.payload.resize(rng.uniform(0, 512));
        for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng.uniform(0, 255));
        frame_ok += decode_frame(encode_frame(f)) == f;
    }

    const auto dir = std::filesystem::temp_directory_path() / ("ncauth_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    int replay_ok = 0, privacy_ok = 0;
    for (int i = 0; i < kReplaySessions; ++i) {
        auto key_rng = SeededRandom::derive(kSeed, 1000 + i);
        const auto kp = generate_keypair(SystemParams::protocol_defaults(), key_rng);
        const auto scheme = i % 2 == 0 ? Scheme::Dh : Scheme::Fs;
        auto run = [&] {
            ProverSession prover({scheme, 5, std::nullopt}, kp);
            VerifierSession verifier;
            auto prng = SeededRandom::derive(kSeed, 2 * i);
            auto vrng = SeededRandom::derive(kSeed, 2 * i + 1);
            return run_in_process(prover, verifier, prng, vrng);
        };
        const auto first = run();
        const auto path = (dir / ("s" + std::to_string(i) + ".ncrt")).string();
        write_transcript(path, first.transcript);
        const auto loaded = read_transcript(path);
        const auto second = run();
        replay_ok += loaded == first.transcript && encode_transcript(second.transcript) == encode_transcript(loaded) &&
                     loaded.recorded_decision() == true && replay_decision(loaded) == true;

        const auto fp = encode_element(kp.private_element);
        const Bytes secret(fp.begin() + 10, fp.end());
        bool clean = true;
        for (const auto& e : first.transcript.entries) {
            const auto bytes = encode_frame(e.frame);
            clean = clean && std::search(bytes.begin(), bytes.end(), secret.begin(), secret.end()) == bytes.end();
        }
        privacy_ok += clean;
    }
    std::filesystem::remove_all(dir);
    const bool pass = frame_ok == kFrameRoundTrips && replay_ok == kReplaySessions && privacy_ok == kReplaySessions;
    return {pass, "frame round-trips " + std::to_string(frame_ok) + "/" + std::to_string(kFrameRoundTrips) +
                      ", replay " + std::to_string(replay_ok) + "/" + std::to_string(kReplaySessions) +
                      ", privacy scan " + std::to_string(privacy_ok) + "/" + std::to_string(kReplaySessions)};
}

Outcome tcp_end_to_end() {
    SeededRandom key_rng(kSeed);
    const auto kp = generate_keypair(SystemParams::protocol_defaults(), key_rng);

    ServerOptions opts;
    opts.seed = kSeed;
    opts.verifier.pinned_params = kp.params;
    opts.verifier.pinned_key = kp.public_key;
    Server honest_server(opts);
    std::jthread honest_thread([&] { honest_server.serve(2); });
    SeededRandom rng(kSeed + 1);
    ProverSession dh({Scheme::Dh, 1, std::nullopt}, kp);
    const bool dh_ok = run_client("127.0.0.1", honest_server.port(), dh, rng).decision == Decision::Accept;
    ProverSession fs({Scheme::Fs, kTcpRounds, std::nullopt}, kp);
    const bool fs_ok = run_client("127.0.0.1", honest_server.port(), fs, rng).decision == Decision::Accept;
    honest_thread.join();

    opts.verifier.scheme = Scheme::Fs;
    opts.verifier.rounds = kTcpRounds;
    Server cheat_server(opts);
    std::jthread cheat_thread([&] { cheat_server.serve(kTcpCheatConnections); });
    std::uint64_t client_accepts = 0;
    for (int i = 0; i < kTcpCheatConnections; ++i) {
        auto crng = SeededRandom::derive(kSeed + 2, i);
        ProverSession cheat({Scheme::Fs, kTcpRounds, std::nullopt}, kp.params, kp.public_key,
                            std::make_unique<CheatingFsProver>(kp.params, kp.public_key));
        client_accepts += run_client("127.0.0.1", cheat_server.port(), cheat, crng).decision == Decision::Accept;
    }
    cheat_thread.join();
    std::uint64_t server_accepts = 0;
    const auto log = cheat_server.log();
    for (const auto& e : log) server_accepts += e.decision == Decision::Accept;

    const auto band = binomial_band(kTcpCheatConnections, std::ldexp(1.0, -kTcpRounds), kSigmas);
    const bool pass = dh_ok && fs_ok && log.size() == static_cast<std::size_t>(kTcpCheatConnections) &&
                      server_accepts == client_accepts && band.contains(server_accepts);
    std::ostringstream d;
    d.precision(2);
    d << std::fixed << "honest dh " << (dh_ok ? "ACCEPT" : "REJECT") << ", honest fs k=" << kTcpRounds << " "
      << (fs_ok ? "ACCEPT" : "REJECT") << ", cheater accepted " << server_accepts << "/" << log.size()
      << " (want [" << band.low << ", " << band.high << "])";
    return {pass, d.str()};
}

}  // namespace

int main() {
    criterion(1, "algebra", kAlgebraLimit, algebra_suite);
    criterion(2, "dh-completeness", kDhCompletenessLimit, dh_completeness);
    criterion(3, "fs-completeness", kFsCompletenessLimit, fs_completeness);
    criterion(4, "fs-soundness", kSoundnessLimit, fs_soundness);
    criterion(5, "zero-knowledge", kZkLimit, zero_knowledge);
    criterion(6, "psd-oracle", kPsdLimit, psd_oracle);
    criterion(7, "wire-transcripts", 0, wire_and_transcripts);
    criterion(8, "tcp-end-to-end", kTcpLimit, tcp_end_to_end);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
