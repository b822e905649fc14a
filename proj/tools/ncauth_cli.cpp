#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ncauth/keyfile.hpp"
#include "ncauth/lab.hpp"
#include "ncauth/psd.hpp"
#include "ncauth/session.hpp"
#include "ncauth/transport.hpp"

using namespace ncauth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

struct KeygenArgs {
    std::uint32_t dim = 3;
    std::uint64_t modulus = 2147483647;
    std::uint32_t m = 3;
    std::uint32_t n = 5;
    std::uint32_t max_deg = 5;
    std::uint64_t max_coeff = 1u << 16;
    std::uint64_t seed = 0;
    std::string out;
};

SystemParams params_from(const KeygenArgs& a) {
    if (!is_prime(a.modulus)) throw UsageError("--modulus must be prime, got " + std::to_string(a.modulus));
    SystemParams p;
    try {
        p.ring = RingDescriptor(a.dim, a.modulus);
        p.left_exponent = a.m;
        p.right_exponent = a.n;
        p.sampler.max_degree = a.max_deg;
        p.sampler.max_coefficient = a.max_coeff;
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return p;
}

int cmd_keygen(const KeygenArgs& a) {
    const auto params = params_from(a);
    SeededRandom rng(a.seed);
    const auto kp = generate_keypair(params, rng);
    save_keypair(a.out, kp);
    std::cout << "fingerprint " << fingerprint(kp.public_key).hex() << "\n";
    return kExitOk;
}

struct RunArgs {
    std::string scheme = "dh";
    std::uint16_t rounds = 20;
    std::string key;
    std::string listen;
    std::string connect;
    std::size_t sessions = 1;
    std::string cheat;
    std::uint64_t repeat = 1;
    std::string transcript;
    std::uint64_t seed = 0;
};

Scheme scheme_from(const std::string& s) { return s == "fs" ? Scheme::Fs : Scheme::Dh; }

std::unique_ptr<ProverSession> make_prover(const RunArgs& a, const KeyPair& kp, Scheme scheme) {
    ProverSession::Config cfg{scheme, scheme == Scheme::Fs ? a.rounds : std::uint16_t{1}, std::nullopt};
    if (!a.cheat.empty()) {
        return std::make_unique<ProverSession>(
            cfg, kp.params, kp.public_key, std::make_unique<CheatingFsProver>(kp.params, kp.public_key));
    }
    return std::make_unique<ProverSession>(cfg, kp);
}

VerifierSession::Config verifier_config(const RunArgs& a, const SystemParams& params, const PublicKey& pk) {
    VerifierSession::Config cfg;
    cfg.scheme = scheme_from(a.scheme);
    if (cfg.scheme == Scheme::Fs) cfg.rounds = a.rounds;
    cfg.pinned_params = params;
    cfg.pinned_key = pk;
    return cfg;
}

int report_runs(std::uint64_t accepted, std::uint64_t total) {
    if (total == 1) {
        std::cout << (accepted ? "ACCEPT" : "REJECT") << "\n";
    } else {
        std::cout << "accepted " << accepted << "/" << total << " rate "
                  << static_cast<double>(accepted) / static_cast<double>(total) << "\n";
    }
    return accepted == total ? kExitOk : kExitFail;
}

int cmd_run(const RunArgs& a) {
    if (!a.cheat.empty() && a.scheme != "fs") throw UsageError("--cheat needs --scheme fs");
    if (a.rounds < 1) throw UsageError("--rounds must be >= 1");
    const auto scheme = scheme_from(a.scheme);

    if (!a.listen.empty()) {
        const auto [params, pk] = load_public_key(a.key);
        auto [host, port] = parse_endpoint(a.listen);
        ServerOptions opts;
        opts.host = host;
        opts.port = port;
        opts.seed = a.seed;
        opts.verifier = verifier_config(a, params, pk);
        Server server(opts);
        std::cout << "listening " << host << ":" << server.port() << std::endl;
        server.serve(a.sessions);
        std::uint64_t accepted = 0;
        const auto log = server.log();
        for (const auto& e : log) {
            accepted += e.decision == Decision::Accept;
            std::cout << "session " << e.connection_index << " " << to_string(e.decision)
                      << (e.reason.empty() ? "" : " (" + e.reason + ")") << "\n";
        }
        if (!a.transcript.empty() && !log.empty()) write_transcript(a.transcript, log.back().transcript);
        return report_runs(accepted, log.size());
    }

    const auto kp = load_keypair(a.key);
    std::uint64_t accepted = 0;
    std::optional<Transcript> last;
    for (std::uint64_t i = 0; i < a.repeat; ++i) {
        auto prng = SeededRandom::derive(a.seed, 2 * i);
        auto prover = make_prover(a, kp, scheme);
        if (!a.connect.empty()) {
            auto [host, port] = parse_endpoint(a.connect);
            auto result = run_client(host, port, *prover, prng);
            accepted += result.decision == Decision::Accept;
            if (a.repeat == 1 && result.decision == Decision::Reject && !result.reason.empty()) {
                std::cout << "reason: " << result.reason << "\n";
            }
            last = std::move(result.transcript);
        } else {
            auto vrng = SeededRandom::derive(a.seed, 2 * i + 1);
            VerifierSession verifier(verifier_config(a, kp.params, kp.public_key));
            auto run = run_in_process(*prover, verifier, prng, vrng);
            accepted += run.verifier_decision == Decision::Accept;
            if (a.repeat == 1 && run.verifier_decision == Decision::Reject) {
                std::cout << "reason: " << verifier.reason() << "\n";
            }
            last = std::move(run.transcript);
        }
    }
    if (!a.transcript.empty() && last) write_transcript(a.transcript, *last);
    return report_runs(accepted, a.repeat);
}

int cmd_replay(const std::string& path) {
    const auto t = read_transcript(path);
    const auto hello = t.hello();
    std::cout << "scheme " << to_string(hello.scheme) << ", rounds " << hello.rounds << ", frames "
              << t.entries.size() << "\n";
    const auto recorded = t.recorded_decision();
    const auto replayed = replay_decision(t);
    std::cout << "recorded " << (recorded ? (*recorded ? "ACCEPT" : "REJECT") : "none") << "\n";
    std::cout << "replayed " << (replayed ? (*replayed ? "ACCEPT" : "REJECT") : "unavailable (no audit record)")
              << "\n";
    if (!recorded || !replayed) return kExitFail;
    return *recorded == *replayed && *replayed ? kExitOk : kExitFail;
}

int cmd_psd(const KeygenArgs& a, bool off) {
    if (a.max_coeff > 1'000'000) throw UsageError("--max-coeff too large for brute force");
    PsdOptions opts;
    try {
        opts.ring = RingDescriptor(a.dim, a.modulus);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    opts.left_exponent = a.m;
    opts.right_exponent = a.n;
    opts.max_degree = a.max_deg;
    opts.max_coefficient = a.max_coeff;
    if (a.m < 1 || a.n < 1) throw UsageError("exponents must be >= 1");
    SeededRandom rng(a.seed);
    PsdInstance inst = off ? generate_off_instance(opts, rng)
                           : generate_planted_instance(opts.ring, a.m, a.n,
                                                       PolynomialSamplerConfig{a.max_deg, a.max_coeff, true}, rng)
                                 .first;
    PsdSearchOptions search;
    search.max_degree = a.max_deg;
    search.max_coefficient = a.max_coeff;
    search.workers = default_workers();
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = brute_force_psd(inst, search);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "base   " << to_string(inst.base) << "\n"
              << "middle " << to_string(inst.middle) << "\n"
              << "target " << to_string(inst.target) << "\n";
    if (sol) {
        std::cout << "witness g = " << to_string(sol->witness_poly) << "\n";
    } else {
        std::cout << "no witness within bounds\n";
    }
    std::cout << "search " << enumeration_count(a.max_deg, a.max_coeff) << " candidates in " << secs << " s\n";
    return sol ? kExitOk : kExitFail;
}

struct ExperimentArgs {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    std::string report;
    std::vector<std::uint16_t> rounds;
    unsigned workers = default_workers();
};

int cmd_experiment(const ExperimentArgs& a) {
    ExperimentReport r;
    if (a.name == "soundness") {
        SoundnessOptions o;
        if (a.trials) o.trials = a.trials;
        if (!a.rounds.empty()) o.rounds = a.rounds;
        o.seed = a.seed;
        o.workers = a.workers;
        r = run_soundness(o);
    } else if (a.name == "completeness") {
        CompletenessOptions o;
        if (a.trials) {
            o.dh_trials = static_cast<std::uint32_t>(a.trials);
            o.fs_sessions = static_cast<std::uint32_t>(a.trials);
        }
        if (!a.rounds.empty()) o.fs_rounds = a.rounds;
        o.seed = a.seed;
        o.workers = a.workers;
        r = run_completeness(o);
    } else if (a.name == "zk") {
        ZkOptions o;
        if (a.trials) o.retry_rounds = static_cast<std::uint16_t>(std::min<std::uint64_t>(a.trials, 65535));
        o.seed = a.seed;
        r = run_zk(o);
    } else {
        PsdOptions o;
        if (a.trials) {
            o.planted = static_cast<std::uint32_t>(a.trials);
            o.off_instances = static_cast<std::uint32_t>(a.trials);
        }
        o.seed = a.seed;
        o.workers = a.workers;
        r = run_psd(o);
    }
    std::cout << r.to_text();
    if (!a.report.empty()) {
        std::ofstream out(a.report, std::ios::trunc);
        out << r.to_json();
        if (!out) throw std::runtime_error("cannot write report " + a.report);
    }
    return r.passed() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Authentication over matrix rings: keys, sessions, experiments"};
    app.require_subcommand(1);

    KeygenArgs kg;
    auto* keygen = app.add_subcommand("keygen", "Generate a key pair file");
    auto add_ring_opts = [](CLI::App* sub, KeygenArgs& k) {
        sub->add_option("--dim", k.dim, "Matrix dimension d")->capture_default_str();
        sub->add_option("--modulus", k.modulus, "Prime modulus q < 2^31")->capture_default_str();
        sub->add_option("--m", k.m, "Left exponent")->capture_default_str();
        sub->add_option("--n", k.n, "Right exponent")->capture_default_str();
        sub->add_option("--max-deg", k.max_deg, "Polynomial degree bound D")->capture_default_str();
        sub->add_option("--max-coeff", k.max_coeff, "Coefficient bound C")->capture_default_str();
        sub->add_option("--seed", k.seed, "Random seed")->capture_default_str();
    };
    add_ring_opts(keygen, kg);
    keygen->add_option("--out", kg.out, "Key file to write")->required();

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run a session in-process or over TCP");
    run->add_option("--scheme", ra.scheme, "dh or fs")->check(CLI::IsMember({"dh", "fs"}))->capture_default_str();
    run->add_option("--rounds", ra.rounds, "FS round count k")->capture_default_str();
    run->add_option("--key", ra.key, "Key file")->required();
    auto* listen = run->add_option("--listen", ra.listen, "Serve as verifier on host:port");
    auto* connect = run->add_option("--connect", ra.connect, "Connect as prover to host:port");
    listen->excludes(connect);
    run->add_option("--sessions", ra.sessions, "Connections to serve before exiting (0: forever)")
        ->capture_default_str();
    run->add_option("--cheat", ra.cheat, "Prover strategy without the private key")->check(CLI::IsMember({"guess"}));
    run->add_option("--repeat", ra.repeat, "Number of sessions to run")->check(CLI::PositiveNumber);
    run->add_option("--transcript", ra.transcript, "Write the last transcript (.ncrt)");
    run->add_option("--seed", ra.seed, "Random seed")->capture_default_str();

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "Re-check a recorded transcript");
    replay->add_option("file", replay_path, ".ncrt transcript")->required();

    KeygenArgs pa{2, 3, 1, 1, 2, 2, 0, {}};
    bool off = false;
    auto* psd = app.add_subcommand("psd", "Brute-force a random decomposition instance");
    add_ring_opts(psd, pa);
    psd->add_flag("--off", off, "Use an instance with no witness inside the bounds");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Run a statistical experiment");
    exp->add_option("name", ea.name, "soundness | completeness | zk | psd")
        ->required()
        ->check(CLI::IsMember({"soundness", "completeness", "zk", "psd"}));
    exp->add_option("--trials", ea.trials, "Trial count (experiment default when omitted)");
    exp->add_option("--seed", ea.seed, "Random seed")->capture_default_str();
    exp->add_option("--rounds", ea.rounds, "Round counts k");
    exp->add_option("--workers", ea.workers, "Worker threads")->check(CLI::PositiveNumber);
    exp->add_option("--report", ea.report, "Write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*keygen) return cmd_keygen(kg);
        if (*run) return cmd_run(ra);
        if (*replay) return cmd_replay(replay_path);
        if (*psd) return cmd_psd(pa, off);
        if (*exp) return cmd_experiment(ea);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const KeyFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EnumerationBudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitFail;
    } catch (const SamplerExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitFail;
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\nREJECT\n";
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
