#include "ncauth/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ncauth/auth_dh.hpp"
#include "ncauth/auth_fs.hpp"
#include "ncauth/exhaustive.hpp"

namespace ncauth {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int precision = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << x;
    return ss.str();
}

// Seed of the independent stream for one component of an experiment.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t component) {
    return SeededRandom::derive(seed, component).uniform(0, UINT64_MAX);
}

std::string describe(const SystemParams& p) {
    return "d=" + std::to_string(p.ring.dimension()) + " q=" + std::to_string(p.ring.modulus()) +
           " m=" + std::to_string(p.left_exponent) + " n=" + std::to_string(p.right_exponent) +
           " D=" + std::to_string(p.sampler.max_degree) + " C=" + std::to_string(p.sampler.max_coefficient);
}

std::string as_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

}  // namespace

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ExperimentReport::to_text() const {
    std::ostringstream out;
    out << "experiment " << name << "\n";
    for (const auto& [k, v] : parameters) out << "  param " << k << " = " << v << "\n";
    for (const auto& [k, v] : statistics) out << "  stat  " << k << " = " << v << "\n";
    for (const auto& c : checks) {
        out << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << ": observed " << c.observed << ", expected "
            << c.expected << "\n";
    }
    out << "verdict " << (passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    for (const auto& [k, v] : parameters) j["parameters." + k] = v;
    for (const auto& [k, v] : statistics) j["statistics." + k] = v;
    for (const auto& c : checks) {
        j["check." + c.name + ".observed"] = c.observed;
        j["check." + c.name + ".expected"] = c.expected;
        j["check." + c.name + ".pass"] = c.pass;
    }
    j["verdict"] = passed() ? "PASS" : "FAIL";
    return j.dump(2) + "\n";
}

BinomialBand binomial_band(std::uint64_t trials, double p, double sigmas) {
    const double n = static_cast<double>(trials);
    const double mean = n * p;
    const double sd = std::sqrt(n * p * (1.0 - p));
    return BinomialBand{mean, std::max(0.0, mean - sigmas * sd), mean + sigmas * sd};
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::uint64_t parallel_count(std::uint64_t n, unsigned workers, const std::function<bool(std::uint64_t)>& pred) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2) {
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n; ++i) count += pred(i) ? 1 : 0;
        return count;
    }
    std::atomic<std::uint64_t> total{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    std::uint64_t local = 0;
                    for (std::uint64_t i = begin; i < end; ++i) local += pred(i) ? 1 : 0;
                    total += local;
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return total;
}

ExperimentReport run_completeness(const CompletenessOptions& opts) {
    opts.params.validate();
    ExperimentReport r;
    r.name = "completeness";
    r.parameters = {{"params", describe(opts.params)},
                    {"dh_trials", std::to_string(opts.dh_trials)},
                    {"fs_sessions", std::to_string(opts.fs_sessions)},
                    {"seed", std::to_string(opts.seed)}};

    auto t0 = Clock::now();
    const auto dh_seed = stream_seed(opts.seed, 0);
    std::atomic<std::uint64_t> preimage_equal{0};
    const auto dh_accepted = parallel_count(opts.dh_trials, opts.workers, [&](std::uint64_t i) {
        auto rng = SeededRandom::derive(dh_seed, i);
        const auto kp = dh_keygen(opts.params, rng);
        auto [state, challenge] = dh_make_challenge(opts.params, kp.public_key, rng);
        if (dh_prover_preimage(kp, challenge.u) ==
            dh_verifier_preimage(opts.params, kp.public_key, state.challenge_poly)) {
            ++preimage_equal;
        }
        return dh_verify(state, dh_respond(kp, challenge));
    });
    r.statistics.emplace_back("timing.dh_seconds", fmt(seconds_since(t0)));
    r.checks.push_back({"dh_accept", std::to_string(dh_accepted), std::to_string(opts.dh_trials),
                        dh_accepted == opts.dh_trials});
    r.checks.push_back({"dh_preimage_equal", std::to_string(preimage_equal.load()), std::to_string(opts.dh_trials),
                        preimage_equal == opts.dh_trials});

    for (std::size_t j = 0; j < opts.fs_rounds.size(); ++j) {
        const auto k = opts.fs_rounds[j];
        const auto fs_seed = stream_seed(opts.seed, 1 + j);
        t0 = Clock::now();
        const auto accepted = parallel_count(opts.fs_sessions, opts.workers, [&](std::uint64_t i) {
            auto rng = SeededRandom::derive(fs_seed, i);
            const auto kp = generate_keypair(opts.params, rng);
            FsSessionConfig cfg;
            cfg.rounds = k;
            return fs_run_session(kp, kp.public_key, cfg, rng).accepted;
        });
        const auto key = "fs_k" + std::to_string(k);
        r.statistics.emplace_back("timing." + key + "_seconds", fmt(seconds_since(t0)));
        r.checks.push_back(
            {key + "_accept", std::to_string(accepted), std::to_string(opts.fs_sessions), accepted == opts.fs_sessions});
    }
    return r;
}

ExperimentReport run_soundness(const SoundnessOptions& opts) {
    opts.params.validate();
    ExperimentReport r;
    r.name = "soundness";
    r.parameters = {{"params", describe(opts.params)},
                    {"trials", std::to_string(opts.trials)},
                    {"sigmas", fmt(opts.sigmas, 2)},
                    {"seed", std::to_string(opts.seed)}};

    for (std::size_t j = 0; j < opts.rounds.size(); ++j) {
        const auto k = opts.rounds[j];
        const auto seed = stream_seed(opts.seed, j);
        const auto t0 = Clock::now();
        const auto accepted = parallel_count(opts.trials, opts.workers, [&](std::uint64_t i) {
            auto rng = SeededRandom::derive(seed, i);
            const auto kp = generate_keypair(opts.params, rng);
            CheatingFsProver cheater(opts.params, kp.public_key);
            FsSessionConfig cfg;
            cfg.rounds = k;
            return fs_run_session(cheater, opts.params, kp.public_key, cfg, rng).accepted;
        });
        const double p = std::ldexp(1.0, -static_cast<int>(k));
        const auto band = binomial_band(opts.trials, p, opts.sigmas);
        const auto key = "k" + std::to_string(k);
        r.statistics.emplace_back(key + ".accepted", std::to_string(accepted));
        r.statistics.emplace_back(key + ".rate", fmt(static_cast<double>(accepted) / opts.trials, 6));
        r.statistics.emplace_back("timing." + key + "_seconds", fmt(seconds_since(t0)));
        r.checks.push_back({key + "_accept_count", std::to_string(accepted),
                            "[" + fmt(band.low, 1) + ", " + fmt(band.high, 1) + "] around " + fmt(band.expected, 1),
                            band.contains(accepted)});
    }
    return r;
}

SystemParams ZkOptions::tiny_params() {
    SystemParams p;
    p.ring = RingDescriptor(2, 2);
    p.left_exponent = 1;
    p.right_exponent = 1;
    p.sampler.max_degree = 1;
    p.sampler.max_coefficient = 1;
    return p;
}

namespace {

// Every (base, middle, f) over the tiny ring with f(base) != 0, f ranging
// over all polynomials the sampler can produce.
template <typename Fn>
void for_each_tiny_key(const SystemParams& tiny, Fn&& fn) {
    if (tiny.sampler.max_degree > 3) {
        throw std::invalid_argument("exhaustive comparison needs max degree <= 3");
    }
    const auto& ring = tiny.ring;
    const std::uint64_t q = ring.modulus();
    const std::size_t cells = ring.entry_count();
    std::uint64_t elements = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (elements > (1u << 16) / q) throw std::invalid_argument("ring too large to enumerate");
        elements *= q;
    }
    auto element_at = [&](std::uint64_t index) {
        std::vector<std::uint64_t> entries(cells);
        for (auto& e : entries) {
            e = index % q;
            index /= q;
        }
        return RingElement::from_entries(ring, std::span<const std::uint64_t>(entries));
    };
    // Polynomials reachable by the sampler: degree >= 1, non-zero leading term.
    std::vector<IntPolynomial> privates;
    PolynomialEnumerator all(tiny.sampler.max_degree, tiny.sampler.max_coefficient);
    for (std::uint64_t i = 0; i < all.size(); ++i) {
        auto f = all.at(i);
        if (!f.is_zero() && f.degree() >= 1) privates.push_back(std::move(f));
    }
    for (std::uint64_t b = 0; b < elements; ++b) {
        const auto base = element_at(b);
        for (std::uint64_t m = 0; m < elements; ++m) {
            const auto middle = element_at(m);
            for (const auto& f : privates) {
                if (evaluate(f, base).is_zero()) continue;
                fn(keypair_from_parts(tiny, base, middle, f));
            }
        }
    }
}

std::size_t sampler_draws(const SystemParams& p) { return 2 + p.sampler.max_degree; }

}  // namespace

ZkKeyStats dh_exhaustive_zk(const SystemParams& tiny) {
    ZkKeyStats stats;
    // One sampler pass; a redraw always needs more draws than this, so
    // surviving paths are exactly the accepted first draws.
    const auto budget = sampler_draws(tiny);
    for_each_tiny_key(tiny, [&](const KeyPair& kp) {
        ++stats.keys;
        const auto& pk = kp.public_key;
        const auto honest = normalize(enumerate_outcomes(
            [&](RandomSource& rng) {
                auto [state, challenge] = dh_make_challenge(tiny, pk, rng);
                const auto w = dh_respond(kp, challenge).w;
                return to_string(state.challenge_poly) + "|" + as_string(encode_element(challenge.u)) + "|" +
                       w.hex();
            },
            budget));
        const auto simulated = normalize(enumerate_outcomes(
            [&](RandomSource& rng) {
                auto [h, digest] = dh_hvzk_simulate(tiny, pk, rng);
                const auto u = dh_challenge_for(tiny, pk, h).second.u;
                return to_string(h) + "|" + as_string(encode_element(u)) + "|" + digest.hex();
            },
            budget));
        if (honest.empty() && simulated.empty()) {
            ++stats.degenerate;
        } else if (honest == simulated) {
            ++stats.matching;
        }
    });
    return stats;
}

ZkKeyStats fs_exhaustive_zk(const SystemParams& tiny) {
    ZkKeyStats stats;
    FsSessionConfig cfg;
    cfg.rounds = 1;
    cfg.session_id = SessionId{};
    // Honest: sampler pass + challenge bit. Simulator: bit + sampler pass +
    // verifier bit, i.e. one attempt.
    const auto honest_budget = sampler_draws(tiny) + 1;
    const auto sim_budget = sampler_draws(tiny) + 2;
    for_each_tiny_key(tiny, [&](const KeyPair& kp) {
        ++stats.keys;
        const auto honest = normalize(enumerate_outcomes(
            [&](RandomSource& rng) {
                return as_string(encode_transcript(fs_run_session(kp, kp.public_key, cfg, rng).transcript));
            },
            honest_budget));
        const auto simulated = normalize(enumerate_outcomes(
            [&](RandomSource& rng) {
                return as_string(encode_transcript(fs_zk_simulate(tiny, kp.public_key, cfg, rng).transcript));
            },
            sim_budget));
        if (honest.empty() && simulated.empty()) {
            ++stats.degenerate;
        } else if (honest == simulated) {
            ++stats.matching;
        }
    });
    return stats;
}

ExperimentReport run_zk(const ZkOptions& opts) {
    opts.tiny.validate();
    opts.params.validate();
    ExperimentReport r;
    r.name = "zk";
    r.parameters = {{"tiny_params", describe(opts.tiny)},
                    {"params", describe(opts.params)},
                    {"retry_rounds", std::to_string(opts.retry_rounds)},
                    {"seed", std::to_string(opts.seed)}};

    auto add_exhaustive = [&](const std::string& scheme, const ZkKeyStats& s) {
        r.statistics.emplace_back(scheme + ".keys", std::to_string(s.keys));
        r.statistics.emplace_back(scheme + ".degenerate_keys", std::to_string(s.degenerate));
        r.checks.push_back({scheme + "_exact_match", std::to_string(s.matching) + " keys",
                            std::to_string(s.keys - s.degenerate) + " keys", s.matching == s.keys - s.degenerate});
    };
    auto t0 = Clock::now();
    add_exhaustive("dh", dh_exhaustive_zk(opts.tiny));
    r.statistics.emplace_back("timing.dh_seconds", fmt(seconds_since(t0)));
    t0 = Clock::now();
    add_exhaustive("fs", fs_exhaustive_zk(opts.tiny));
    r.statistics.emplace_back("timing.fs_seconds", fmt(seconds_since(t0)));

    t0 = Clock::now();
    SeededRandom rng(stream_seed(opts.seed, 0));
    const auto kp = generate_keypair(opts.params, rng);
    FsSessionConfig cfg;
    cfg.rounds = opts.retry_rounds;
    const auto sim = fs_zk_simulate(opts.params, kp.public_key, cfg, rng);
    std::uint64_t attempts = 0;
    for (auto a : sim.attempts_per_round) attempts += a;
    const double mean = static_cast<double>(attempts) / static_cast<double>(sim.attempts_per_round.size());
    r.statistics.emplace_back("timing.retry_seconds", fmt(seconds_since(t0)));
    r.checks.push_back({"retry_mean", fmt(mean), "[" + fmt(opts.retry_low, 2) + ", " + fmt(opts.retry_high, 2) + "]",
                        mean >= opts.retry_low && mean <= opts.retry_high});
    return r;
}

bool psd_witness_exists_naive(const PsdInstance& inst, std::uint32_t max_degree, std::uint64_t max_coefficient) {
    const auto& ring = inst.base.descriptor();
    std::vector<RingElement> powers{RingElement::identity(ring)};
    for (std::uint32_t i = 1; i <= max_degree; ++i) powers.push_back(powers.back() * inst.base);

    std::vector<std::uint64_t> coeffs(max_degree + 1, 0);
    while (true) {
        auto z = RingElement::zero(ring);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            for (std::uint64_t c = 0; c < coeffs[i]; ++c) z = z + powers[i];
        }
        auto lhs = RingElement::identity(ring);
        for (std::uint32_t i = 0; i < inst.left_exponent; ++i) lhs = lhs * z;
        lhs = lhs * inst.middle;
        for (std::uint32_t i = 0; i < inst.right_exponent; ++i) lhs = lhs * z;
        if (lhs == inst.target) return true;

        std::size_t pos = 0;
        while (pos < coeffs.size() && coeffs[pos] == max_coefficient) coeffs[pos++] = 0;
        if (pos == coeffs.size()) return false;
        ++coeffs[pos];
    }
}

PsdInstance generate_off_instance(const PsdOptions& opts, RandomSource& rng) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = opts.max_degree;
    cfg.max_coefficient = opts.max_coefficient;
    const auto one = RingElement::identity(opts.ring);
    while (true) {
        auto inst =
            generate_planted_instance(opts.ring, opts.left_exponent, opts.right_exponent, cfg, rng).first;
        for (std::uint64_t shift = 1; shift < opts.ring.modulus(); ++shift) {
            inst.target = inst.target + one;
            if (!psd_witness_exists_naive(inst, opts.max_degree, opts.max_coefficient)) return inst;
        }
    }
}

ExperimentReport run_psd(const PsdOptions& opts) {
    ExperimentReport r;
    r.name = "psd";
    r.parameters = {{"ring", "d=" + std::to_string(opts.ring.dimension()) + " q=" + std::to_string(opts.ring.modulus())},
                    {"exponents", std::to_string(opts.left_exponent) + "," + std::to_string(opts.right_exponent)},
                    {"bounds", "D=" + std::to_string(opts.max_degree) + " C=" + std::to_string(opts.max_coefficient)},
                    {"planted", std::to_string(opts.planted)},
                    {"off_instances", std::to_string(opts.off_instances)},
                    {"seed", std::to_string(opts.seed)}};

    PsdSearchOptions search;
    search.max_degree = opts.max_degree;
    search.max_coefficient = opts.max_coefficient;
    search.workers = opts.workers;
    PolynomialSamplerConfig cfg;
    cfg.max_degree = opts.max_degree;
    cfg.max_coefficient = opts.max_coefficient;

    auto t0 = Clock::now();
    const auto planted_seed = stream_seed(opts.seed, 0);
    std::uint64_t solved = 0;
    for (std::uint32_t i = 0; i < opts.planted; ++i) {
        auto rng = SeededRandom::derive(planted_seed, i);
        const auto inst =
            generate_planted_instance(opts.ring, opts.left_exponent, opts.right_exponent, cfg, rng).first;
        const auto sol = brute_force_psd(inst, search);
        if (sol && evaluate(sol->witness_poly, inst.base) == sol->witness_element &&
            check_decomposition(inst, sol->witness_element)) {
            ++solved;
        }
    }
    r.statistics.emplace_back("timing.planted_seconds", fmt(seconds_since(t0)));
    r.checks.push_back(
        {"planted_solved", std::to_string(solved), std::to_string(opts.planted), solved == opts.planted});

    t0 = Clock::now();
    const auto off_seed = stream_seed(opts.seed, 1);
    std::uint64_t unsolvable = 0;
    for (std::uint32_t i = 0; i < opts.off_instances; ++i) {
        auto rng = SeededRandom::derive(off_seed, i);
        const auto inst = generate_off_instance(opts, rng);
        if (!brute_force_psd(inst, search)) ++unsolvable;
    }
    r.statistics.emplace_back("timing.off_seconds", fmt(seconds_since(t0)));
    r.checks.push_back({"off_unsolvable", std::to_string(unsolvable), std::to_string(opts.off_instances),
                        unsolvable == opts.off_instances});
    return r;
}

}  // namespace ncauth
