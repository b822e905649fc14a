#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncauth/keys.hpp"
#include "ncauth/psd.hpp"

namespace ncauth {

// One verdict line of a report.
struct Check {
    std::string name;
    std::string observed;
    std::string expected;
    bool pass = false;
};

/**
 * Result of one experiment. Parameters and statistics are ordered
 * key/value lists; keys starting with "timing." are wall-clock values and
 * the only fields that vary between identical runs.
 */
struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::pair<std::string, std::string>> statistics;
    std::vector<Check> checks;

    bool passed() const;
    std::string to_text() const;
    // Flat JSON object: "name", "parameters.*", "statistics.*",
    // "check.<name>.{observed,expected,pass}", "verdict".
    std::string to_json() const;
};

// Two-sided band of +-sigmas standard deviations around N*p, in counts.
struct BinomialBand {
    double expected;
    double low;
    double high;

    bool contains(std::uint64_t count) const { return count >= low && count <= high; }
};

BinomialBand binomial_band(std::uint64_t trials, double p, double sigmas);

// Counts i in [0, n) with pred(i), split over `workers` threads. The result
// does not depend on the split.
std::uint64_t parallel_count(std::uint64_t n, unsigned workers, const std::function<bool(std::uint64_t)>& pred);

unsigned default_workers();

struct CompletenessOptions {
    SystemParams params = SystemParams::protocol_defaults();
    std::uint32_t dh_trials = 1000;
    std::vector<std::uint16_t> fs_rounds{1, 5, 10, 20};
    std::uint32_t fs_sessions = 100;
    std::uint64_t seed = 1;
    unsigned workers = default_workers();
};

// Honest DH exchanges (including ring-level equality of the two pre-hash
// values) and honest FS sessions; every run must accept.
ExperimentReport run_completeness(const CompletenessOptions& opts);

struct SoundnessOptions {
    SystemParams params = SystemParams::protocol_defaults();
    std::vector<std::uint16_t> rounds{1, 5, 10};
    std::uint64_t trials = 100'000;
    double sigmas = 3.0;
    std::uint64_t seed = 1;
    unsigned workers = default_workers();
};

// Guess-the-challenge cheater; acceptance count per k must fall in the
// binomial band around trials * 2^-k.
ExperimentReport run_soundness(const SoundnessOptions& opts);

struct ZkOptions {
    // Enumerable parameters for the exact distribution comparison; the
    // sampler's max degree must be <= 3.
    SystemParams tiny = tiny_params();
    // Parameters for the simulator retry statistic.
    SystemParams params = SystemParams::protocol_defaults();
    std::uint16_t retry_rounds = 10'000;
    double retry_low = 1.9;
    double retry_high = 2.1;
    std::uint64_t seed = 1;

    // Z_2, d = 2, D = 1, C = 1, exponents (1, 1).
    static SystemParams tiny_params();
};

struct ZkKeyStats {
    std::uint64_t keys = 0;
    std::uint64_t matching = 0;
    std::uint64_t degenerate = 0;
};

// Per public key, exact honest vs simulated transcript distributions over
// every key of the tiny ring.
ZkKeyStats dh_exhaustive_zk(const SystemParams& tiny);
ZkKeyStats fs_exhaustive_zk(const SystemParams& tiny);

ExperimentReport run_zk(const ZkOptions& opts);

struct PsdOptions {
    RingDescriptor ring{2, 3};
    std::uint32_t left_exponent = 1;
    std::uint32_t right_exponent = 1;
    std::uint32_t max_degree = 2;
    std::uint64_t max_coefficient = 2;
    std::uint32_t planted = 100;
    std::uint32_t off_instances = 100;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

// Whether any g inside (D, C) solves the instance, evaluating g(base) as
// the plain sum of scaled powers. Shares no code path with brute_force_psd.
bool psd_witness_exists_naive(const PsdInstance& inst, std::uint32_t max_degree, std::uint64_t max_coefficient);

// A planted instance with target shifted by the identity until the naive
// oracle finds no witness inside (D, C). Redraws the instance if every
// shift is solvable.
PsdInstance generate_off_instance(const PsdOptions& opts, RandomSource& rng);

ExperimentReport run_psd(const PsdOptions& opts);

}  // namespace ncauth
