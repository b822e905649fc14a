#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "ncauth/bytes.hpp"
#include "ncauth/polynomial.hpp"
#include "ncauth/ring.hpp"

namespace ncauth {

/**
 * Polynomial symmetrical decomposition instance: find z = g(base) for some
 * non-negative integer polynomial g with z^left * middle * z^right = target.
 */
struct PsdInstance {
    RingElement base;
    RingElement middle;
    RingElement target;
    std::uint32_t left_exponent = 1;
    std::uint32_t right_exponent = 1;

    // Throws DescriptorMismatch or std::invalid_argument (exponent < 1).
    void validate() const;
};

struct PsdSolution {
    IntPolynomial witness_poly;
    RingElement witness_element;
};

bool check_decomposition(const PsdInstance& inst, const RingElement& z);

struct PsdSearchOptions {
    std::uint32_t max_degree = 2;
    std::uint64_t max_coefficient = 2;
    std::uint64_t budget = PolynomialEnumerator::kDefaultBudget;
    unsigned workers = 1;
};

/**
 * Exhaustive search over every g with degree <= D and coefficients <= C, in
 * PolynomialEnumerator order. Returns the first verifying witness, or nullopt
 * when none exists inside the bounds. With several workers the index range
 * is split and the smallest hit wins, so the answer does not depend on the
 * worker count.
 *
 * Throws EnumerationBudgetExceeded when (C+1)^(D+1) exceeds the budget.
 */
std::optional<PsdSolution> brute_force_psd(const PsdInstance& inst, const PsdSearchOptions& opts);

// Uniform base and middle, g from the sampler, target = g(base)^l middle g(base)^r.
std::pair<PsdInstance, PsdSolution> generate_planted_instance(const RingDescriptor& desc,
                                                              std::uint32_t left_exponent,
                                                              std::uint32_t right_exponent,
                                                              const PolynomialSamplerConfig& cfg,
                                                              RandomSource& rng);

// encode(base) | encode(middle) | encode(target) | left (u32 BE) | right (u32 BE).
Bytes encode_instance(const PsdInstance& inst);
PsdInstance decode_instance(std::span<const std::uint8_t> bytes);

}  // namespace ncauth
