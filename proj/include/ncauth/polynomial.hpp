#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncauth/random.hpp"
#include "ncauth/ring.hpp"

namespace ncauth {

/**
 * Polynomial with non-negative integer coefficients, a_0 + a_1 x + ... + a_n x^n.
 *
 * Stored canonically: coefficients()[i] is a_i, the leading coefficient is
 * non-zero, and the zero polynomial has no coefficients. Interior and
 * constant coefficients may be zero.
 */
class IntPolynomial {
public:
    IntPolynomial() = default;

    // Trailing (high-degree) zeros are trimmed.
    explicit IntPolynomial(std::vector<std::uint64_t> coefficients);

    static IntPolynomial constant(std::uint64_t c) { return IntPolynomial({c}); }
    static IntPolynomial monomial(std::uint64_t coefficient, std::size_t degree);

    const std::vector<std::uint64_t>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    // Degree of a non-zero polynomial; 0 for the zero polynomial.
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    std::uint64_t coefficient(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
    friend auto operator<=>(const IntPolynomial&, const IntPolynomial&) = default;

private:
    std::vector<std::uint64_t> coeffs_;
};

class PolynomialParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Text form "a0+a1*x+a2*x^2+..."; terms may appear in any order, omitted
// terms are zero. The zero polynomial formats as "0".
std::string to_string(const IntPolynomial& f);
IntPolynomial parse_polynomial(const std::string& text);

// f(r) by Horner's rule: a_0 enters as scale(a_0, identity).
RingElement evaluate(const IntPolynomial& f, const RingElement& r);

struct PolynomialSamplerConfig {
    std::uint32_t max_degree = 5;
    std::uint64_t max_coefficient = 1 << 16;
    bool require_nonzero_eval = true;

    // Throws std::invalid_argument unless D >= 1 and C >= 1.
    void validate() const;
};

inline constexpr int kSamplerRetryLimit = 1000;

class SamplerExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Draws a polynomial: degree uniform in [1, D], lower coefficients uniform
 * in [0, C], leading coefficient uniform in [1, C]. With
 * require_nonzero_eval the draw is repeated while f(base) = 0, at most
 * kSamplerRetryLimit times.
 */
IntPolynomial sample_polynomial(const PolynomialSamplerConfig& cfg, const RingElement& base, RandomSource& rng);

// Whether f(r) and h(r) commute. Always true; kept as an executable check.
bool check_commutes(const IntPolynomial& f, const IntPolynomial& h, const RingElement& r);

class EnumerationBudgetExceeded : public std::runtime_error {
public:
    EnumerationBudgetExceeded(std::uint64_t count, std::uint64_t budget);
    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t count_;
    std::uint64_t budget_;
};

// (C+1)^(D+1), saturating at UINT64_MAX.
std::uint64_t enumeration_count(std::uint32_t max_degree, std::uint64_t max_coefficient);

/**
 * Every polynomial with degree <= D and coefficients <= C, each exactly once.
 *
 * Order is lexicographic on the coefficient vector (a_0, ..., a_D) with a_0
 * varying fastest, i.e. counting in base C+1 with a_0 as the low digit.
 * index_of/at convert between polynomials and positions in that order.
 */
class PolynomialEnumerator {
public:
    static constexpr std::uint64_t kDefaultBudget = 1'000'000;

    // Throws EnumerationBudgetExceeded when (C+1)^(D+1) > budget.
    PolynomialEnumerator(std::uint32_t max_degree, std::uint64_t max_coefficient,
                         std::uint64_t budget = kDefaultBudget);

    std::uint64_t size() const noexcept { return count_; }
    IntPolynomial at(std::uint64_t index) const;

    // Single-pass cursor; next() yields nullopt after the last polynomial.
    class Cursor {
    public:
        std::optional<IntPolynomial> next();

    private:
        friend class PolynomialEnumerator;
        Cursor(const PolynomialEnumerator& owner, std::uint64_t begin, std::uint64_t end);

        std::vector<std::uint64_t> digits_;
        std::uint64_t radix_;
        std::uint64_t pos_;
        std::uint64_t end_;
    };

    Cursor cursor() const { return Cursor(*this, 0, count_); }
    Cursor cursor(std::uint64_t begin, std::uint64_t end) const { return Cursor(*this, begin, end); }

private:
    std::uint32_t max_degree_;
    std::uint64_t max_coefficient_;
    std::uint64_t count_;
};

}  // namespace ncauth
