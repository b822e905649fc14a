#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncauth/random.hpp"

namespace ncauth {

// Non-negative exact rational, kept in lowest terms.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Fraction() = default;
    Fraction(std::uint64_t n, std::uint64_t d);

    Fraction& operator+=(const Fraction& o);
    friend Fraction operator*(const Fraction& a, const Fraction& b);
    friend Fraction operator/(const Fraction& a, const Fraction& b);
    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

class PathAbandoned : public std::runtime_error {
public:
    PathAbandoned() : std::runtime_error("draw budget exceeded") {}
};

/**
 * RandomSource that walks every sequence of draws a computation can make.
 *
 * Each run replays the current path prefix and extends it with the lowest
 * value of any new draw. After a run, next_path() advances depth-first.
 * A run needing more than max_draws draws is abandoned by throwing
 * PathAbandoned; its subtree is skipped.
 */
class ChoiceTreeSource final : public RandomSource {
public:
    explicit ChoiceTreeSource(std::size_t max_draws) : max_draws_(max_draws) {}

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) override;

    // Probability of the path just run.
    Fraction path_probability() const;

    // Moves to the next unexplored path; false when the tree is exhausted.
    bool next_path();

    // Resets the replay cursor before each run.
    void rewind() { cursor_ = 0; }

private:
    struct Choice {
        std::uint64_t lo, hi, value;
    };
    std::vector<Choice> path_;
    std::size_t cursor_ = 0;
    std::size_t max_draws_;
};

using OutcomeDistribution = std::map<std::string, Fraction>;

/**
 * Exact distribution of `run` over all of its random choices. Abandoned
 * paths are dropped, so the result is conditional on staying inside the
 * budget; normalize() rescales it to total mass 1.
 */
OutcomeDistribution enumerate_outcomes(const std::function<std::string(RandomSource&)>& run, std::size_t max_draws);

Fraction total_mass(const OutcomeDistribution& d);
OutcomeDistribution normalize(const OutcomeDistribution& d);

}  // namespace ncauth
