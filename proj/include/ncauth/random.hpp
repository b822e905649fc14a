#pragma once

#include <cstdint>
#include <random>

namespace ncauth {

// Source of uniform integer draws. Every random decision in the library goes
// through uniform(), which lets tests substitute scripted or enumerating
// sources for the seeded generator.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    // Uniform integer in the closed range [lo, hi]. Requires lo <= hi.
    virtual std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) = 0;

    bool bit() { return uniform(0, 1) == 1; }
};

// Deterministic pseudo-random source backed by mt19937_64.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for (seed, index); used to give each trial or
    // session of an experiment its own reproducible generator.
    static SeededRandom derive(std::uint64_t seed, std::uint64_t index);

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) override;

    // Fills `out` with raw bytes, e.g. for session identifiers.
    template <typename It>
    void fill_bytes(It first, It last) {
        for (; first != last; ++first) {
            *first = static_cast<std::uint8_t>(uniform(0, 255));
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ncauth
