#include "ncauth/random.hpp"

#include <stdexcept>

namespace ncauth {

SeededRandom SeededRandom::derive(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint64_t mixed = 0;
    std::uint32_t words[2];
    seq.generate(std::begin(words), std::end(words));
    mixed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return SeededRandom(mixed);
}

std::uint64_t SeededRandom::uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) {
        throw std::invalid_argument("uniform: empty range");
    }
    std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    return dist(engine_);
}

}  // namespace ncauth
