#include "ncauth/exhaustive.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ncauth {

namespace {

using u128 = unsigned __int128;

Fraction reduce(u128 num, u128 den) {
    if (den == 0) throw std::domain_error("fraction with zero denominator");
    if (num == 0) return Fraction{};
    u128 a = num, b = den;
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    num /= a;
    den /= a;
    constexpr u128 kMax = std::numeric_limits<std::uint64_t>::max();
    if (num > kMax || den > kMax) throw std::overflow_error("fraction overflow");
    Fraction f;
    f.num = static_cast<std::uint64_t>(num);
    f.den = static_cast<std::uint64_t>(den);
    return f;
}

}  // namespace

Fraction::Fraction(std::uint64_t n, std::uint64_t d) { *this = reduce(n, d); }

Fraction& Fraction::operator+=(const Fraction& o) {
    *this = reduce(u128{num} * o.den + u128{o.num} * den, u128{den} * o.den);
    return *this;
}

Fraction operator*(const Fraction& a, const Fraction& b) { return reduce(u128{a.num} * b.num, u128{a.den} * b.den); }

Fraction operator/(const Fraction& a, const Fraction& b) { return reduce(u128{a.num} * b.den, u128{a.den} * b.num); }

std::uint64_t ChoiceTreeSource::uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi || hi - lo == std::numeric_limits<std::uint64_t>::max()) {
        throw std::invalid_argument("ChoiceTreeSource: range not enumerable");
    }
    if (cursor_ < path_.size()) {
        const auto& c = path_[cursor_];
        if (c.lo != lo || c.hi != hi) {
            throw std::logic_error("ChoiceTreeSource: computation is not deterministic in its draws");
        }
        ++cursor_;
        return c.value;
    }
    if (cursor_ >= max_draws_) {
        throw PathAbandoned();
    }
    path_.push_back({lo, hi, lo});
    ++cursor_;
    return lo;
}

Fraction ChoiceTreeSource::path_probability() const {
    Fraction p(1, 1);
    for (std::size_t i = 0; i < cursor_; ++i) {
        p = p * Fraction(1, path_[i].hi - path_[i].lo + 1);
    }
    return p;
}

bool ChoiceTreeSource::next_path() {
    path_.resize(std::min(path_.size(), cursor_));
    while (!path_.empty() && path_.back().value == path_.back().hi) {
        path_.pop_back();
    }
    if (path_.empty()) return false;
    ++path_.back().value;
    cursor_ = 0;
    return true;
}

OutcomeDistribution enumerate_outcomes(const std::function<std::string(RandomSource&)>& run, std::size_t max_draws) {
    OutcomeDistribution dist;
    ChoiceTreeSource src(max_draws);
    do {
        src.rewind();
        try {
            auto outcome = run(src);
            dist[outcome] += src.path_probability();
        } catch (const PathAbandoned&) {
        }
    } while (src.next_path());
    return dist;
}

Fraction total_mass(const OutcomeDistribution& d) {
    Fraction total;
    for (const auto& [_, p] : d) total += p;
    return total;
}

OutcomeDistribution normalize(const OutcomeDistribution& d) {
    const auto total = total_mass(d);
    OutcomeDistribution out;
    if (total.num == 0) return out;
    for (const auto& [k, p] : d) out[k] = p / total;
    return out;
}

}  // namespace ncauth
