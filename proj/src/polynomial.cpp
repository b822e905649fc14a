#include "ncauth/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace ncauth {

namespace {

constexpr std::size_t kMaxParsedDegree = 4096;

std::uint64_t parse_number(std::string_view s, const std::string& text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw PolynomialParseError("invalid number '" + std::string(s) + "' in polynomial '" + text + "'");
    }
    return v;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<std::uint64_t> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

IntPolynomial IntPolynomial::monomial(std::uint64_t coefficient, std::size_t degree) {
    std::vector<std::uint64_t> c(degree + 1, 0);
    c[degree] = coefficient;
    return IntPolynomial(std::move(c));
}

std::string to_string(const IntPolynomial& f) {
    if (f.is_zero()) {
        return "0";
    }
    std::string out;
    const auto& c = f.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0) {
            out += std::to_string(c[i]);
            continue;
        }
        if (c[i] != 1) {
            out += std::to_string(c[i]) + "*";
        }
        out += 'x';
        if (i > 1) {
            out += '^' + std::to_string(i);
        }
    }
    return out;
}

IntPolynomial parse_polynomial(const std::string& text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) {
        throw PolynomialParseError("empty polynomial");
    }
    std::vector<std::uint64_t> coeffs;
    std::vector<bool> seen;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find('+', start);
        if (end == std::string::npos) end = s.size();
        std::string_view term(s.data() + start, end - start);
        if (term.empty()) {
            throw PolynomialParseError("empty term in polynomial '" + text + "'");
        }
        std::uint64_t coefficient = 1;
        std::size_t degree = 0;
        auto xpos = term.find('x');
        if (xpos == std::string_view::npos) {
            coefficient = parse_number(term, text);
        } else {
            std::string_view head = term.substr(0, xpos);
            std::string_view tail = term.substr(xpos + 1);
            if (!head.empty()) {
                if (head.back() != '*') {
                    throw PolynomialParseError("expected '*' before x in '" + text + "'");
                }
                coefficient = parse_number(head.substr(0, head.size() - 1), text);
            }
            degree = 1;
            if (!tail.empty()) {
                if (tail.front() != '^') {
                    throw PolynomialParseError("expected '^' after x in '" + text + "'");
                }
                degree = parse_number(tail.substr(1), text);
            }
        }
        if (degree > kMaxParsedDegree) {
            throw PolynomialParseError("degree too large in '" + text + "'");
        }
        if (coeffs.size() <= degree) {
            coeffs.resize(degree + 1, 0);
            seen.resize(degree + 1, false);
        }
        if (seen[degree]) {
            throw PolynomialParseError("repeated degree " + std::to_string(degree) + " in '" + text + "'");
        }
        seen[degree] = true;
        coeffs[degree] = coefficient;
        start = end + 1;
    }
    return IntPolynomial(std::move(coeffs));
}

RingElement evaluate(const IntPolynomial& f, const RingElement& r) {
    const auto& desc = r.descriptor();
    if (f.is_zero()) {
        return RingElement::zero(desc);
    }
    const auto one = RingElement::identity(desc);
    const auto& c = f.coefficients();
    RingElement acc = scale(c.back(), one);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        acc = acc * r + scale(c[i], one);
    }
    return acc;
}

void PolynomialSamplerConfig::validate() const {
    if (max_degree < 1) {
        throw std::invalid_argument("sampler max degree must be >= 1");
    }
    if (max_coefficient < 1) {
        throw std::invalid_argument("sampler max coefficient must be >= 1");
    }
}

IntPolynomial sample_polynomial(const PolynomialSamplerConfig& cfg, const RingElement& base, RandomSource& rng) {
    cfg.validate();
    for (int attempt = 0; attempt < kSamplerRetryLimit; ++attempt) {
        const auto degree = static_cast<std::size_t>(rng.uniform(1, cfg.max_degree));
        std::vector<std::uint64_t> c(degree + 1);
        for (std::size_t i = 0; i < degree; ++i) {
            c[i] = rng.uniform(0, cfg.max_coefficient);
        }
        c[degree] = rng.uniform(1, cfg.max_coefficient);
        IntPolynomial f(std::move(c));
        if (!cfg.require_nonzero_eval || !evaluate(f, base).is_zero()) {
            return f;
        }
    }
    throw SamplerExhausted("no polynomial with non-zero evaluation at the base element after " +
                           std::to_string(kSamplerRetryLimit) + " draws");
}

bool check_commutes(const IntPolynomial& f, const IntPolynomial& h, const RingElement& r) {
    const auto fr = evaluate(f, r);
    const auto hr = evaluate(h, r);
    return fr * hr == hr * fr;
}

EnumerationBudgetExceeded::EnumerationBudgetExceeded(std::uint64_t count, std::uint64_t budget)
    : std::runtime_error("enumeration of " + std::to_string(count) + " polynomials exceeds budget of " +
                         std::to_string(budget)),
      count_(count),
      budget_(budget) {}

std::uint64_t enumeration_count(std::uint32_t max_degree, std::uint64_t max_coefficient) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (max_coefficient == kMax) return kMax;
    const std::uint64_t radix = max_coefficient + 1;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i <= max_degree; ++i) {
        if (count > kMax / radix) return kMax;
        count *= radix;
    }
    return count;
}

PolynomialEnumerator::PolynomialEnumerator(std::uint32_t max_degree, std::uint64_t max_coefficient,
                                           std::uint64_t budget)
    : max_degree_(max_degree), max_coefficient_(max_coefficient) {
    count_ = enumeration_count(max_degree, max_coefficient);
    if (count_ > budget) {
        throw EnumerationBudgetExceeded(count_, budget);
    }
}

IntPolynomial PolynomialEnumerator::at(std::uint64_t index) const {
    if (index >= count_) {
        throw std::out_of_range("polynomial enumeration index");
    }
    std::vector<std::uint64_t> c(max_degree_ + 1, 0);
    const std::uint64_t radix = max_coefficient_ + 1;
    for (auto& digit : c) {
        digit = index % radix;
        index /= radix;
    }
    return IntPolynomial(std::move(c));
}

PolynomialEnumerator::Cursor::Cursor(const PolynomialEnumerator& owner, std::uint64_t begin, std::uint64_t end)
    : radix_(owner.max_coefficient_ + 1), pos_(begin), end_(std::min(end, owner.count_)) {
    digits_ = pos_ < end_ ? owner.at(pos_).coefficients() : std::vector<std::uint64_t>{};
    digits_.resize(owner.max_degree_ + 1, 0);
}

std::optional<IntPolynomial> PolynomialEnumerator::Cursor::next() {
    if (pos_ >= end_) {
        return std::nullopt;
    }
    IntPolynomial current(digits_);
    ++pos_;
    for (auto& digit : digits_) {
        if (++digit < radix_) break;
        digit = 0;
    }
    return current;
}

}  // namespace ncauth
