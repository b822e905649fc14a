#include <gtest/gtest.h>

#include <array>
#include <set>

#include "ncauth/polynomial.hpp"
#include "support/sources.hpp"

using namespace ncauth;
using ncauth::test_support::MinimumSource;
using ncauth::test_support::ScriptedSource;

namespace {

// Σ scale(a_i, r^i) with powers built by repeated multiplication.
RingElement naive_eval(const IntPolynomial& f, const RingElement& r) {
    const auto& desc = r.descriptor();
    auto sum = RingElement::zero(desc);
    auto power = RingElement::identity(desc);
    for (std::size_t i = 0; i < f.coefficients().size(); ++i) {
        sum = sum + scale(f.coefficient(i), power);
        power = power * r;
    }
    return sum;
}

IntPolynomial poly_mul(const IntPolynomial& f, const IntPolynomial& h) {
    if (f.is_zero() || h.is_zero()) return {};
    std::vector<std::uint64_t> c(f.coefficients().size() + h.coefficients().size() - 1, 0);
    for (std::size_t i = 0; i < f.coefficients().size(); ++i)
        for (std::size_t j = 0; j < h.coefficients().size(); ++j) c[i + j] += f.coefficient(i) * h.coefficient(j);
    return IntPolynomial(c);
}

IntPolynomial random_poly(RandomSource& rng, std::size_t max_degree, std::uint64_t max_coeff) {
    std::vector<std::uint64_t> c(rng.uniform(0, max_degree) + 1);
    for (auto& x : c) x = rng.uniform(0, max_coeff);
    return IntPolynomial(c);
}

const std::array<RingDescriptor, 6> kDescriptors{RingDescriptor(2, 2), RingDescriptor(2, 3), RingDescriptor(2, 5),
                                                  RingDescriptor(3, 2), RingDescriptor(3, 5),
                                                  RingDescriptor(3, 2147483647)};

}  // namespace

TEST(IntPolynomial, CanonicalForm) {
    EXPECT_EQ(IntPolynomial({1, 2, 0, 0}).coefficients(), (std::vector<std::uint64_t>{1, 2}));
    EXPECT_TRUE(IntPolynomial({0, 0}).is_zero());
    EXPECT_EQ(IntPolynomial({0, 0}), IntPolynomial());
    EXPECT_EQ(IntPolynomial::monomial(3, 2), IntPolynomial({0, 0, 3}));
    EXPECT_EQ(IntPolynomial::constant(0), IntPolynomial());
    EXPECT_EQ(IntPolynomial({4, 0, 7}).degree(), 2u);
}

TEST(PolynomialText, FormatAndParse) {
    EXPECT_EQ(to_string(IntPolynomial({1, 2})), "1+2*x");
    EXPECT_EQ(to_string(IntPolynomial({0, 1, 3})), "x+3*x^2");
    EXPECT_EQ(to_string(IntPolynomial()), "0");
    EXPECT_EQ(parse_polynomial("3*x^2 + 1"), IntPolynomial({1, 0, 3}));
    EXPECT_EQ(parse_polynomial("x"), IntPolynomial({0, 1}));
    EXPECT_EQ(parse_polynomial("0"), IntPolynomial());
    EXPECT_THROW(parse_polynomial("x+x"), PolynomialParseError);
    EXPECT_THROW(parse_polynomial("1+"), PolynomialParseError);
    EXPECT_THROW(parse_polynomial("-1"), PolynomialParseError);
    EXPECT_THROW(parse_polynomial("y"), PolynomialParseError);
    EXPECT_THROW(parse_polynomial(""), PolynomialParseError);
}

TEST(PolynomialText, RoundTripOnRandomPolynomials) {
    SeededRandom rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto f = random_poly(rng, 8, 1'000'000);
        EXPECT_EQ(parse_polynomial(to_string(f)), f);
    }
}

TEST(Evaluate, Examples) {
    const RingDescriptor z5(2, 5);
    const auto p = RingElement::from_entries(z5, {1, 2, 3, 4});
    EXPECT_EQ(evaluate(IntPolynomial({0, 1}), p), p);
    // I + 2p = [[3,4],[6,9]] mod 5
    EXPECT_EQ(evaluate(IntPolynomial({1, 2}), p), RingElement::from_entries(z5, {3, 4, 1, 4}));
    EXPECT_EQ(evaluate(IntPolynomial::constant(3), p), scale(3, RingElement::identity(z5)));
    EXPECT_EQ(evaluate(IntPolynomial(), p), RingElement::zero(z5));
}

TEST(Evaluate, HornerMatchesNaiveSum) {
    SeededRandom rng(2);
    for (int i = 0; i < 1000; ++i) {
        const auto& desc = kDescriptors[i % kDescriptors.size()];
        const auto r = random_element(desc, rng);
        const auto f = random_poly(rng, 6, UINT32_MAX);
        ASSERT_EQ(evaluate(f, r), naive_eval(f, r)) << to_string(f);
    }
}

TEST(Evaluate, ProductHomomorphism) {
    SeededRandom rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto& desc = kDescriptors[i % kDescriptors.size()];
        const auto r = random_element(desc, rng);
        const auto f = random_poly(rng, 4, 1000);
        const auto h = random_poly(rng, 4, 1000);
        ASSERT_EQ(evaluate(poly_mul(f, h), r), evaluate(f, r) * evaluate(h, r));
    }
}

TEST(CheckCommutes, HoldsForRandomTriples) {
    SeededRandom rng(4);
    for (int i = 0; i < 1000; ++i) {
        const auto& desc = kDescriptors[i % kDescriptors.size()];
        const auto r = random_element(desc, rng);
        const auto f = random_poly(rng, 5, 1 << 16);
        const auto h = random_poly(rng, 5, 1 << 16);
        ASSERT_TRUE(check_commutes(f, h, r));
        // Independent of check_commutes itself.
        const auto fr = naive_eval(f, r);
        const auto hr = naive_eval(h, r);
        ASSERT_EQ(fr * hr, hr * fr);
    }
}

TEST(CheckCommutes, SamePolynomial) {
    SeededRandom rng(5);
    const auto r = random_element(RingDescriptor(2, 5), rng);
    const IntPolynomial f({2, 0, 4});
    EXPECT_TRUE(check_commutes(f, f, r));
}

TEST(CheckCommutes, DifferentArgumentsNeedNotCommute) {
    // Search small polynomials over M_2(Z_2) for f(r) h(s) != h(s) f(r).
    const RingDescriptor desc(2, 2);
    const auto r = RingElement::from_entries(desc, {0, 1, 0, 0});
    const auto s = RingElement::from_entries(desc, {0, 0, 1, 0});
    bool found = false;
    PolynomialEnumerator all(1, 1);
    for (std::uint64_t i = 0; i < all.size() && !found; ++i) {
        for (std::uint64_t j = 0; j < all.size() && !found; ++j) {
            const auto fr = evaluate(all.at(i), r);
            const auto hs = evaluate(all.at(j), s);
            found = fr * hs != hs * fr;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Sampler, DeterministicForSeed) {
    const PolynomialSamplerConfig cfg;
    SeededRandom base_rng(6);
    const auto base = random_element(RingDescriptor(3, 2147483647), base_rng);
    SeededRandom a(7), b(7);
    EXPECT_EQ(sample_polynomial(cfg, base, a), sample_polynomial(cfg, base, b));
}

TEST(Sampler, RespectsBounds) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 4;
    cfg.max_coefficient = 3;
    SeededRandom rng(8);
    const auto base = random_element(RingDescriptor(2, 5), rng);
    for (int i = 0; i < 2000; ++i) {
        const auto f = sample_polynomial(cfg, base, rng);
        ASSERT_GE(f.degree(), 1u);
        ASSERT_LE(f.degree(), 4u);
        for (auto c : f.coefficients()) ASSERT_LE(c, 3u);
        ASSERT_GE(f.coefficients().back(), 1u);
        ASSERT_FALSE(evaluate(f, base).is_zero());
    }
}

TEST(Sampler, ScriptedDrawOrder) {
    // degree, then a_0 .. a_deg
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 3;
    cfg.max_coefficient = 9;
    ScriptedSource src({2, 7, 0, 4});
    const auto f = sample_polynomial(cfg, RingElement::identity(RingDescriptor(2, 5)), src);
    EXPECT_EQ(f, IntPolynomial({7, 0, 4}));
    EXPECT_EQ(src.remaining(), 0u);
}

TEST(Sampler, ResamplesZeroEvaluation) {
    // 5x at the identity over Z_5 evaluates to zero and is redrawn.
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 2;
    cfg.max_coefficient = 5;
    const auto one = RingElement::identity(RingDescriptor(2, 5));
    ScriptedSource src({1, 0, 5, 1, 2, 1});
    const auto f = sample_polynomial(cfg, one, src);
    EXPECT_EQ(f, IntPolynomial({2, 1}));
    EXPECT_FALSE(evaluate(f, one).is_zero());
    EXPECT_EQ(src.used(), 6u);
}

TEST(Sampler, KeepsZeroEvaluationWhenAllowed) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 2;
    cfg.max_coefficient = 5;
    cfg.require_nonzero_eval = false;
    ScriptedSource src({1, 0, 5});
    EXPECT_EQ(sample_polynomial(cfg, RingElement::identity(RingDescriptor(2, 5)), src), IntPolynomial({0, 5}));
}

TEST(Sampler, ExhaustionAtZeroBase) {
    // At base 0 the lowest draws give f = x, which always vanishes.
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 3;
    cfg.max_coefficient = 4;
    MinimumSource src;
    EXPECT_THROW(sample_polynomial(cfg, RingElement::zero(RingDescriptor(2, 5)), src), SamplerExhausted);
    EXPECT_EQ(src.calls, 3u * kSamplerRetryLimit);
}

TEST(Sampler, RejectsInvalidConfig) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 0;
    SeededRandom rng(1);
    EXPECT_THROW(sample_polynomial(cfg, RingElement::identity(RingDescriptor(2, 5)), rng), std::invalid_argument);
    cfg.max_degree = 2;
    cfg.max_coefficient = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Sampler, DegreeHistogramChiSquare) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = 3;
    cfg.max_coefficient = 1 << 16;
    SeededRandom rng(9);
    const auto base = random_element(RingDescriptor(3, 2147483647), rng);
    std::array<double, 3> counts{};
    for (int i = 0; i < 10'000; ++i) counts[sample_polynomial(cfg, base, rng).degree() - 1] += 1;
    double chi2 = 0;
    for (double c : counts) chi2 += (c - 10'000.0 / 3) * (c - 10'000.0 / 3) / (10'000.0 / 3);
    EXPECT_LT(chi2, 9.2103);  // 2 dof, 99%
}

TEST(Enumerator, TinyCases) {
    PolynomialEnumerator e01(0, 1);
    ASSERT_EQ(e01.size(), 2u);
    EXPECT_EQ(e01.at(0), IntPolynomial());
    EXPECT_EQ(e01.at(1), IntPolynomial::constant(1));

    PolynomialEnumerator e11(1, 1);
    ASSERT_EQ(e11.size(), 4u);
    EXPECT_EQ(to_string(e11.at(0)), "0");
    EXPECT_EQ(to_string(e11.at(1)), "1");
    EXPECT_EQ(to_string(e11.at(2)), "x");
    EXPECT_EQ(to_string(e11.at(3)), "1+x");
}

TEST(Enumerator, CoversEveryPolynomialOnce) {
    PolynomialEnumerator e(3, 2);
    ASSERT_EQ(e.size(), 81u);
    std::set<IntPolynomial> seen;
    for (std::uint64_t i = 0; i < e.size(); ++i) {
        const auto f = e.at(i);
        EXPECT_LE(f.degree(), 3u);
        for (auto c : f.coefficients()) EXPECT_LE(c, 2u);
        if (!f.is_zero()) {
            EXPECT_NE(f.coefficients().back(), 0u);
        }
        seen.insert(f);
    }
    EXPECT_EQ(seen.size(), 81u);
}

TEST(Enumerator, CursorMatchesIndexing) {
    PolynomialEnumerator e(2, 3);
    auto cur = e.cursor(5, 40);
    for (std::uint64_t i = 5; i < 40; ++i) {
        auto f = cur.next();
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, e.at(i));
    }
    EXPECT_FALSE(cur.next().has_value());
}

TEST(Enumerator, BudgetExceeded) {
    EXPECT_EQ(enumeration_count(2, 2), 27u);
    EXPECT_EQ(enumeration_count(40, UINT64_MAX), UINT64_MAX);
    try {
        PolynomialEnumerator e(5, 10, 1000);
        FAIL() << "expected EnumerationBudgetExceeded";
    } catch (const EnumerationBudgetExceeded& ex) {
        EXPECT_EQ(ex.count(), 1'771'561u);
        EXPECT_EQ(ex.budget(), 1000u);
    }
}
