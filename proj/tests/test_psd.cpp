#include <gtest/gtest.h>

#include "ncauth/lab.hpp"
#include "ncauth/psd.hpp"

using namespace ncauth;

namespace {

const RingDescriptor kZ3(2, 3);

PolynomialSamplerConfig bounds(std::uint32_t d, std::uint64_t c) {
    PolynomialSamplerConfig cfg;
    cfg.max_degree = d;
    cfg.max_coefficient = c;
    return cfg;
}

PsdSearchOptions search(std::uint32_t d, std::uint64_t c, unsigned workers = 1) {
    PsdSearchOptions o;
    o.max_degree = d;
    o.max_coefficient = c;
    o.workers = workers;
    return o;
}

}  // namespace

TEST(CheckDecomposition, IdentityConjugator) {
    SeededRandom rng(1);
    const auto x = random_element(kZ3, rng);
    const auto y = random_element(kZ3, rng);
    const auto one = RingElement::identity(kZ3);
    EXPECT_TRUE(check_decomposition(PsdInstance{one, x, x}, one));
    EXPECT_EQ(check_decomposition(PsdInstance{one, x, y}, one), x == y);
}

TEST(CheckDecomposition, PlantedReplays) {
    SeededRandom rng(2);
    for (int i = 0; i < 100; ++i) {
        auto [inst, sol] = generate_planted_instance(RingDescriptor(3, 5), 2, 3, bounds(3, 4), rng);
        ASSERT_TRUE(check_decomposition(inst, sol.witness_element));
        ASSERT_EQ(evaluate(sol.witness_poly, inst.base), sol.witness_element);
        ASSERT_EQ(inst.target, pow(sol.witness_element, 2) * inst.middle * pow(sol.witness_element, 3));
    }
}

TEST(CheckDecomposition, RandomElementsUsuallyFail) {
    const RingDescriptor z5(2, 5);
    SeededRandom rng(3);
    auto [inst, sol] = generate_planted_instance(z5, 1, 1, bounds(2, 2), rng);
    int passes = 0;
    for (int i = 0; i < 100; ++i) passes += check_decomposition(inst, random_element(z5, rng));
    EXPECT_LE(passes, 10);
}

TEST(PsdInstance, Validate) {
    const auto one = RingElement::identity(kZ3);
    EXPECT_THROW((PsdInstance{one, one, one, 0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((PsdInstance{one, RingElement::identity(RingDescriptor(2, 5)), one}.validate()), DescriptorMismatch);
}

TEST(BruteForce, FindsWitnessForOnePlusX) {
    SeededRandom rng(4);
    const auto p = random_element(kZ3, rng);
    const auto x = random_element(kZ3, rng);
    const auto z = evaluate(IntPolynomial({1, 1}), p);
    const PsdInstance inst{p, x, z * x * z};
    const auto sol = brute_force_psd(inst, search(1, 1));
    ASSERT_TRUE(sol.has_value());
    EXPECT_TRUE(check_decomposition(inst, sol->witness_element));
    EXPECT_EQ(evaluate(sol->witness_poly, p), sol->witness_element);
}

TEST(BruteForce, ReturnsFirstInEnumerationOrder) {
    SeededRandom rng(5);
    for (int i = 0; i < 30; ++i) {
        auto [inst, planted] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), rng);
        const auto sol = brute_force_psd(inst, search(2, 2));
        ASSERT_TRUE(sol.has_value());
        PolynomialEnumerator e(2, 2);
        std::uint64_t first = e.size();
        for (std::uint64_t j = 0; j < e.size(); ++j) {
            if (check_decomposition(inst, evaluate(e.at(j), inst.base))) {
                first = j;
                break;
            }
        }
        ASSERT_LT(first, e.size());
        EXPECT_EQ(sol->witness_poly, e.at(first));
    }
}

TEST(BruteForce, OffInstanceHasNoWitness) {
    SeededRandom rng(6);
    PsdOptions opts;
    opts.max_degree = 1;
    opts.max_coefficient = 1;
    for (int i = 0; i < 20; ++i) {
        const auto inst = generate_off_instance(opts, rng);
        EXPECT_FALSE(psd_witness_exists_naive(inst, 1, 1));
        EXPECT_FALSE(brute_force_psd(inst, search(1, 1)).has_value());
    }
}

TEST(BruteForce, AnnihilatorMiddle) {
    SeededRandom rng(7);
    const auto p = random_element(kZ3, rng);
    const auto zero = RingElement::zero(kZ3);
    const auto sol = brute_force_psd(PsdInstance{p, zero, zero}, search(2, 2));
    ASSERT_TRUE(sol.has_value());
    EXPECT_TRUE(sol->witness_poly.is_zero());
    auto nonzero = RingElement::identity(kZ3);
    EXPECT_FALSE(brute_force_psd(PsdInstance{p, zero, nonzero}, search(2, 2)).has_value());
}

TEST(BruteForce, ParallelAgreesWithSequential) {
    SeededRandom rng(8);
    for (int i = 0; i < 20; ++i) {
        auto [inst, planted] = generate_planted_instance(RingDescriptor(2, 5), 1, 2, bounds(3, 3), rng);
        const auto seq = brute_force_psd(inst, search(3, 3, 1));
        const auto par = brute_force_psd(inst, search(3, 3, 4));
        ASSERT_TRUE(seq.has_value());
        ASSERT_TRUE(par.has_value());
        EXPECT_EQ(seq->witness_poly, par->witness_poly);
    }
}

TEST(BruteForce, WitnessMayDifferFromPlanted) {
    // Over a small ring several polynomials share an evaluation, so the
    // solver often returns a different g than the planted one.
    SeededRandom rng(9);
    bool differed = false;
    for (int i = 0; i < 200 && !differed; ++i) {
        auto [inst, planted] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), rng);
        const auto sol = brute_force_psd(inst, search(2, 2));
        ASSERT_TRUE(sol.has_value());
        ASSERT_TRUE(check_decomposition(inst, sol->witness_element));
        differed = sol->witness_poly != planted.witness_poly;
    }
    EXPECT_TRUE(differed);
}

TEST(BruteForce, BudgetExceeded) {
    SeededRandom rng(10);
    auto [inst, planted] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), rng);
    auto opts = search(6, 20);
    EXPECT_THROW(brute_force_psd(inst, opts), EnumerationBudgetExceeded);
}

TEST(PlantedInstance, DeterministicForSeed) {
    SeededRandom a(11), b(11);
    auto [ia, sa] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), a);
    auto [ib, sb] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), b);
    EXPECT_EQ(encode_instance(ia), encode_instance(ib));
    EXPECT_EQ(sa.witness_poly, sb.witness_poly);
}

TEST(PlantedInstance, AlwaysSolvedWithinBounds) {
    SeededRandom rng(12);
    for (int i = 0; i < 200; ++i) {
        auto [inst, planted] = generate_planted_instance(kZ3, 1, 1, bounds(2, 2), rng);
        ASSERT_TRUE(brute_force_psd(inst, search(2, 2)).has_value());
        ASSERT_TRUE(psd_witness_exists_naive(inst, 2, 2));
    }
}

TEST(InstanceEncoding, RoundTrip) {
    SeededRandom rng(13);
    auto [inst, sol] = generate_planted_instance(RingDescriptor(3, 7), 3, 5, bounds(3, 3), rng);
    const auto back = decode_instance(encode_instance(inst));
    EXPECT_EQ(back.base, inst.base);
    EXPECT_EQ(back.middle, inst.middle);
    EXPECT_EQ(back.target, inst.target);
    EXPECT_EQ(back.left_exponent, 3u);
    EXPECT_EQ(back.right_exponent, 5u);
    auto bytes = encode_instance(inst);
    bytes.pop_back();
    EXPECT_ANY_THROW(decode_instance(bytes));
}
