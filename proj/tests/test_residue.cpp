#include "clgroup/residue.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace clgroup;

namespace {
ResidueBounds const bounds{100, 12000, 2};

u64 next_prime(u64 n)
{
    while (!is_prime_u64(n))
        ++n;
    return n;
}
} // namespace

TEST(ClassifyResidue, Examples)
{
    EXPECT_EQ(classify_residue(1, bounds), ResidueClass::full());
    EXPECT_EQ(classify_residue(9973, bounds), ResidueClass::one_partial(9973));
    EXPECT_EQ(classify_residue(10403, bounds), ResidueClass::two_partial(101, 103));
    EXPECT_EQ(classify_residue(20200303, bounds), ResidueClass::discard());
}

TEST(ClassifyResidue, LargePrimeCountLimits)
{
    EXPECT_EQ(classify_residue(1, {100, 100, 0}), ResidueClass::full());
    EXPECT_EQ(classify_residue(9973, {100, 100, 0}), ResidueClass::discard());
    EXPECT_EQ(classify_residue(9973, {100, 12000, 1}), ResidueClass::one_partial(9973));
    EXPECT_EQ(classify_residue(10403, {100, 12000, 1}), ResidueClass::discard());
}

TEST(ClassifyResidue, PrimeAboveB2Discarded)
{
    EXPECT_EQ(classify_residue(next_prime(12001), bounds), ResidueClass::discard());
    EXPECT_EQ(classify_residue(next_prime(200000), bounds), ResidueClass::discard());
}

TEST(ClassifyResidue, ProductAboveB2SquaredDiscarded)
{
    u64 m = next_prime(12001) * next_prime(13000);
    EXPECT_EQ(classify_residue(m, bounds), ResidueClass::discard());
}

TEST(ClassifyResidue, CompositeBelowB1SquaredIsRejected)
{
    EXPECT_THROW(classify_residue(11 * 13, bounds), std::invalid_argument);
    EXPECT_THROW(classify_residue(0, bounds), std::invalid_argument);
}

TEST(ClassifyResidue, RandomSemiprimesAgreeWithConstruction)
{
    std::mt19937_64 rng(9);
    ResidueBounds wide{1000, 200000, 2};
    for (int i = 0; i < 300; ++i) {
        u64 p = next_prime(1001 + rng() % 199000);
        u64 q = next_prime(1001 + rng() % 199000);
        if (p > wide.b2 || q > wide.b2)
            continue;
        auto r = classify_residue(p * q, wide);
        EXPECT_EQ(r, ResidueClass::two_partial(std::min(p, q), std::max(p, q))) << p << " " << q;
    }
}

TEST(FactorResidue, Examples)
{
    EXPECT_EQ(factor_residue(10403), std::make_pair(u64(101), u64(103)));
    EXPECT_EQ(factor_residue(10201), std::make_pair(u64(101), u64(101)));
    EXPECT_EQ(factor_residue(11 * 11 * 13), std::nullopt);
    EXPECT_EQ(factor_residue(9973), std::nullopt);
}

TEST(FactorResidue, LargeSemiprimes)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        u64 p = next_prime((1ULL << 28) + rng() % (1ULL << 28));
        u64 q = next_prime((1ULL << 28) + rng() % (1ULL << 28));
        auto f = factor_residue(p * q);
        ASSERT_TRUE(f.has_value()) << p << " " << q;
        EXPECT_EQ(*f, std::make_pair(std::min(p, q), std::max(p, q)));
    }
}

TEST(FactorResidue, SqufofFindsFactorsOfSmallSemiprimes)
{
    int ok = 0;
    for (u64 p : {1009ULL, 2003ULL, 4001ULL, 10007ULL, 65537ULL}) {
        for (u64 q : {1013ULL, 3001ULL, 7919ULL, 100003ULL}) {
            u64 f = detail::squfof(p * q);
            if (f) {
                EXPECT_TRUE(f == p || f == q) << p << " " << q << " " << f;
                ++ok;
            }
        }
    }
    EXPECT_GT(ok, 10);
}
