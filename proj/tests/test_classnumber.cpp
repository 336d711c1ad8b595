#include "clgroup/classnumber.hpp"
#include "clgroup/oracle.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace clgroup;
namespace to = testing_oracle;

namespace {

ZMatrix from_dense(to::Dense const & d)
{
    ZMatrix z(d.size(), d.empty() ? 0 : d[0].size());
    for (size_t i = 0; i < z.rows(); ++i) {
        for (size_t j = 0; j < z.cols(); ++j)
            z(i, j) = d[i][j];
    }
    return z;
}

std::vector<mpz_class> mpzs(std::vector<u64> const & v)
{
    std::vector<mpz_class> out;
    for (u64 x : v)
        out.emplace_back(static_cast<unsigned long>(x));
    return out;
}

/* least d > 0 with d e_last in the integer column span of the (i x m) matrix */
mpz_class oracle_denominator(to::Dense a)
{
    /* column span of a = row span of a^T; its HNF's last diagonal is the answer */
    size_t i = a.size(), m = a[0].size();
    to::Dense t(m, std::vector<mpz_class>(i));
    for (size_t r = 0; r < i; ++r) {
        for (size_t c = 0; c < m; ++c)
            t[c][r] = a[r][c];
    }
    auto h = to::hnf(t);
    return (*h)[i - 1][i - 1];
}

} // namespace

TEST(MinimalDenominator, Examples)
{
    EXPECT_EQ(minimal_denominator(ZMatrix::from_rows({{1, 0}, {0, 6}})), 6);
    EXPECT_EQ(minimal_denominator(ZMatrix::from_rows({{1, 0, 3}})), 1);
    EXPECT_EQ(minimal_denominator(ZMatrix::identity(3)), 1);
    /* columns (2,0), (1,3): (0,6) = 2 (1,3) - (2,0) */
    EXPECT_EQ(minimal_denominator(ZMatrix::from_rows({{2, 1}, {0, 3}})), 6);
    EXPECT_EQ(minimal_denominator(ZMatrix::from_rows({{2, 1}, {0, 3}}), mpz_class(6)), 6);
    EXPECT_THROW(minimal_denominator(ZMatrix(0, 3)), std::invalid_argument);
}

TEST(MinimalDenominator, MatchesOracleHnf)
{
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int it = 0; it < 60; ++it) {
        size_t i = 1 + rng() % 5;
        size_t m = i + rng() % 5;
        auto d = to::random_dense(rng, i, m, -6, 6);
        to::Dense t(m, std::vector<mpz_class>(i));
        for (size_t r = 0; r < i; ++r) {
            for (size_t c = 0; c < m; ++c)
                t[c][r] = d[r][c];
        }
        if (!to::hnf(t))
            continue;
        EXPECT_EQ(minimal_denominator(from_dense(d)), oracle_denominator(d));
        ++checked;
    }
    EXPECT_GT(checked, 30);
}

TEST(ClassNumber, DiagonalExample)
{
    ZMatrix a = ZMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 3}});
    auto cn = class_number(a, 4);
    EXPECT_EQ(cn.h, 6);
    EXPECT_EQ(cn.h_i, (std::vector<mpz_class>{3, 2}));
    EXPECT_EQ(cn.determinant, 6);
    auto ind = class_number(a, 4, ClassNumberMode::independent);
    EXPECT_EQ(ind.h, 6);
    EXPECT_EQ(ind.h_i, cn.h_i);
    /* hstar = 2 stops the loop at 3, inside [2, 4); only the determinant check sees the rest */
    EXPECT_EQ(class_number(a, 2).h, 3);
    EXPECT_THROW(certified_class_number(a, 2), WindowViolation);
    EXPECT_THROW(class_number(a, 7), WindowViolation);
    EXPECT_EQ(certified_class_number(a, 6).h, 6);
}

TEST(ClassNumber, ProductMatchesOracleDeterminant)
{
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        size_t n = 2 + rng() % 10;
        size_t m = n + rng() % 8;
        auto d = to::random_dense(rng, m, n, -10, 10);
        auto h = to::hnf(d);
        if (!h)
            continue;
        mpz_class det = 1;
        for (size_t i = 0; i < n; ++i)
            det *= (*h)[i][i];
        /* hstar = det forces the loop over every column */
        auto cn = class_number(from_dense(d), det, ClassNumberMode::independent);
        EXPECT_EQ(cn.h, det);
        auto inc = certified_class_number(from_dense(d), det);
        EXPECT_EQ(inc.h, det);
        ++checked;
    }
    EXPECT_GT(checked, 25);
}

TEST(ClassNumber, IndexTwoSublatticeIsRejected)
{
    std::mt19937_64 rng(30);
    int checked = 0;
    for (int it = 0; it < 30; ++it) {
        size_t n = 3 + rng() % 6;
        auto d = to::random_dense(rng, n + 4, n, -5, 5);
        auto h = to::hnf(d);
        if (!h)
            continue;
        mpz_class det = 1;
        for (size_t i = 0; i < n; ++i)
            det *= (*h)[i][i];
        /* any hstar with hstar <= det < 2 hstar */
        mpz_class hs = det / 2 + 1;
        EXPECT_EQ(certified_class_number(from_dense(*h), hs).h, det);
        for (size_t row = 0; row < n; ++row) {
            to::Dense sub = *h;
            for (auto & x : sub[row])
                x *= 2;
            EXPECT_THROW(certified_class_number(from_dense(sub), hs), WindowViolation) << "row " << row;
            EXPECT_THROW(certified_class_number(from_dense(sub), hs, ClassNumberMode::independent),
                         WindowViolation);
        }
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(EssentialHnf, Examples)
{
    ZMatrix a = ZMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 3}});
    EXPECT_EQ(essential_hnf(a, 3), ZMatrix::from_rows({{3}}));
    EXPECT_EQ(essential_hnf(ZMatrix::identity(3), 1).rows(), 0u);
    EXPECT_THROW(essential_hnf(a, 6), std::invalid_argument);
}

TEST(EssentialHnf, MatchesOracleTrailingBlock)
{
    std::mt19937_64 rng(44);
    int checked = 0;
    for (int it = 0; it < 30; ++it) {
        auto d = to::random_dense(rng, 8, 6, -4, 4);
        auto h = to::hnf(d);
        if (!h)
            continue;
        mpz_class det = 1;
        size_t first = 6;
        for (size_t i = 0; i < 6; ++i) {
            det *= (*h)[i][i];
            if ((*h)[i][i] != 1 && first == 6)
                first = i;
        }
        ZMatrix e = essential_hnf(from_dense(d), det);
        ZMatrix expect = from_dense(*h).trailing_block(first);
        if (det == 1)
            EXPECT_EQ(e.rows(), 0u);
        else
            EXPECT_EQ(e, expect);
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(HStar, SmallWindows)
{
    EXPECT_TRUE(hstar(Discriminant(-23)).contains(3));
    EXPECT_TRUE(hstar(Discriminant(-4)).contains(1));
    EXPECT_TRUE(hstar(Discriminant(-3)).contains(1));
    EXPECT_THROW(hstar(Discriminant(-23), 50), std::invalid_argument);
}

TEST(HStar, WindowHoldsForAllSmallFundamental)
{
    for (i64 n = 3; n <= 3000; ++n) {
        i64 d = -n;
        if (!oracle::is_fundamental(d))
            continue;
        auto hs = hstar(Discriminant(d));
        i64 h = static_cast<i64>(oracle::enumerate_reduced(d).size());
        EXPECT_TRUE(hs.contains(h)) << d << " h=" << h << " hstar=" << hs.hstar;
    }
}

TEST(HStar, LargeDiscriminantKeepsDigits)
{
    Discriminant d(mpz_class("-4000000000000000000000000000000000000004"));
    auto hs = hstar(d);
    EXPECT_GT(hs.hstar, mpz_class("100000000000000000"));
    double ratio = hs.approx / hs.hstar.get_d();
    EXPECT_NEAR(ratio, std::numbers::sqrt2, 1e-9);
}

TEST(GroupStructure, SmallExamples)
{
    PipelineConfig cfg;
    EXPECT_EQ(group_structure(Discriminant(-23), cfg).group.divisors, mpzs({3}));
    EXPECT_TRUE(group_structure(Discriminant(-4), cfg).group.divisors.empty());
    EXPECT_EQ(group_structure(Discriminant(-47), cfg).group.divisors, mpzs({5}));
    EXPECT_EQ(group_structure(Discriminant(-84), cfg).group.divisors, mpzs({2, 2}));
    EXPECT_EQ(group_structure(Discriminant(-3299), cfg).group.divisors, mpzs({3, 9}));
    EXPECT_EQ(group_structure(Discriminant(-4027), cfg).group.divisors, mpzs({3, 3}));
}

TEST(GroupStructure, MatchesOracleOnFamilyAndSamples)
{
    std::vector<i64> ds = {-4 * (1000000 + 1)};
    std::mt19937_64 rng(2);
    while (ds.size() < 25) {
        i64 d = -static_cast<i64>(100000 + rng() % 2000000);
        if (oracle::is_fundamental(d))
            ds.push_back(d);
    }
    for (i64 d : ds) {
        auto r = group_structure(Discriminant(d), PipelineConfig{});
        auto o = oracle::group_structure_bsgs(d);
        EXPECT_EQ(r.group.divisors, mpzs(o.divisors)) << d;
        EXPECT_EQ(r.h, o.h) << d;
        EXPECT_TRUE(r.hstar.contains(r.h));
    }
}

TEST(GroupStructure, ModesAgreeAndRelationsVerify)
{
    Discriminant disc(-4 * (100000 + 1));
    PipelineConfig cfg;
    auto a = group_structure(disc, cfg);
    cfg.mode = ClassNumberMode::independent;
    cfg.seed = 9;
    auto b = group_structure(disc, cfg);
    EXPECT_EQ(a.group.divisors, b.group.divisors);
    FactorBase fb = pipeline_factor_base(disc, cfg);
    for (auto const & r : b.relations)
        EXPECT_TRUE(verify_relation(r, fb, disc));
}

TEST(GroupStructure, BadConfig)
{
    PipelineConfig cfg;
    cfg.lp_count = 3;
    EXPECT_THROW(group_structure(Discriminant(-1000003), cfg), BadConfig);
    cfg.lp_count = 2;
    cfg.fb_size = 0;
    EXPECT_THROW(group_structure(Discriminant(-1000003), cfg), BadConfig);
}

TEST(GroupStructure, ResumeFromRelations)
{
    Discriminant disc(-4 * (100000 + 1));
    PipelineConfig cfg;
    auto a = group_structure(disc, cfg);
    cfg.initial_relations = a.relations;
    auto b = group_structure(disc, cfg);
    EXPECT_EQ(a.group.divisors, b.group.divisors);
    /* nothing more to sieve */
    EXPECT_EQ(b.collect.ideals, 0u);
}
