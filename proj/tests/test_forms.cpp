#include "clgroup/forms.hpp"
#include "clgroup/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace clgroup;

namespace {

/* (d/p) for odd prime p by squaring every residue */
int legendre_by_squares(long d, long p)
{
    long r = ((d % p) + p) % p;
    if (r == 0)
        return 0;
    for (long x = 1; x < p; ++x) {
        if (x * x % p == r)
            return 1;
    }
    return -1;
}

QuadForm random_form(Discriminant const & disc, std::mt19937_64 & rng)
{
    /* product of a few random prime forms */
    auto fb = build_factor_base(disc, 200);
    QuadForm f = principal_form(disc);
    for (int i = 0; i < 4; ++i) {
        auto const & q = fb[rng() % fb.size()];
        f = compose(f, pow(prime_form(disc, q.p), static_cast<long>(rng() % 7) - 3));
    }
    return f;
}

} // namespace

TEST(Kronecker, SmallExamples)
{
    EXPECT_EQ(kronecker(-23, 5), -1);
    EXPECT_EQ(kronecker(-23, 23), 0);
    EXPECT_EQ(kronecker(-23, 2), 1);
    EXPECT_EQ(kronecker(mpz_class(-23), 2), 1);
    EXPECT_EQ(kronecker(mpz_class(-23), 5), -1);
}

TEST(Kronecker, MatchesSquaresModOddPrimes)
{
    for (long p : {3L, 5L, 7L, 11L, 13L, 101L}) {
        for (long d = -200; d < 0; ++d)
            EXPECT_EQ(kronecker(d, p), legendre_by_squares(d, p)) << d << " " << p;
    }
}

TEST(Kronecker, TwoFollowsTheMod8Rule)
{
    for (long d = -400; d < 0; ++d) {
        int expect = (d % 2 == 0) ? 0 : ((((d % 8) + 8) % 8 == 1 || ((d % 8) + 8) % 8 == 7) ? 1 : -1);
        EXPECT_EQ(kronecker(d, 2), expect) << d;
        EXPECT_EQ(kronecker(mpz_class(d), 2), expect) << d;
    }
}

TEST(SqrtModP, Examples)
{
    EXPECT_EQ(sqrt_mod_p(static_cast<i64>(-23), 3), 1u);
    EXPECT_EQ(sqrt_mod_p(static_cast<i64>(0), 7), 0u);
    EXPECT_EQ(sqrt_mod_p(static_cast<i64>(2), 7), 3u);
    EXPECT_THROW(sqrt_mod_p(static_cast<i64>(3), 7), std::domain_error);
}

TEST(SqrtModP, RootsSquareBackAndAreTheSmaller)
{
    for (u64 p : {5u, 13u, 17u, 41u, 97u, 193u, 257u, 65537u, 1000000009u}) {
        for (u64 d = 0; d < 60; ++d) {
            if (d % p != 0 && powmod(d % p, (p - 1) / 2, p) != 1)
                continue;
            u64 r = sqrt_mod_p(d, p);
            EXPECT_EQ(mulmod(r, r, p), d % p);
            EXPECT_LE(r, p - r);
        }
    }
}

TEST(PrimeForm, Examples)
{
    Discriminant d23(-23), d4(-4);
    EXPECT_EQ(prime_form(d23, 2), QuadForm(2, 1, 3));
    EXPECT_EQ(prime_form(d23, 23), QuadForm(23, 23, 6));
    EXPECT_EQ(prime_form(d4, 2), QuadForm(2, 2, 1));
    EXPECT_THROW(prime_form(d23, 5), std::invalid_argument);
}

TEST(PrimeForm, DiscriminantAndNorm)
{
    Discriminant d(-4 * 1000003L);
    for (auto const & q : build_factor_base(d, 2000).primes) {
        QuadForm f = prime_form(d, q.p);
        EXPECT_EQ(f.discriminant(), d.value());
        EXPECT_EQ(f.a, static_cast<unsigned long>(q.p));
        EXPECT_GT(q.bp, 0u);
        EXPECT_LE(q.bp, 2 * q.p);
        EXPECT_EQ(q.bp % 2, 0u);
    }
}

TEST(Reduce, Examples)
{
    EXPECT_EQ(reduce(QuadForm(2, 1, 3)), QuadForm(2, 1, 3));
    EXPECT_EQ(reduce(QuadForm(6, 1, 1)), QuadForm(1, 1, 6));
    EXPECT_EQ(reduce(QuadForm(3, -1, 2)), QuadForm(2, 1, 3));
    EXPECT_THROW(reduce(QuadForm(-1, 1, -6)), std::invalid_argument);
}

TEST(Reduce, IdempotentAndListedByEnumeration)
{
    std::mt19937_64 rng(5);
    for (long dv : {-23L, -47L, -84L, -231L, -1003L, -3299L}) {
        Discriminant disc(dv);
        auto forms = oracle::enumerate_reduced(dv);
        for (int i = 0; i < 40; ++i) {
            QuadForm f = random_form(disc, rng);
            QuadForm r = reduce(f);
            EXPECT_TRUE(is_reduced(r));
            EXPECT_EQ(reduce(r), r);
            oracle::Form of{r.a.get_si(), r.b.get_si(), r.c.get_si()};
            EXPECT_NE(std::find(forms.begin(), forms.end(), of), forms.end()) << r;
        }
    }
}

TEST(Compose, Examples)
{
    EXPECT_EQ(compose(QuadForm(2, 1, 3), QuadForm(2, -1, 3)), QuadForm(1, 1, 6));
    EXPECT_EQ(compose(QuadForm(1, 1, 6), QuadForm(2, 1, 3)), QuadForm(2, 1, 3));
    EXPECT_EQ(compose(QuadForm(2, 1, 3), QuadForm(2, 1, 3)), QuadForm(2, -1, 3));
}

TEST(Compose, GroupLaws)
{
    std::mt19937_64 rng(11);
    for (long dv : {-23L, -56L, -4 * 1000001L, -1000003L * 4 - 3}) {
        Discriminant disc(dv);
        QuadForm one = principal_form(disc);
        for (int i = 0; i < 30; ++i) {
            QuadForm f = random_form(disc, rng), g = random_form(disc, rng), h = random_form(disc, rng);
            EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
            EXPECT_EQ(compose(f, g), compose(g, f));
            EXPECT_EQ(compose(f, one), reduce(f));
            EXPECT_EQ(compose(f, inverse(f)), one);
        }
    }
}

TEST(Compose, AgreesWithOracleArithmetic)
{
    std::mt19937_64 rng(3);
    for (long dv : {-3299L, -10007L, -4 * 12347L}) {
        Discriminant disc(dv);
        for (int i = 0; i < 50; ++i) {
            QuadForm f = random_form(disc, rng), g = random_form(disc, rng);
            QuadForm h = compose(f, g);
            oracle::Form of{f.a.get_si(), f.b.get_si(), f.c.get_si()};
            oracle::Form og{g.a.get_si(), g.b.get_si(), g.c.get_si()};
            oracle::Form oh = oracle::compose(of, og);
            EXPECT_EQ(oh, (oracle::Form{h.a.get_si(), h.b.get_si(), h.c.get_si()}));
        }
    }
}

TEST(Pow, Examples)
{
    Discriminant d(-23);
    EXPECT_EQ(pow(QuadForm(2, 1, 3), 3L), QuadForm(1, 1, 6));
    EXPECT_EQ(pow(QuadForm(2, 1, 3), -1L), QuadForm(2, -1, 3));
    EXPECT_EQ(pow(QuadForm(6, 1, 1), 1L), QuadForm(1, 1, 6));
    EXPECT_EQ(pow(QuadForm(2, 1, 3), 0L), principal_form(d));
}

TEST(FactorBase, Examples)
{
    auto fb = build_factor_base(Discriminant(-23), 6);
    ASSERT_EQ(fb.size(), 2u);
    EXPECT_EQ(fb[0].p, 2u);
    EXPECT_EQ(fb[1].p, 3u);
    auto fb4 = build_factor_base(Discriminant(-4), 10);
    ASSERT_EQ(fb4.size(), 2u);
    EXPECT_EQ(fb4[0].p, 2u);
    EXPECT_TRUE(fb4[0].ramified);
    EXPECT_EQ(fb4[1].p, 5u);
    EXPECT_TRUE(build_factor_base(Discriminant(-23), 1).empty());
}

TEST(FactorBase, MatchesDirectKroneckerFilter)
{
    for (long dv : {-23L, -4 * 1000001L, -999983L * 4 - 3}) {
        Discriminant disc(dv);
        auto fb = build_factor_base(disc, 5000);
        std::vector<u64> direct;
        for (u64 p : primes_up_to(5000)) {
            if (kronecker(dv, static_cast<i64>(p)) != -1 && !disc.conductor_divisible_by(p))
                direct.push_back(p);
        }
        ASSERT_EQ(fb.size(), direct.size());
        for (size_t i = 0; i < fb.size(); ++i)
            EXPECT_EQ(fb[i].p, direct[i]);
    }
}

TEST(FactorBase, BySizeReportsBound)
{
    Discriminant disc(-4 * 1000001L);
    auto fb = build_factor_base_by_size(disc, 50);
    ASSERT_EQ(fb.size(), 50u);
    EXPECT_EQ(fb.bound, fb.largest());
    EXPECT_EQ(build_factor_base(disc, fb.bound).size(), 50u);
}

TEST(FactorBase, ConductorPrimesExcluded)
{
    /* -4 * 9 * 5 = -180: conductor 3 over -20 */
    Discriminant disc(-180);
    EXPECT_TRUE(disc.conductor_divisible_by(3));
    EXPECT_FALSE(disc.is_fundamental());
    auto fb = build_factor_base(disc, 30);
    EXPECT_EQ(fb.index_of(3), -1);
    EXPECT_EQ(fb.excluded, std::vector<u64>{3});
    EXPECT_THROW(prime_form(disc, 3), std::invalid_argument);
}

TEST(Discriminant, Validation)
{
    EXPECT_THROW(Discriminant(-5), std::invalid_argument);
    EXPECT_THROW(Discriminant(5), std::invalid_argument);
    EXPECT_NO_THROW(Discriminant(-3));
    EXPECT_EQ(Discriminant::family(6).value(), mpz_class(-4 * 1000001L));
}
