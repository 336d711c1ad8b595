#pragma once

#include "clgroup/numtheory.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clgroup {

/* A negative integer congruent to 0 or 1 mod 4.  Not necessarily fundamental. */
class Discriminant
{
    mpz_class value_;

  public:
    explicit Discriminant(mpz_class v) : value_(std::move(v))
    {
        if (value_ >= 0)
            throw std::invalid_argument("discriminant must be negative");
        u64 r = mod_of(value_, 4);
        if (r != 0 && r != 1)
            throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
    }

    explicit Discriminant(long v) : Discriminant(mpz_class(v)) {}

    /* -4 (10^n + 1) */
    static Discriminant family(unsigned n)
    {
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), 10, n);
        return Discriminant(mpz_class(-4 * (t + 1)));
    }

    mpz_class const & value() const { return value_; }
    mpz_class abs_value() const { return abs(value_); }
    bool odd() const { return mpz_odd_p(value_.get_mpz_t()) != 0; }

    /*
     * True when p divides the conductor f of Delta = Delta_0 f^2.  Only local
     * information at p is needed.
     */
    bool conductor_divisible_by(u64 p) const
    {
        if (p == 2) {
            if (odd())
                return false;
            u64 r16 = mod_of(value_, 16);
            /* Delta/4 = 0 or 1 mod 4 */
            return r16 == 0 || r16 == 4;
        }
        return mpz_divisible_ui_p(value_.get_mpz_t(), p) &&
               mod_of(value_, p * p) == 0;
    }

    /* Fundamental iff no prime divides the conductor.  Trial division; small |Delta| only. */
    bool is_fundamental() const
    {
        mpz_class n = abs_value();
        if (!n.fits_ulong_p())
            throw std::range_error("is_fundamental: discriminant too large");
        u64 m = n.get_ui();
        if (conductor_divisible_by(2))
            return false;
        for (u64 p = 3; p * p <= m; p += 2) {
            if (m % (p * p) == 0)
                return false;
        }
        return true;
    }

    bool operator==(Discriminant const & o) const { return value_ == o.value_; }
};

struct QuadForm
{
    mpz_class a, b, c;

    QuadForm() = default;
    QuadForm(mpz_class a_, mpz_class b_, mpz_class c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_))
    {
    }
    QuadForm(long a_, long b_, long c_) : a(a_), b(b_), c(c_) {}

    mpz_class discriminant() const { return b * b - 4 * a * c; }

    bool operator==(QuadForm const & o) const
    {
        return a == o.a && b == o.b && c == o.c;
    }

    friend std::ostream & operator<<(std::ostream & os, QuadForm const & f)
    {
        return os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
    }
};

inline QuadForm principal_form(Discriminant const & disc)
{
    mpz_class b = disc.odd() ? 1 : 0;
    return {1, b, mpz_class((b - disc.value()) / 4)};
}

inline bool is_reduced(QuadForm const & f)
{
    if (f.a <= 0 || abs(f.b) > f.a || f.a > f.c)
        return false;
    if ((abs(f.b) == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

namespace detail {
/* b into (-a, a] through x -> x + k y */
inline void normalize(QuadForm & f)
{
    if (-f.a < f.b && f.b <= f.a)
        return;
    mpz_class two_a = 2 * f.a;
    mpz_class k;
    mpz_class num = f.a - f.b;
    mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), two_a.get_mpz_t());
    f.c += k * (f.b + f.a * k);
    f.b += two_a * k;
}
} // namespace detail

/* Gauss reduction of a positive definite form. */
inline QuadForm reduce(QuadForm f)
{
    if (f.a <= 0)
        throw std::invalid_argument("reduce: leading coefficient must be positive");
    detail::normalize(f);
    while (f.a > f.c) {
        swap(f.a, f.c);
        f.b = -f.b;
        detail::normalize(f);
    }
    if (f.a == f.c && f.b < 0)
        f.b = -f.b;
    return f;
}

inline QuadForm inverse(QuadForm const & f)
{
    return reduce(QuadForm(f.a, -f.b, f.c));
}

/*
 * Dirichlet composition followed by reduction.  With
 * e = gcd(a1, a2, (b1+b2)/2) = u a1 + v a2 + w (b1+b2)/2:
 *   A = a1 a2 / e^2,
 *   B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / e  mod 2A.
 */
inline QuadForm compose(QuadForm const & f, QuadForm const & g)
{
    mpz_class disc = f.discriminant();
    mpz_class s = (f.b + g.b) / 2;
    mpz_class g1, u1, v1;
    mpz_gcdext(g1.get_mpz_t(), u1.get_mpz_t(), v1.get_mpz_t(), f.a.get_mpz_t(), g.a.get_mpz_t());
    mpz_class e, u2, w;
    mpz_gcdext(e.get_mpz_t(), u2.get_mpz_t(), w.get_mpz_t(), g1.get_mpz_t(), s.get_mpz_t());
    mpz_class u = u2 * u1;
    mpz_class v = u2 * v1;
    mpz_class A = f.a * g.a / (e * e);
    mpz_class B = (u * f.a * g.b + v * g.a * f.b + w * ((f.b * g.b + disc) / 2)) / e;
    mpz_class two_A = 2 * A;
    mpz_fdiv_r(B.get_mpz_t(), B.get_mpz_t(), two_A.get_mpz_t());
    if (B > A)
        B -= two_A;
    mpz_class C = (B * B - disc) / (4 * A);
    return reduce(QuadForm(std::move(A), std::move(B), std::move(C)));
}

inline QuadForm square(QuadForm const & f)
{
    return compose(f, f);
}

inline QuadForm pow(QuadForm const & f, mpz_class e)
{
    mpz_class disc = f.discriminant();
    QuadForm base = e < 0 ? inverse(f) : reduce(f);
    if (e < 0)
        e = -e;
    QuadForm result = principal_form(Discriminant(disc));
    size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = nbits; i-- > 0;) {
        result = square(result);
        if (mpz_tstbit(e.get_mpz_t(), i))
            result = compose(result, base);
    }
    return result;
}

inline QuadForm pow(QuadForm const & f, long e)
{
    return pow(f, mpz_class(e));
}

inline bool is_principal(QuadForm const & f)
{
    return reduce(f).a == 1;
}

/*
 * Root b_p with b_p^2 = Delta (mod 4p), b_p = Delta (mod 2), 0 < b_p <= 2p.
 * Among the two candidates the one congruent to the smaller square root of
 * Delta mod p is taken; the prime ideal p corresponds to (p, b_p, .) and its
 * conjugate to (p, -b_p, .).
 */
inline u64 normalized_root(Discriminant const & disc, u64 p)
{
    if (p == 2) {
        u64 r8 = mod_of(disc.value(), 8);
        switch (r8) {
        case 1: return 1;
        case 0: return 4;
        case 4: return 2;
        default:
            throw std::invalid_argument("normalized_root: 2 is inert");
        }
    }
    u64 r = sqrt_mod_p(disc.value(), p);
    bool parity = disc.odd();
    u64 b = ((r & 1) == static_cast<u64>(parity)) ? r : r + p;
    if (b == 0)
        b = 2 * p;
    return b;
}

/* True when p is split or ramified and does not divide the conductor. */
inline bool is_invertible_prime(Discriminant const & disc, u64 p)
{
    return kronecker(disc.value(), p) != -1 && !disc.conductor_divisible_by(p);
}

inline QuadForm prime_form(Discriminant const & disc, u64 p)
{
    if (!is_prime_u64(p))
        throw std::invalid_argument("prime_form: not a prime");
    if (kronecker(disc.value(), p) == -1)
        throw std::invalid_argument("prime_form: inert prime " + std::to_string(p));
    if (disc.conductor_divisible_by(p))
        throw std::invalid_argument("prime_form: prime divides the conductor");
    mpz_class b(static_cast<unsigned long>(normalized_root(disc, p)));
    mpz_class a(static_cast<unsigned long>(p));
    mpz_class c = (b * b - disc.value()) / (4 * a);
    return {std::move(a), std::move(b), std::move(c)};
}

struct FactorBasePrime
{
    u64 p;
    u64 bp;
    bool ramified;
};

struct FactorBase
{
    std::vector<FactorBasePrime> primes;
    u64 bound = 0;
    /* primes <= bound dividing the conductor; relations touching them are dropped */
    std::vector<u64> excluded;

    size_t size() const { return primes.size(); }
    bool empty() const { return primes.empty(); }
    FactorBasePrime const & operator[](size_t i) const { return primes[i]; }
    u64 largest() const { return primes.empty() ? 0 : primes.back().p; }

    /* index of p, or -1 */
    long index_of(u64 p) const
    {
        auto it = std::lower_bound(primes.begin(), primes.end(), p,
                                   [](FactorBasePrime const & q, u64 v) { return q.p < v; });
        if (it == primes.end() || it->p != p)
            return -1;
        return it - primes.begin();
    }
};

namespace detail {
inline void consider_prime(Discriminant const & disc, u64 p, FactorBase & fb)
{
    if (kronecker(disc.value(), p) == -1)
        return;
    if (disc.conductor_divisible_by(p)) {
        fb.excluded.push_back(p);
        return;
    }
    fb.primes.push_back({p, normalized_root(disc, p), mpz_divisible_ui_p(disc.value().get_mpz_t(), p) != 0});
}
} // namespace detail

/* All invertible non-inert primes p <= bound. */
inline FactorBase build_factor_base(Discriminant const & disc, u64 bound)
{
    FactorBase fb;
    fb.bound = bound;
    if (bound < 2)
        return fb;
    for (u64 p : prime_table(bound))
        detail::consider_prime(disc, p, fb);
    return fb;
}

/* The first `count` invertible non-inert primes; the implied bound is the last one. */
inline FactorBase build_factor_base_by_size(Discriminant const & disc, size_t count)
{
    FactorBase fb;
    if (count == 0)
        return fb;
    u64 limit = 1024;
    for (;;) {
        fb = FactorBase{};
        for (u64 p : prime_table(limit)) {
            detail::consider_prime(disc, p, fb);
            if (fb.primes.size() == count) {
                fb.bound = p;
                return fb;
            }
        }
        limit *= 4;
    }
}

/* 6 log^2 |Delta| */
inline u64 bach_bound(Discriminant const & disc)
{
    double l = log2_of(disc.value()) * std::log(2.0);
    return static_cast<u64>(std::ceil(6.0 * l * l));
}

} // namespace clgroup
