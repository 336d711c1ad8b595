#pragma once

#include "clgroup/numtheory.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace clgroup {

namespace detail {

/* Shanks' square forms factorization, multiplier 1. Returns a nontrivial factor or 0. */
inline u64 squfof(u64 n)
{
    if (n < 4 || n >= (u64(1) << 62))
        return 0;
    if ((n & 1) == 0)
        return 2;
    u64 root;
    if (is_square_u64(n, &root))
        return root;

    auto const kn = static_cast<i64>(n);
    i64 const p0 = static_cast<i64>(isqrt_u64(n));
    /* iteration cap about 4 n^(1/4) */
    i64 const cap = 4 * static_cast<i64>(isqrt_u64(static_cast<u64>(p0))) + 64;

    /* from a square Q = r^2 at an even index, walk the reverse cycle to the symmetry point */
    auto reverse = [&](i64 pf, i64 r) -> u64 {
        i64 b = (p0 - pf) / r;
        i64 p = b * r + pf;
        i64 q_prev = r;
        i64 q = (kn - p * p) / q_prev;
        for (i64 i = 0; i < 2 * cap; ++i) {
            b = (p0 + p) / q;
            i64 p_next = b * q - p;
            if (p_next == p)
                break;
            i64 q_next = q_prev + b * (p - p_next);
            q_prev = q;
            q = q_next;
            p = p_next;
        }
        return std::gcd(n, static_cast<u64>(p));
    };

    i64 p = p0, q_prev = 1, q = kn - p0 * p0;
    for (i64 i = 1; i <= cap; ++i) {
        i64 b = (p0 + p) / q;
        i64 p_next = b * q - p;
        i64 q_next = q_prev + b * (p - p_next);
        q_prev = q;
        q = q_next;
        p = p_next;
        /* q is Q_(i+1) */
        if ((i & 1) == 0)
            continue;
        u64 s;
        if (!is_square_u64(static_cast<u64>(q), &s))
            continue;
        if (s == 1)
            return 0;
        u64 f = reverse(p, static_cast<i64>(s));
        if (f != 1 && f != n)
            return f;
        /* improper square, keep going */
    }
    return 0;
}

/* Pollard-Brent rho. Returns a nontrivial factor or 0. */
inline u64 pollard_rho(u64 n, u64 max_iter = u64(1) << 22)
{
    if ((n & 1) == 0)
        return 2;
    for (u64 c = 1; c < 20; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        u64 iters = 0;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (g == 1 && iters < max_iter) {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                u64 lim = std::min<u64>(128, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += lim;
                iters += lim;
            }
            r <<= 1;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n && g != 1)
            return g;
    }
    return 0;
}

} // namespace detail

/*
 * Split a residue m = p p' with p, p' prime into (min, max).  Empty when the
 * iteration budgets are exhausted or m is not a product of two primes.
 */
inline std::optional<std::pair<u64, u64>> factor_residue(u64 m)
{
    if (m < 4 || is_prime_u64(m))
        return std::nullopt;
    u64 f = 0;
    u64 root;
    if (is_square_u64(m, &root))
        f = root;
    if (f == 0)
        f = detail::squfof(m);
    if (f == 0)
        f = detail::pollard_rho(m);
    if (f == 0)
        return std::nullopt;
    u64 g = m / f;
    if (!is_prime_u64(f) || !is_prime_u64(g))
        return std::nullopt;
    return std::make_pair(std::min(f, g), std::max(f, g));
}

struct ResidueClass
{
    enum class Kind { full, one_partial, two_partial, discard };

    Kind kind = Kind::discard;
    u64 p = 0;
    u64 q = 0;

    static ResidueClass full() { return {Kind::full, 0, 0}; }
    static ResidueClass one_partial(u64 p) { return {Kind::one_partial, p, 0}; }
    static ResidueClass two_partial(u64 p, u64 q) { return {Kind::two_partial, p, q}; }
    static ResidueClass discard() { return {Kind::discard, 0, 0}; }

    bool operator==(ResidueClass const &) const = default;

    friend std::ostream & operator<<(std::ostream & os, ResidueClass const & r)
    {
        switch (r.kind) {
        case Kind::full: return os << "Full";
        case Kind::one_partial: return os << "OnePartial(" << r.p << ")";
        case Kind::two_partial: return os << "TwoPartial(" << r.p << ", " << r.q << ")";
        default: return os << "Discard";
        }
    }
};

/* Bounds used by the residue case analysis. */
struct ResidueBounds
{
    u64 b1;
    u64 b2;
    int lp_count;
};

/*
 * m is phi(x,1) with every factor base prime divided out, so all prime
 * factors of m exceed B1.  Requires B2 < B1^2.
 */
inline ResidueClass classify_residue(u64 m, ResidueBounds const & bounds)
{
    if (m == 0)
        throw std::invalid_argument("classify_residue: zero residue");
    if (m == 1)
        return ResidueClass::full();
    if (bounds.lp_count == 0)
        return ResidueClass::discard();

    u128 const b1_sq = static_cast<u128>(bounds.b1) * bounds.b1;
    u128 const b2_sq = static_cast<u128>(bounds.b2) * bounds.b2;
    bool const prime = is_prime_u64(m);

    if (prime)
        return m <= bounds.b2 ? ResidueClass::one_partial(m) : ResidueClass::discard();
    /* composite: two factors > B1, so m > B1^2 */
    if (m <= b1_sq)
        throw std::invalid_argument("classify_residue: composite residue below B1^2 has a factor <= B1");
    if (bounds.lp_count < 2 || m > b2_sq)
        return ResidueClass::discard();
    auto split = factor_residue(m);
    if (!split || split->second > bounds.b2)
        return ResidueClass::discard();
    return ResidueClass::two_partial(split->first, split->second);
}

} // namespace clgroup
