#pragma once

#include "clgroup/numtheory.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

/*
 * Brute-force class groups for small discriminants.  Deliberately shares no
 * code with the form arithmetic used by the sieve.
 */
namespace clgroup::oracle {

constexpr i64 guard_rail = 1000000000;

struct Form
{
    i64 a, b, c;
    bool operator==(Form const & o) const = default;
    bool operator<(Form const & o) const
    {
        return a != o.a ? a < o.a : b != o.b ? b < o.b : c < o.c;
    }
};

struct FormHash
{
    size_t operator()(Form const & f) const
    {
        u64 h = static_cast<u64>(f.a) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<u64>(f.b) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

inline void check_range(i64 d)
{
    if (d >= 0 || (d % 4 != 0 && d % 4 != -3))
        throw std::invalid_argument("oracle: discriminant must be negative and 0 or 1 mod 4");
    if (-d > guard_rail)
        throw std::out_of_range("oracle: |discriminant| above the guard rail");
}

inline i64 floor_div(i64 x, i64 y)
{
    i64 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0)))
        --q;
    return q;
}

/* reduction of a positive definite form */
inline Form reduce(Form f)
{
    for (;;) {
        if (f.b <= -f.a || f.b > f.a) {
            /* b -> b + 2ka into (-a, a] */
            i64 k = floor_div(f.a - f.b, 2 * f.a);
            i128 c = static_cast<i128>(f.c) + static_cast<i128>(k) * f.b + static_cast<i128>(k) * k * f.a;
            f.b += 2 * k * f.a;
            f.c = static_cast<i64>(c);
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        return f;
    }
}

inline i64 ext_gcd(i64 a, i64 b, i64 & x, i64 & y)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floor_div(a, b);
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

/* composition following Shanks' formulas as laid out by Cohen */
inline Form compose(Form f1, Form f2)
{
    if (f1.a > f2.a)
        std::swap(f1, f2);
    i64 s = (f1.b + f2.b) / 2;
    i64 n = f2.b - s;
    i64 d, y1;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        i64 u, v;
        d = ext_gcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    i64 d1, x2, y2;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        i64 u, v;
        d1 = ext_gcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    i64 v1 = f1.a / d1;
    i64 v2 = f2.a / d1;
    i128 r = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
    if (r < 0)
        r += v1;
    i128 b3 = f2.b + 2 * static_cast<i128>(v2) * r;
    i128 a3 = static_cast<i128>(v1) * v2;
    i128 c3 = (static_cast<i128>(f2.c) * d1 + r * (f2.b + static_cast<i128>(v2) * r)) / v1;
    /* bring b3 near a3 before narrowing */
    i128 k = b3 / (2 * a3);
    c3 = c3 - k * b3 + k * k * a3;
    b3 = b3 - 2 * k * a3;
    return reduce(Form{static_cast<i64>(a3), static_cast<i64>(b3), static_cast<i64>(c3)});
}

inline Form identity(i64 d)
{
    i64 b = (d & 1) ? 1 : 0;
    return Form{1, b, (b * b - d) / 4};
}

inline Form inverse(Form const & f)
{
    return reduce(Form{f.a, -f.b, f.c});
}

inline Form power(Form f, u64 e, i64 d)
{
    Form r = identity(d);
    while (e) {
        if (e & 1)
            r = compose(r, f);
        f = compose(f, f);
        e >>= 1;
    }
    return r;
}

/* primitive reduced forms ordered by (a, b) */
inline std::vector<Form> enumerate_reduced(i64 d)
{
    check_range(d);
    std::vector<Form> out;
    i64 const n = -d;
    for (i64 a = 1; 3 * a * a <= n; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - d;
            if (num % (4 * a) != 0)
                continue;
            i64 c = num / (4 * a);
            if (c < a)
                continue;
            if ((b == a || a == c) && b < 0)
                continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1)
                continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

/* the same count with b in the outer loop and a running over divisors */
inline i64 count_reduced(i64 d)
{
    check_range(d);
    i64 const n = -d;
    i64 count = 0;
    for (i64 b = (n & 1); 3 * b * b <= n; b += 2) {
        i64 m = (b * b + n) / 4;
        for (i64 a = std::max<i64>(b, 1); a * a <= m; ++a) {
            if (m % a != 0)
                continue;
            i64 c = m / a;
            if (std::gcd(std::gcd(a, b), c) != 1)
                continue;
            /* (a, b, c) always; (a, -b, c) unless b = 0, b = a, or a = c */
            ++count;
            if (b != 0 && b != a && a != c)
                ++count;
        }
    }
    return count;
}

/* least t > 0 with f^t = 1 for an element of a group of order h, by baby steps and giant steps */
inline u64 element_order(Form const & f, i64 d, u64 h)
{
    Form const one = identity(d);
    u64 m = isqrt_u64(h) + 1;
    std::unordered_map<Form, u64, FormHash> baby;
    Form x = one;
    for (u64 j = 0; j < m; ++j) {
        if (j > 0 && x == one)
            return j;
        baby.emplace(x, j);
        x = compose(x, f);
    }
    /* x = f^m; giant steps z_i = f^(-i m) */
    Form step = inverse(x);
    Form z = one;
    for (u64 i = 1; i <= m + 1; ++i) {
        z = compose(z, step);
        auto it = baby.find(z);
        if (it != baby.end())
            return i * m + it->second;
    }
    throw std::logic_error("element_order: order exceeds the group order bound");
}

inline std::vector<std::pair<u64, unsigned>> factor_small(u64 n)
{
    std::vector<std::pair<u64, unsigned>> f;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

struct Structure
{
    u64 h = 0;
    /* d_1 | d_2 | ..., ones omitted */
    std::vector<u64> divisors;
};

/*
 * The p-part of the group is read off the p^j-torsion sizes: the number of
 * cyclic factors of order >= p^j is log_p(#G[p^j] / #G[p^(j-1)]).
 */
inline Structure group_structure_bsgs(i64 d)
{
    auto forms = enumerate_reduced(d);
    Structure st;
    st.h = forms.size();
    if (st.h == 1)
        return st;
    std::vector<u64> orders;
    orders.reserve(forms.size());
    for (auto const & f : forms)
        orders.push_back(element_order(f, d, st.h));

    /* per prime: exponents of the cyclic p-factors, descending */
    std::vector<std::vector<u64>> ppowers;
    for (auto const & [p, e] : factor_small(st.h)) {
        std::vector<u64> torsion(e + 1, 0);
        u64 pj = 1;
        for (unsigned j = 0; j <= e; ++j) {
            for (u64 o : orders) {
                if (pj % o == 0)
                    ++torsion[j];
            }
            pj *= p;
        }
        /* r[j] = number of factors of order >= p^j */
        std::vector<unsigned> r(e + 2, 0);
        for (unsigned j = 1; j <= e; ++j) {
            u64 ratio = torsion[j] / torsion[j - 1];
            unsigned k = 0;
            while (ratio > 1) {
                if (ratio % p)
                    throw std::logic_error("oracle: torsion sizes are not powers of p");
                ratio /= p;
                ++k;
            }
            r[j] = k;
        }
        std::vector<u64> pw;
        u64 q = 1;
        for (unsigned j = 1; j <= e; ++j) {
            q *= p;
            for (unsigned t = 0; t < r[j] - r[j + 1]; ++t)
                pw.push_back(q);
        }
        std::sort(pw.rbegin(), pw.rend());
        ppowers.push_back(std::move(pw));
    }
    size_t len = 0;
    for (auto const & v : ppowers)
        len = std::max(len, v.size());
    std::vector<u64> inv(len, 1);
    for (auto const & v : ppowers) {
        for (size_t i = 0; i < v.size(); ++i)
            inv[i] *= v[i];
    }
    std::sort(inv.begin(), inv.end());
    st.divisors = inv;
    u64 prod = 1;
    for (u64 x : inv)
        prod *= x;
    if (prod != st.h)
        throw std::logic_error("oracle: structure does not multiply to h");
    return st;
}

/* Fundamental discriminant test by trial division. */
inline bool is_fundamental(i64 d)
{
    if (d >= 0)
        return false;
    i64 n = -d;
    if (d % 4 == -3 || d % 4 == 1) {
        for (i64 p = 3; p * p <= n; p += 2) {
            if (n % (p * p) == 0)
                return false;
        }
        return true;
    }
    if (n % 4 != 0)
        return false;
    i64 m = n / 4;
    /* -m = 2 or 3 mod 4, i.e. m = 1 or 2 mod 4 */
    if (m % 4 != 1 && m % 4 != 2)
        return false;
    for (i64 p = 3; p * p <= m; p += 2) {
        if (m % (p * p) == 0)
            return false;
    }
    return true;
}

} // namespace clgroup::oracle
