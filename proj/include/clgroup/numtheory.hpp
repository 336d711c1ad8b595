#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace clgroup {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 e, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/* inverse of a modulo m, gcd(a, m) must be 1 */
inline u64 invmod(u64 a, u64 m)
{
    i128 t = 0, nt = 1;
    i128 r = m, nr = a % m;
    while (nr != 0) {
        i128 q = r / nr;
        i128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1)
        throw std::domain_error("invmod: not invertible");
    if (t < 0)
        t += m;
    return static_cast<u64>(t);
}

inline u64 mod_of(mpz_class const & x, u64 m)
{
    return mpz_fdiv_ui(x.get_mpz_t(), m);
}

/* Deterministic Miller-Rabin for all 64-bit inputs. */
inline bool is_prime_u64(u64 n)
{
    if (n < 2)
        return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

inline u64 isqrt_u64(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n)
        --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

inline bool is_square_u64(u64 n, u64 * root = nullptr)
{
    u64 r = isqrt_u64(n);
    if (root)
        *root = r;
    return r * r == n;
}

/* Sieve of Eratosthenes. */
inline std::vector<u64> primes_up_to(u64 n)
{
    std::vector<u64> out;
    if (n < 2)
        return out;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i)
            composite[j] = true;
    }
    return out;
}

/*
 * Shared prime table, grown on demand.  Returned reference stays valid
 * until the next call that needs a larger bound, so callers copy what they
 * need or call with their final bound up front.
 */
inline std::vector<u64> prime_table(u64 bound)
{
    static std::mutex lock;
    static std::vector<u64> table;
    static u64 covered = 0;
    std::lock_guard<std::mutex> guard(lock);
    if (bound > covered) {
        covered = std::max<u64>(bound, std::max<u64>(covered * 2, 1u << 16));
        table = primes_up_to(covered);
    }
    auto end = std::upper_bound(table.begin(), table.end(), bound);
    return {table.begin(), end};
}

/* Kronecker symbol (d/n) for machine integers. */
inline int kronecker(i64 d, i64 n)
{
    if (n == 0)
        return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (d < 0)
            result = -result;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v > 0) {
        if ((d & 1) == 0)
            return 0;
        i64 d8 = ((d % 8) + 8) % 8;
        if ((v & 1) && (d8 == 3 || d8 == 5))
            result = -result;
    }
    /* Jacobi (d / n) with n odd positive */
    i64 a = ((d % n) + n) % n;
    i64 m = n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            i64 m8 = m % 8;
            if (m8 == 3 || m8 == 5)
                result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3)
            result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

/* Kronecker symbol (d/n) for a big d and a positive machine n. */
inline int kronecker(mpz_class const & d, u64 n)
{
    if (n == 0)
        return (abs(d) == 1) ? 1 : 0;
    int result = 1;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v > 0) {
        if (mpz_even_p(d.get_mpz_t()))
            return 0;
        u64 d8 = mod_of(d, 8);
        if ((v & 1) && (d8 == 3 || d8 == 5))
            result = -result;
    }
    if (n == 1)
        return result;
    u64 a = mod_of(d, n);
    return result * kronecker(static_cast<i64>(a), static_cast<i64>(n));
}

/*
 * Square root of d modulo an odd prime p (or p = 2), returning the smaller
 * of the two roots.  Tonelli-Shanks with non-residues searched over the
 * primes 2, 3, 5, ... in order, so the result is a deterministic function
 * of (d mod p, p).
 */
inline u64 sqrt_mod_p(u64 d, u64 p)
{
    d %= p;
    if (p == 2 || d == 0)
        return d;
    if (powmod(d, (p - 1) / 2, p) != 1)
        throw std::domain_error("sqrt_mod_p: not a quadratic residue");
    u64 r;
    if (p % 4 == 3) {
        r = powmod(d, (p + 1) / 4, p);
    } else {
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        u64 z = 0;
        for (u64 cand = 2; z == 0; ++cand) {
            if (is_prime_u64(cand) && powmod(cand, (p - 1) / 2, p) == p - 1)
                z = cand;
        }
        u64 c = powmod(z, q, p);
        u64 t = powmod(d, q, p);
        r = powmod(d, (q + 1) / 2, p);
        int m = s;
        while (t != 1) {
            int i = 0;
            u64 tt = t;
            while (tt != 1) {
                tt = mulmod(tt, tt, p);
                ++i;
            }
            u64 b = c;
            for (int j = 0; j < m - i - 1; ++j)
                b = mulmod(b, b, p);
            r = mulmod(r, b, p);
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            m = i;
        }
    }
    return std::min(r, p - r);
}

inline u64 sqrt_mod_p(mpz_class const & d, u64 p)
{
    return sqrt_mod_p(mod_of(d, p), p);
}

inline u64 sqrt_mod_p(i64 d, u64 p)
{
    i64 m = d % static_cast<i64>(p);
    if (m < 0)
        m += static_cast<i64>(p);
    return sqrt_mod_p(static_cast<u64>(m), p);
}

inline int floor_log2(u64 x)
{
    return x == 0 ? 0 : static_cast<int>(std::bit_width(x)) - 1;
}

inline double log2_of(mpz_class const & x)
{
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    if (mant == 0.0)
        return -INFINITY;
    return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

/* SplitMix64: derives independent sub-seeds from (seed, index). */
inline u64 mix_seed(u64 seed, u64 index)
{
    u64 z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace clgroup
