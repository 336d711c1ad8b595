#pragma once

#include "clgroup/numtheory.hpp"
#include "clgroup/relations.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace clgroup {

/* Dense integer matrix, row-major. */
class ZMatrix
{
    size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> d_;

  public:
    ZMatrix() = default;
    ZMatrix(size_t r, size_t c) : rows_(r), cols_(c), d_(r * c) {}

    static ZMatrix from_rows(std::vector<std::vector<long>> const & v)
    {
        size_t c = v.empty() ? 0 : v[0].size();
        ZMatrix m(v.size(), c);
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i].size() != c)
                throw std::invalid_argument("ZMatrix: ragged rows");
            for (size_t j = 0; j < c; ++j)
                m(i, j) = v[i][j];
        }
        return m;
    }

    static ZMatrix from_sparse(SparseMatrix const & s)
    {
        ZMatrix m(s.nrows(), s.ncols);
        for (size_t i = 0; i < s.nrows(); ++i) {
            for (auto const & t : s.rows[i])
                m(i, t.first) = static_cast<long>(t.second);
        }
        return m;
    }

    static ZMatrix identity(size_t n)
    {
        ZMatrix m(n, n);
        for (size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    mpz_class & operator()(size_t i, size_t j) { return d_[i * cols_ + j]; }
    mpz_class const & operator()(size_t i, size_t j) const { return d_[i * cols_ + j]; }

    ZMatrix transpose() const
    {
        ZMatrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        }
        return t;
    }

    /* rows listed in `idx` */
    ZMatrix select_rows(std::vector<size_t> const & idx) const
    {
        ZMatrix m(idx.size(), cols_);
        for (size_t i = 0; i < idx.size(); ++i) {
            for (size_t j = 0; j < cols_; ++j)
                m(i, j) = (*this)(idx[i], j);
        }
        return m;
    }

    /* leading columns [0, c) */
    ZMatrix left_columns(size_t c) const
    {
        ZMatrix m(rows_, c);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < c; ++j)
                m(i, j) = (*this)(i, j);
        }
        return m;
    }

    /* square block [from, n) x [from, n) */
    ZMatrix trailing_block(size_t from) const
    {
        size_t n = rows_ - from;
        ZMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j)
                m(i, j) = (*this)(from + i, from + j);
        }
        return m;
    }

    bool operator==(ZMatrix const & o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
    }

    friend std::ostream & operator<<(std::ostream & os, ZMatrix const & m)
    {
        for (size_t i = 0; i < m.rows_; ++i) {
            os << "[";
            for (size_t j = 0; j < m.cols_; ++j)
                os << (j ? " " : "") << m(i, j);
            os << "]\n";
        }
        return os;
    }
};

class RankDeficient : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/* row_a <- u a + v b, row_b <- s b - t a on columns [from, n) */
/*
 * Coefficients for [u v; -t s] taking (a, b) to (g, 0).  When a divides b this
 * is a plain subtraction, so a pivot that already divides is never moved.
 */
inline void pivot_coeffs(mpz_class const & a, mpz_class const & b, mpz_class & g, mpz_class & u, mpz_class & v,
                         mpz_class & s, mpz_class & t)
{
    if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        g = a;
        u = 1;
        v = 0;
        s = 1;
        t = b / a;
        return;
    }
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    s = a / g;
    t = b / g;
}

inline void combine_rows(ZMatrix & m, size_t a, size_t b, mpz_class const & u, mpz_class const & v,
                         mpz_class const & s, mpz_class const & t, size_t from, mpz_class const * mod)
{
    mpz_class x, y;
    for (size_t j = from; j < m.cols(); ++j) {
        mpz_class & ea = m(a, j);
        mpz_class & eb = m(b, j);
        if (ea == 0 && eb == 0)
            continue;
        x = u * ea + v * eb;
        y = s * eb - t * ea;
        if (mod) {
            mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod->get_mpz_t());
            mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), mod->get_mpz_t());
        }
        swap(ea, x);
        swap(eb, y);
    }
}

/* upper-triangular H: make off-diagonal entries above each pivot lie in [0, H_jj) */
inline void reduce_above(ZMatrix & h)
{
    size_t n = h.cols();
    mpz_class q;
    for (size_t j = 0; j < n; ++j) {
        mpz_class const piv = h(j, j);
        for (size_t i = 0; i < j; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), piv.get_mpz_t());
            if (q == 0)
                continue;
            for (size_t k = j; k < n; ++k)
                h(i, k) -= q * h(j, k);
        }
    }
}

} // namespace detail

/*
 * Row-style Hermite normal form for a matrix of full column rank: the n x n
 * upper triangular basis of the row lattice with positive diagonal and
 * 0 <= H_ij < H_jj above the diagonal.
 */
inline ZMatrix hnf_exact(ZMatrix a)
{
    size_t const m = a.rows(), n = a.cols();
    ZMatrix h(n, n);
    size_t top = 0;
    mpz_class g, u, v, s, t;
    for (size_t j = 0; j < n; ++j) {
        size_t piv = m;
        for (size_t i = top; i < m; ++i) {
            if (a(i, j) != 0) {
                piv = i;
                break;
            }
        }
        if (piv == m)
            throw RankDeficient("hnf: matrix does not have full column rank");
        for (size_t k = 0; k < n; ++k)
            swap(a(top, k), a(piv, k));
        for (size_t i = top + 1; i < m; ++i) {
            if (a(i, j) == 0)
                continue;
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a(top, j).get_mpz_t(), a(i, j).get_mpz_t());
            s = a(top, j) / g;
            t = a(i, j) / g;
            detail::combine_rows(a, top, i, u, v, s, t, j, nullptr);
        }
        if (a(top, j) < 0) {
            for (size_t k = j; k < n; ++k)
                a(top, k) = -a(top, k);
        }
        for (size_t k = 0; k < n; ++k)
            h(j, k) = a(top, k);
        /* keep the working rows small */
        for (size_t i = 0; i < j; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(j, j).get_mpz_t());
            if (q != 0) {
                for (size_t k = j; k < n; ++k)
                    h(i, k) -= q * h(j, k);
            }
        }
        ++top;
    }
    detail::reduce_above(h);
    return h;
}

namespace detail {

inline i64 mod_word(i128 x, i64 r)
{
    i128 y = x % r;
    return static_cast<i64>(y < 0 ? y + r : y);
}

/* gcd of a, b >= 0 with a x + b y = g */
inline i64 gcdext_word(i64 a, i64 b, i64 & x, i64 & y)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
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
    x = x0;
    y = y0;
    return a;
}

/* hnf_mod with D below 2^62: entries stay in [0, D), products fit in 128 bits */
inline ZMatrix hnf_mod_word(ZMatrix const & a0, i64 d)
{
    size_t const m = a0.rows(), n = a0.cols();
    std::vector<i64> a(m * n);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j)
            a[i * n + j] = static_cast<i64>(mod_of(a0(i, j), static_cast<u64>(d)));
    }
    ZMatrix h(n, n);
    i64 r = d;
    std::vector<size_t> live(m);
    std::iota(live.begin(), live.end(), 0);
    for (size_t j = 0; j < n; ++j) {
        size_t piv = SIZE_MAX;
        size_t piv_pos = 0;
        for (size_t pos = 0; pos < live.size(); ++pos) {
            size_t i = live[pos];
            if (a[i * n + j] == 0)
                continue;
            if (piv == SIZE_MAX) {
                piv = i;
                piv_pos = pos;
                continue;
            }
            i64 * rp = &a[piv * n];
            i64 * ri = &a[i * n];
            if (ri[j] % rp[j] == 0) {
                /* pivot divides: plain subtraction */
                i64 q = ri[j] / rp[j];
                for (size_t k = j; k < n; ++k) {
                    if (rp[k] != 0)
                        ri[k] = mod_word(static_cast<i128>(ri[k]) - static_cast<i128>(q) * rp[k], r);
                }
                continue;
            }
            i64 u, v;
            i64 g = gcdext_word(rp[j], ri[j], u, v);
            i64 s = rp[j] / g, t = ri[j] / g;
            for (size_t k = j; k < n; ++k) {
                i64 ea = rp[k], eb = ri[k];
                if (ea == 0 && eb == 0)
                    continue;
                rp[k] = mod_word(static_cast<i128>(u) * ea + static_cast<i128>(v) * eb, r);
                ri[k] = mod_word(static_cast<i128>(s) * eb - static_cast<i128>(t) * ea, r);
            }
        }
        i64 gj = piv == SIZE_MAX ? 0 : a[piv * n + j];
        i64 u, v;
        i64 g = gcdext_word(gj, r, u, v);
        if (piv != SIZE_MAX) {
            for (size_t k = j; k < n; ++k)
                h(j, k) = static_cast<long>(mod_word(static_cast<i128>(u) * a[piv * n + k], r));
            live.erase(live.begin() + static_cast<long>(piv_pos));
        }
        h(j, j) = static_cast<long>(g);
        r /= g;
        std::vector<size_t> keep;
        for (size_t i : live) {
            bool nz = false;
            i64 * ri = &a[i * n];
            for (size_t k = j + 1; k < n; ++k) {
                ri[k] %= r;
                nz |= ri[k] != 0;
            }
            if (nz)
                keep.push_back(i);
        }
        live = std::move(keep);
    }
    reduce_above(h);
    return h;
}

} // namespace detail

/*
 * Hermite normal form of the row lattice L of `a`, given a positive multiple D
 * of det(L), with all arithmetic reduced modulo D / (diagonal so far).
 */
inline ZMatrix hnf_mod(ZMatrix a, mpz_class const & d)
{
    if (d <= 0)
        throw std::invalid_argument("hnf_mod: modulus must be positive");
    if (d < (mpz_class(1) << 62))
        return detail::hnf_mod_word(a, static_cast<i64>(d.get_si()));
    size_t const m = a.rows(), n = a.cols();
    ZMatrix h(n, n);
    mpz_class r = d;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j)
            mpz_fdiv_r(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), r.get_mpz_t());
    }
    std::vector<size_t> live(m);
    std::iota(live.begin(), live.end(), 0);
    mpz_class g, u, v, s, t;
    for (size_t j = 0; j < n; ++j) {
        /* collect the column gcd into one row */
        size_t piv = SIZE_MAX;
        size_t piv_pos = 0;
        for (size_t pos = 0; pos < live.size(); ++pos) {
            size_t i = live[pos];
            if (a(i, j) == 0)
                continue;
            if (piv == SIZE_MAX) {
                piv = i;
                piv_pos = pos;
                continue;
            }
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a(piv, j).get_mpz_t(), a(i, j).get_mpz_t());
            s = a(piv, j) / g;
            t = a(i, j) / g;
            detail::combine_rows(a, piv, i, u, v, s, t, j, &r);
        }
        mpz_class gj = piv == SIZE_MAX ? mpz_class(0) : a(piv, j);
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), gj.get_mpz_t(), r.get_mpz_t());
        if (piv != SIZE_MAX) {
            for (size_t k = j; k < n; ++k) {
                h(j, k) = u * a(piv, k);
                mpz_fdiv_r(h(j, k).get_mpz_t(), h(j, k).get_mpz_t(), r.get_mpz_t());
            }
            live.erase(live.begin() + static_cast<long>(piv_pos));
        }
        h(j, j) = g;
        r /= g;
        /* drop rows that vanished modulo the new r */
        std::vector<size_t> keep;
        for (size_t i : live) {
            bool nz = false;
            for (size_t k = j + 1; k < n; ++k) {
                mpz_fdiv_r(a(i, k).get_mpz_t(), a(i, k).get_mpz_t(), r.get_mpz_t());
                if (a(i, k) != 0)
                    nz = true;
            }
            if (nz)
                keep.push_back(i);
        }
        live = std::move(keep);
    }
    detail::reduce_above(h);
    return h;
}

inline mpz_class hnf_determinant(ZMatrix const & h)
{
    mpz_class d = 1;
    for (size_t i = 0; i < h.rows(); ++i)
        d *= h(i, i);
    return d;
}

namespace detail {

/* 31-bit primes keep products inside 64 bits */
inline std::vector<u64> small_primes_desc(size_t count, u64 start = (u64(1) << 31) - 1)
{
    std::vector<u64> out;
    for (u64 c = start | 1; out.size() < count && c > 3; c -= 2) {
        if (is_prime_u64(c))
            out.push_back(c);
    }
    return out;
}

inline u64 det_mod_p(ZMatrix const & a, u64 p)
{
    size_t n = a.rows();
    std::vector<u64> m(n * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            m[i * n + j] = mod_of(a(i, j), p);
    }
    u64 det = 1;
    for (size_t j = 0; j < n; ++j) {
        size_t piv = n;
        for (size_t i = j; i < n; ++i) {
            if (m[i * n + j]) {
                piv = i;
                break;
            }
        }
        if (piv == n)
            return 0;
        if (piv != j) {
            for (size_t k = j; k < n; ++k)
                std::swap(m[j * n + k], m[piv * n + k]);
            det = (p - det) % p;
        }
        u64 pv = m[j * n + j];
        det = det * pv % p;
        u64 inv = invmod(pv, p);
        for (size_t i = j + 1; i < n; ++i) {
            u64 f = m[i * n + j];
            if (!f)
                continue;
            f = f * inv % p;
            u64 * ri = &m[i * n];
            u64 const * rj = &m[j * n];
            for (size_t k = j; k < n; ++k)
                ri[k] = (ri[k] + (p - f) * rj[k]) % p;
        }
    }
    return det;
}

/* log2 of the Hadamard bound */
inline double hadamard_log2(ZMatrix const & a)
{
    double s = 0;
    for (size_t i = 0; i < a.rows(); ++i) {
        mpz_class sq = 0;
        for (size_t j = 0; j < a.cols(); ++j)
            sq += a(i, j) * a(i, j);
        if (sq == 0)
            return -INFINITY;
        s += 0.5 * log2_of(sq);
    }
    return s;
}

} // namespace detail

/* Exact determinant of a square matrix via CRT over word-size primes. */
inline mpz_class determinant(ZMatrix const & a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant: matrix is not square");
    if (a.rows() == 0)
        return 1;
    double bits = detail::hadamard_log2(a);
    if (bits == -INFINITY)
        return 0;
    size_t need = static_cast<size_t>(std::ceil((bits + 2) / 30.0)) + 1;
    auto primes = detail::small_primes_desc(need);
    mpz_class res = 0, mod = 1;
    for (u64 p : primes) {
        u64 r = detail::det_mod_p(a, p);
        /* res + mod * t = r (mod p) */
        u64 rm = mod_of(res, p);
        u64 mm = mod_of(mod, p);
        u64 t = (r + p - rm) % p * invmod(mm, p) % p;
        res += mod * static_cast<unsigned long>(t);
        mod *= static_cast<unsigned long>(p);
    }
    mpz_class half = mod / 2;
    if (res > half)
        res -= mod;
    return res;
}

/*
 * Indices of n rows linearly independent modulo a prime, scanning the rows
 * in the given order.  Independence mod p implies independence over Q.
 */
inline std::vector<size_t> independent_rows(ZMatrix const & a, std::vector<size_t> const & order, u64 p)
{
    size_t const n = a.cols();
    std::vector<std::vector<u64>> basis;
    std::vector<size_t> owner(n, SIZE_MAX);
    std::vector<size_t> chosen;
    std::vector<u64> v(n);
    for (size_t idx : order) {
        if (chosen.size() == n)
            break;
        for (size_t j = 0; j < n; ++j)
            v[j] = mod_of(a(idx, j), p);
        size_t piv = SIZE_MAX;
        for (size_t c = 0; c < n; ++c) {
            if (!v[c])
                continue;
            if (owner[c] == SIZE_MAX) {
                piv = c;
                break;
            }
            u64 f = v[c];
            auto const & br = basis[owner[c]];
            for (size_t k = c; k < n; ++k) {
                if (br[k])
                    v[k] = (v[k] + (p - f) * br[k]) % p;
            }
        }
        if (piv == SIZE_MAX)
            continue;
        u64 inv = invmod(v[piv], p);
        for (size_t k = piv; k < n; ++k)
            v[k] = v[k] * inv % p;
        owner[piv] = basis.size();
        basis.push_back(v);
        chosen.push_back(idx);
    }
    return chosen;
}

/*
 * A positive multiple of the row lattice determinant: the gcd of the
 * determinants of `tries` nonsingular n x n row subsets.
 */
inline mpz_class determinant_multiple(ZMatrix const & a, unsigned tries = 3, u64 seed = 1)
{
    size_t const m = a.rows(), n = a.cols();
    if (m < n)
        throw RankDeficient("determinant_multiple: fewer rows than columns");
    if (n == 0)
        return 1;
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    auto primes = detail::small_primes_desc(tries + 1, (u64(1) << 30) + 1);
    mpz_class d = 0;
    for (unsigned t = 0; t < tries; ++t) {
        if (t > 0)
            std::shuffle(order.begin(), order.end(), rng);
        auto rows = independent_rows(a, order, primes[t]);
        if (rows.size() < n) {
            if (t == 0)
                throw RankDeficient("determinant_multiple: matrix does not have full column rank");
            continue;
        }
        std::sort(rows.begin(), rows.end());
        mpz_class det = abs(determinant(a.select_rows(rows)));
        d = gcd(d, det);
        if (d == 1)
            break;
    }
    if (d == 0)
        throw RankDeficient("determinant_multiple: no nonsingular subset found");
    return d;
}

/* HNF of the row lattice via a determinant multiple. */
inline ZMatrix hnf(ZMatrix const & a)
{
    return hnf_mod(a, determinant_multiple(a));
}

/* Elementary divisors d_1 | d_2 | ... with the trivial ones omitted. */
struct GroupStructure
{
    std::vector<mpz_class> divisors;

    mpz_class order() const
    {
        mpz_class h = 1;
        for (auto const & d : divisors)
            h *= d;
        return h;
    }

    bool operator==(GroupStructure const & o) const { return divisors == o.divisors; }

    std::string to_string() const
    {
        if (divisors.empty())
            return "1";
        std::string s;
        for (size_t i = 0; i < divisors.size(); ++i) {
            if (i)
                s += " x ";
            s += "C(" + divisors[i].get_str() + ")";
        }
        return s;
    }

    friend std::ostream & operator<<(std::ostream & os, GroupStructure const & g)
    {
        return os << g.to_string();
    }
};

/*
 * Smith normal form of a nonsingular square matrix.  Works modulo |det|,
 * which leaves the quotient group unchanged.
 */
inline GroupStructure snf(ZMatrix e)
{
    if (e.rows() != e.cols())
        throw std::invalid_argument("snf: matrix is not square");
    size_t const n = e.rows();
    mpz_class det = abs(determinant(e));
    if (det == 0)
        throw std::invalid_argument("snf: singular matrix");
    mpz_class mod = det;
    auto reduce_all = [&](size_t from) {
        for (size_t i = from; i < n; ++i) {
            for (size_t j = from; j < n; ++j)
                mpz_fdiv_r(e(i, j).get_mpz_t(), e(i, j).get_mpz_t(), mod.get_mpz_t());
        }
    };
    reduce_all(0);
    std::vector<mpz_class> diag;
    mpz_class g, u, v, s, t;
    for (size_t k = 0; k < n; ++k) {
        for (;;) {
            /* smallest nonzero entry of the block becomes the pivot */
            size_t pi = n, pj = n;
            for (size_t i = k; i < n; ++i) {
                for (size_t j = k; j < n; ++j) {
                    if (e(i, j) != 0 && (pi == n || abs(e(i, j)) < abs(e(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi == n) {
                /* block vanishes modulo mod: remaining factors come from mod */
                e(k, k) = mod;
                break;
            }
            for (size_t j = 0; j < n; ++j)
                swap(e(k, j), e(pi, j));
            for (size_t i = 0; i < n; ++i)
                swap(e(i, k), e(i, pj));
            bool clean = true;
            for (size_t i = k + 1; i < n; ++i) {
                if (e(i, k) == 0)
                    continue;
                detail::pivot_coeffs(e(k, k), e(i, k), g, u, v, s, t);
                detail::combine_rows(e, k, i, u, v, s, t, k, &mod);
                clean = false;
            }
            /* same combination on columns */
            for (size_t j = k + 1; j < n; ++j) {
                if (e(k, j) == 0)
                    continue;
                detail::pivot_coeffs(e(k, k), e(k, j), g, u, v, s, t);
                mpz_class x, y;
                for (size_t i = k; i < n; ++i) {
                    x = u * e(i, k) + v * e(i, j);
                    y = s * e(i, j) - t * e(i, k);
                    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
                    mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), mod.get_mpz_t());
                    e(i, k) = x;
                    e(i, j) = y;
                }
                clean = false;
            }
            if (!clean)
                continue;
            if (e(k, k) == 0)
                continue;
            /* divisibility: fold a row whose entries the pivot does not divide */
            size_t bad = n;
            for (size_t i = k + 1; i < n && bad == n; ++i) {
                for (size_t j = k + 1; j < n; ++j) {
                    if (!mpz_divisible_p(e(i, j).get_mpz_t(), e(k, k).get_mpz_t())) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == n)
                break;
            for (size_t j = k; j < n; ++j) {
                e(k, j) += e(bad, j);
                mpz_fdiv_r(e(k, j).get_mpz_t(), e(k, j).get_mpz_t(), mod.get_mpz_t());
            }
        }
        mpz_class dk = gcd(e(k, k), mod);
        diag.push_back(dk);
        /* the rest of the group has order |det| / (d_1 ... d_k) */
        mod /= dk;
        if (mod == 1) {
            for (size_t r = k + 1; r < n; ++r)
                diag.emplace_back(1);
            break;
        }
        reduce_all(k + 1);
    }
    GroupStructure gs;
    for (auto & d : diag) {
        if (d != 1)
            gs.divisors.push_back(d);
    }
    std::sort(gs.divisors.begin(), gs.divisors.end());
    return gs;
}

} // namespace clgroup
