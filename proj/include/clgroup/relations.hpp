#pragma once

#include "clgroup/forms.hpp"
#include "clgroup/numtheory.hpp"
#include "clgroup/sieve.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace clgroup {

/* column -> nonzero value, ascending by column */
using SparseRow = std::vector<std::pair<uint32_t, i64>>;

struct SparseMatrix
{
    size_t ncols = 0;
    std::vector<SparseRow> rows;

    size_t nrows() const { return rows.size(); }

    std::vector<uint32_t> column_weights() const
    {
        std::vector<uint32_t> w(ncols, 0);
        for (auto const & r : rows) {
            for (auto const & t : r)
                ++w[t.first];
        }
        return w;
    }

    i64 max_abs_entry() const
    {
        i64 m = 0;
        for (auto const & r : rows) {
            for (auto const & t : r)
                m = std::max<i64>(m, t.second < 0 ? -t.second : t.second);
        }
        return m;
    }

    size_t nonzeros() const
    {
        size_t n = 0;
        for (auto const & r : rows)
            n += r.size();
        return n;
    }
};

/* sign-normalize so the first nonzero is positive */
inline void normalize_sign(SparseRow & r)
{
    if (!r.empty() && r.front().second < 0) {
        for (auto & t : r)
            t.second = -t.second;
    }
}

/*
 * Relation matrix: factor base primes own columns 0..n-1, large primes get
 * columns appended on first sight.
 */
class RelationMatrix
{
    size_t fb_size_ = 0;
    SparseMatrix m_;
    std::vector<uint32_t> weights_;
    std::vector<u64> col_prime_;
    std::unordered_map<u64, uint32_t> lp_col_;
    std::set<SparseRow> seen_;
    size_t duplicates_ = 0;

    uint32_t column_of_large_prime(u64 p)
    {
        auto it = lp_col_.find(p);
        if (it != lp_col_.end())
            return it->second;
        auto c = static_cast<uint32_t>(m_.ncols++);
        lp_col_.emplace(p, c);
        col_prime_.push_back(p);
        weights_.push_back(0);
        return c;
    }

  public:
    RelationMatrix() = default;

    explicit RelationMatrix(FactorBase const & fb) : fb_size_(fb.size())
    {
        m_.ncols = fb.size();
        weights_.assign(fb.size(), 0);
        for (auto const & q : fb.primes)
            col_prime_.push_back(q.p);
    }

    /* plain matrix without large primes, mostly for tests */
    explicit RelationMatrix(size_t ncols) : fb_size_(ncols)
    {
        m_.ncols = ncols;
        weights_.assign(ncols, 0);
        col_prime_.assign(ncols, 0);
    }

    size_t nrows() const { return m_.rows.size(); }
    size_t ncols() const { return m_.ncols; }
    size_t fb_size() const { return fb_size_; }
    size_t duplicates() const { return duplicates_; }
    SparseMatrix const & matrix() const { return m_; }
    std::vector<uint32_t> const & col_weights() const { return weights_; }
    u64 column_prime(size_t c) const { return col_prime_[c]; }

    /* false when the row is empty or a duplicate up to sign */
    bool add_row(SparseRow row)
    {
        std::sort(row.begin(), row.end());
        SparseRow merged;
        for (auto const & t : row) {
            if (t.first >= m_.ncols)
                throw std::out_of_range("add_row: column out of range");
            if (!merged.empty() && merged.back().first == t.first)
                merged.back().second += t.second;
            else
                merged.push_back(t);
        }
        std::erase_if(merged, [](auto const & t) { return t.second == 0; });
        if (merged.empty())
            return false;
        SparseRow key = merged;
        normalize_sign(key);
        if (!seen_.insert(key).second) {
            ++duplicates_;
            return false;
        }
        for (auto const & t : merged)
            ++weights_[t.first];
        m_.rows.push_back(std::move(merged));
        return true;
    }

    bool add(Relation const & rel)
    {
        SparseRow row;
        for (auto const & [i, e] : rel.exponents) {
            if (i >= fb_size_)
                throw std::out_of_range("add: factor base index out of range");
            row.emplace_back(i, e);
        }
        for (auto const & [p, s] : rel.large_primes)
            row.emplace_back(column_of_large_prime(p), s);
        return add_row(std::move(row));
    }

    /* p^2 = (p) for ramified p */
    void add_ramified_rows(FactorBase const & fb)
    {
        for (size_t i = 0; i < fb.size(); ++i) {
            if (fb[i].ramified)
                add_row({{static_cast<uint32_t>(i), 2}});
        }
    }

    /*
     * Drops rows holding a large prime nobody else has, repeatedly, then
     * renumbers the large-prime columns densely.  Returns the rows removed.
     */
    size_t prune_singletons()
    {
        size_t removed = 0;
        for (;;) {
            std::vector<bool> drop(m_.rows.size(), false);
            bool any = false;
            for (size_t r = 0; r < m_.rows.size(); ++r) {
                for (auto const & t : m_.rows[r]) {
                    if (t.first >= fb_size_ && weights_[t.first] == 1) {
                        drop[r] = true;
                        any = true;
                        break;
                    }
                }
            }
            if (!any)
                break;
            std::vector<SparseRow> kept;
            for (size_t r = 0; r < m_.rows.size(); ++r) {
                if (drop[r]) {
                    for (auto const & t : m_.rows[r])
                        --weights_[t.first];
                    SparseRow key = m_.rows[r];
                    normalize_sign(key);
                    seen_.erase(key);
                    ++removed;
                } else {
                    kept.push_back(std::move(m_.rows[r]));
                }
            }
            m_.rows = std::move(kept);
        }

        std::vector<uint32_t> remap(m_.ncols);
        size_t next = fb_size_;
        std::vector<u64> primes(col_prime_.begin(), col_prime_.begin() + static_cast<long>(fb_size_));
        std::vector<uint32_t> weights(weights_.begin(), weights_.begin() + static_cast<long>(fb_size_));
        for (size_t c = 0; c < fb_size_; ++c)
            remap[c] = static_cast<uint32_t>(c);
        lp_col_.clear();
        for (size_t c = fb_size_; c < m_.ncols; ++c) {
            if (weights_[c] == 0)
                continue;
            remap[c] = static_cast<uint32_t>(next);
            primes.push_back(col_prime_[c]);
            weights.push_back(weights_[c]);
            lp_col_.emplace(col_prime_[c], static_cast<uint32_t>(next));
            ++next;
        }
        std::set<SparseRow> seen;
        for (auto & row : m_.rows) {
            for (auto & t : row)
                t.first = remap[t.first];
            SparseRow key = row;
            normalize_sign(key);
            seen.insert(std::move(key));
        }
        seen_ = std::move(seen);
        m_.ncols = next;
        col_prime_ = std::move(primes);
        weights_ = std::move(weights);
        return removed;
    }
};

struct RankCertificate
{
    size_t rank = 0;
    u64 prime = 0;
    /* the rows that entered the basis, in scan order */
    std::vector<size_t> rows;
};

/* Rank over F_p by incremental dense elimination. */
inline RankCertificate rank_mod_p(SparseMatrix const & m, u64 p)
{
    RankCertificate cert;
    cert.prime = p;
    size_t const n = m.ncols;
    std::vector<std::vector<u64>> basis;
    std::vector<size_t> pivot_of;
    /* pivot column -> basis row, or npos */
    std::vector<size_t> owner(n, SIZE_MAX);
    std::vector<u64> v(n);
    for (size_t ri = 0; ri < m.rows.size(); ++ri) {
        auto const & row = m.rows[ri];
        if (basis.size() == n)
            break;
        std::fill(v.begin(), v.end(), 0);
        for (auto const & t : row) {
            i64 e = t.second % static_cast<i64>(p);
            v[t.first] = static_cast<u64>(e < 0 ? e + static_cast<i64>(p) : e);
        }
        size_t piv = SIZE_MAX;
        for (size_t c = 0; c < n; ++c) {
            if (v[c] == 0)
                continue;
            size_t b = owner[c];
            if (b == SIZE_MAX) {
                piv = c;
                break;
            }
            /* basis rows are normalized to 1 at their pivot */
            u64 f = v[c];
            auto const & br = basis[b];
            for (size_t k = c; k < n; ++k) {
                if (br[k])
                    v[k] = (v[k] + p - mulmod(f, br[k], p)) % p;
            }
        }
        if (piv == SIZE_MAX)
            continue;
        u64 inv = invmod(v[piv], p);
        for (size_t k = piv; k < n; ++k)
            v[k] = mulmod(v[k], inv, p);
        owner[piv] = basis.size();
        pivot_of.push_back(piv);
        cert.rows.push_back(ri);
        basis.push_back(v);
    }
    cert.rank = basis.size();
    return cert;
}

/* A random prime in [2^61, 2^62). */
inline u64 random_prime62(u64 seed)
{
    std::mt19937_64 rng(seed);
    for (;;) {
        u64 c = (rng() >> 2) | (u64(1) << 61) | 1;
        if (is_prime_u64(c))
            return c;
    }
}

/* Full column rank over Q, certified modulo up to two random primes. */
inline bool full_column_rank(SparseMatrix const & m, u64 seed = 1)
{
    if (m.nrows() < m.ncols)
        return false;
    for (u64 t = 0; t < 2; ++t) {
        if (rank_mod_p(m, random_prime62(mix_seed(seed, t))).rank == m.ncols)
            return true;
    }
    return false;
}

inline size_t default_surplus(size_t ncols)
{
    return std::max<size_t>(20, ncols / 10);
}

inline bool enough_relations(SparseMatrix const & m, size_t surplus, u64 seed = 1)
{
    if (m.nrows() < m.ncols + surplus)
        return false;
    return full_column_rank(m, seed);
}

/* Cheap necessary condition: every column is hit and there are enough rows. */
inline bool plausibly_enough(RelationMatrix const & m, size_t surplus)
{
    if (m.nrows() < m.ncols() + surplus)
        return false;
    for (uint32_t w : m.col_weights()) {
        if (w == 0)
            return false;
    }
    return true;
}

inline void write_triplets(std::ostream & os, SparseMatrix const & m)
{
    os << m.nrows() << " " << m.ncols << "\n";
    for (size_t r = 0; r < m.nrows(); ++r) {
        for (auto const & t : m.rows[r])
            os << r << " " << t.first << " " << t.second << "\n";
    }
}

inline SparseMatrix read_triplets(std::istream & in)
{
    SparseMatrix m;
    size_t nr = 0;
    if (!(in >> nr >> m.ncols))
        throw std::runtime_error("read_triplets: missing header");
    m.rows.assign(nr, {});
    size_t r, c;
    i64 v;
    while (in >> r >> c >> v) {
        if (r >= nr || c >= m.ncols)
            throw std::runtime_error("read_triplets: index out of range");
        if (v != 0)
            m.rows[r].emplace_back(static_cast<uint32_t>(c), v);
    }
    for (auto & row : m.rows)
        std::sort(row.begin(), row.end());
    return m;
}

} // namespace clgroup
