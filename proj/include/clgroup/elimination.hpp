#pragma once

#include "clgroup/numtheory.hpp"
#include "clgroup/relations.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace clgroup {

struct CostParams
{
    i64 c = 100;
    i64 q = 8;
    size_t k = 10;
    size_t w = 120;
    size_t stride = 10;
    /* rows kept above ncols when discarding */
    size_t margin = 10;
    /* only pivot along edges u -> v with entry(u) | entry(v); false uses the complete graph */
    bool unit_multipliers = true;

    void validate() const
    {
        if (c < 1 || q < 1 || w < 1 || stride < 1)
            throw std::invalid_argument("bad elimination parameters");
    }
};

struct SweepStats
{
    size_t sweep = 0;
    size_t nrows = 0;
    size_t ncols = 0;
    double avg_weight = 0;
    i64 max = 0;
    i64 min = 0;
};

struct EliminationStats
{
    std::vector<SweepStats> sweeps;
    size_t merges = 0;
    size_t retained = 0;
    size_t overflow_aborts = 0;
    size_t discarded = 0;
    /* rows equal to another row up to sign */
    size_t duplicates = 0;
};

class InsufficientSurplus : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline i64 cost_of_entry(i64 e, CostParams const & p)
{
    if (e == 0)
        return 0;
    i64 a = e < 0 ? -e : e;
    return a <= p.q ? 1 : p.c;
}

inline i64 cost(SparseRow const & r, CostParams const & p)
{
    i64 s = 0;
    for (auto const & t : r)
        s += cost_of_entry(t.second, p);
    return s;
}

namespace detail {
inline i64 entry_at(SparseRow const & r, uint32_t col)
{
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](auto const & t, uint32_t c) { return t.first < c; });
    return (it != r.end() && it->first == col) ? it->second : 0;
}

constexpr i128 entry_limit = i128(1) << 62;

/* walks m1 r1 - m2 r2, calling f(col, value) for nonzero values; false on overflow or if f says stop */
template <typename F>
bool combine(SparseRow const & r1, i64 m1, SparseRow const & r2, i64 m2, F && f)
{
    size_t i = 0, j = 0;
    while (i < r1.size() || j < r2.size()) {
        uint32_t col;
        i128 v;
        if (j == r2.size() || (i < r1.size() && r1[i].first < r2[j].first)) {
            col = r1[i].first;
            v = i128(m1) * r1[i].second;
            ++i;
        } else if (i == r1.size() || r2[j].first < r1[i].first) {
            col = r2[j].first;
            v = -i128(m2) * r2[j].second;
            ++j;
        } else {
            col = r1[i].first;
            v = i128(m1) * r1[i].second - i128(m2) * r2[j].second;
            ++i;
            ++j;
        }
        if (v == 0)
            continue;
        if (v >= entry_limit || v <= -entry_limit)
            return false;
        if (!f(col, static_cast<i64>(v)))
            return true;
    }
    return true;
}

inline void pivot_multipliers(i64 c1, i64 c2, i64 & m1, i64 & m2)
{
    i64 g = std::gcd(c1, c2);
    m1 = c2 / g;
    m2 = c1 / g;
}
} // namespace detail

/* (c2/g) r1 - (c1/g) r2 sign-normalized; empty on overflow beyond 2^62 */
inline std::optional<SparseRow> try_pivot(SparseRow const & r1, SparseRow const & r2, uint32_t col)
{
    i64 c1 = detail::entry_at(r1, col), c2 = detail::entry_at(r2, col);
    if (c1 == 0 || c2 == 0)
        throw std::invalid_argument("pivot: both rows must be nonzero at the pivot column");
    i64 m1, m2;
    detail::pivot_multipliers(c1, c2, m1, m2);
    SparseRow out;
    bool ok = detail::combine(r1, m1, r2, m2, [&](uint32_t c, i64 v) {
        out.emplace_back(c, v);
        return true;
    });
    if (!ok)
        return std::nullopt;
    normalize_sign(out);
    return out;
}

inline SparseRow pivot(SparseRow const & r1, SparseRow const & r2, uint32_t col)
{
    auto r = try_pivot(r1, r2, col);
    if (!r)
        throw std::overflow_error("pivot: entry overflow");
    return *r;
}

namespace detail {
struct EdgeCost
{
    i64 cost;
    size_t weight;
    bool operator<(EdgeCost const & o) const
    {
        return cost != o.cost ? cost < o.cost : weight < o.weight;
    }
};

/* cost of pivot(r1, r2); stops early once it exceeds `limit` (returns a value > limit) */
inline std::optional<EdgeCost> pivot_cost(SparseRow const & r1, SparseRow const & r2, uint32_t col,
                                          CostParams const & p, i64 limit)
{
    i64 c1 = entry_at(r1, col), c2 = entry_at(r2, col);
    i64 m1, m2;
    pivot_multipliers(c1, c2, m1, m2);
    EdgeCost ec{0, 0};
    bool ok = combine(r1, m1, r2, m2, [&](uint32_t, i64 v) {
        ec.cost += cost_of_entry(v, p);
        ++ec.weight;
        return ec.cost <= limit;
    });
    if (!ok)
        return std::nullopt;
    return ec;
}
} // namespace detail

/*
 * Spanning tree over the rows meeting `col`.  parent[root] = root.  With
 * unit_multipliers, edges u -> v need entry(u) | entry(v), so every replaced
 * row keeps multiplier +-1.
 */
struct MergePlan
{
    size_t root = 0;
    std::vector<size_t> parent;
    /* children before parents */
    std::vector<size_t> order;
    i64 total_cost = 0;
    bool feasible = false;
};

inline MergePlan plan_merge(std::vector<SparseRow const *> const & rows, uint32_t col, CostParams const & p)
{
    size_t const k = rows.size();
    MergePlan plan;
    std::vector<i64> ent(k);
    for (size_t i = 0; i < k; ++i)
        ent[i] = detail::entry_at(*rows[i], col);

    /* root: a +-1 row of least cost */
    size_t root = k;
    for (size_t i = 0; i < k; ++i) {
        if (ent[i] != 1 && ent[i] != -1)
            continue;
        if (root == k || cost(*rows[i], p) < cost(*rows[root], p))
            root = i;
    }
    if (root == k)
        return plan;

    constexpr i64 inf = std::numeric_limits<i64>::max() / 4;
    std::vector<bool> in_tree(k, false);
    std::vector<detail::EdgeCost> best(k, {inf, SIZE_MAX});
    std::vector<size_t> parent(k, k);
    std::vector<size_t> prim_order;
    auto relax = [&](size_t u) {
        for (size_t v = 0; v < k; ++v) {
            if (in_tree[v] || (p.unit_multipliers && ent[v] % ent[u] != 0))
                continue;
            auto ec = detail::pivot_cost(*rows[v], *rows[u], col, p, best[v].cost);
            if (!ec || ec->cost > best[v].cost)
                continue;
            if (*ec < best[v]) {
                best[v] = *ec;
                parent[v] = u;
            }
        }
    };
    in_tree[root] = true;
    parent[root] = root;
    prim_order.push_back(root);
    relax(root);
    for (size_t step = 1; step < k; ++step) {
        size_t pick = k;
        for (size_t v = 0; v < k; ++v) {
            if (in_tree[v] || parent[v] == k)
                continue;
            if (pick == k || best[v] < best[pick])
                pick = v;
        }
        if (pick == k)
            return plan;
        in_tree[pick] = true;
        plan.total_cost += best[pick].cost;
        prim_order.push_back(pick);
        relax(pick);
    }
    plan.root = root;
    plan.parent = std::move(parent);
    plan.order.assign(prim_order.rbegin(), prim_order.rend());
    plan.feasible = true;
    return plan;
}

/* Structured elimination state; columns keep their original numbering until compaction. */
class Eliminator
{
    CostParams params_;
    size_t ncols_;
    std::vector<SparseRow> rows_;
    std::vector<bool> alive_;
    std::vector<bool> col_removed_;
    std::vector<uint32_t> weight_;
    std::vector<std::vector<uint32_t>> col_rows_;
    size_t live_rows_ = 0;
    size_t live_cols_ = 0;
    EliminationStats stats_;

    void attach(uint32_t r)
    {
        for (auto const & t : rows_[r]) {
            ++weight_[t.first];
            col_rows_[t.first].push_back(r);
        }
    }

    void detach(uint32_t r)
    {
        for (auto const & t : rows_[r])
            --weight_[t.first];
    }

    void kill_row(uint32_t r)
    {
        detach(r);
        rows_[r].clear();
        alive_[r] = false;
        --live_rows_;
    }

    std::vector<uint32_t> rows_of(uint32_t col)
    {
        auto & lst = col_rows_[col];
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
        std::erase_if(lst, [&](uint32_t r) { return !alive_[r] || detail::entry_at(rows_[r], col) == 0; });
        return lst;
    }

  public:
    Eliminator(SparseMatrix const & m, CostParams params) : params_(params), ncols_(m.ncols)
    {
        params_.validate();
        rows_ = m.rows;
        alive_.assign(rows_.size(), true);
        col_removed_.assign(ncols_, false);
        weight_.assign(ncols_, 0);
        col_rows_.assign(ncols_, {});
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (rows_[r].empty()) {
                alive_[r] = false;
                continue;
            }
            ++live_rows_;
            attach(static_cast<uint32_t>(r));
        }
        live_cols_ = ncols_;
    }

    size_t nrows() const { return live_rows_; }
    size_t ncols() const { return live_cols_; }
    EliminationStats const & stats() const { return stats_; }
    uint32_t weight(uint32_t col) const { return weight_[col]; }
    bool column_removed(uint32_t col) const { return col_removed_[col]; }

    enum class MergeResult { merged, retained, overflow, empty };

    /*
     * Eliminates `col` along the spanning tree and removes the root row
     * with the column.  Retained when no row has a unit entry there.
     */
    MergeResult merge_column(uint32_t col)
    {
        if (col_removed_[col])
            return MergeResult::empty;
        std::vector<uint32_t> ids = rows_of(col);
        if (ids.empty())
            return MergeResult::empty;
        std::vector<SparseRow const *> ptrs;
        for (uint32_t r : ids)
            ptrs.push_back(&rows_[r]);
        MergePlan plan = plan_merge(ptrs, col, params_);
        if (!plan.feasible)
            return MergeResult::retained;

        std::vector<SparseRow> fresh(ids.size());
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i == plan.root)
                continue;
            auto r = try_pivot(rows_[ids[i]], rows_[ids[plan.parent[i]]], col);
            if (!r)
                return MergeResult::overflow;
            fresh[i] = std::move(*r);
        }
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i == plan.root)
                continue;
            uint32_t r = ids[i];
            detach(r);
            rows_[r] = std::move(fresh[i]);
            if (rows_[r].empty()) {
                alive_[r] = false;
                --live_rows_;
            } else {
                attach(r);
            }
        }
        kill_row(ids[plan.root]);
        col_removed_[col] = true;
        --live_cols_;
        col_rows_[col].clear();
        col_rows_[col].shrink_to_fit();
        ++stats_.merges;
        return MergeResult::merged;
    }

    SweepStats snapshot(size_t sweep) const
    {
        SweepStats s;
        s.sweep = sweep;
        s.nrows = live_rows_;
        s.ncols = live_cols_;
        size_t nnz = 0;
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r])
                continue;
            nnz += rows_[r].size();
            for (auto const & t : rows_[r]) {
                s.max = std::max(s.max, t.second);
                s.min = std::min(s.min, t.second);
            }
        }
        s.avg_weight = live_rows_ ? static_cast<double>(nnz) / static_cast<double>(live_rows_) : 0.0;
        return s;
    }

    /* Kills rows equal up to sign to an earlier live row; the lattice is unchanged. */
    size_t drop_duplicates()
    {
        std::set<SparseRow> seen;
        size_t dropped = 0;
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r])
                continue;
            SparseRow key = rows_[r];
            if (key.front().second < 0) {
                for (auto & t : key)
                    t.second = -t.second;
            }
            if (!seen.insert(std::move(key)).second) {
                kill_row(static_cast<uint32_t>(r));
                ++dropped;
            }
        }
        stats_.duplicates += dropped;
        return dropped;
    }

    /* Drops up to K rows with the largest entries, keeping a margin above ncols. */
    size_t discard_rows()
    {
        std::vector<std::pair<i64, uint32_t>> byentry;
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r])
                continue;
            i64 m = 0;
            for (auto const & t : rows_[r])
                m = std::max<i64>(m, t.second < 0 ? -t.second : t.second);
            byentry.emplace_back(m, static_cast<uint32_t>(r));
        }
        std::sort(byentry.begin(), byentry.end(), [](auto const & x, auto const & y) {
            return x.first != y.first ? x.first > y.first : x.second < y.second;
        });
        size_t dropped = 0;
        for (auto const & [m, r] : byentry) {
            if (dropped >= params_.k || live_rows_ < live_cols_ + params_.margin + 1)
                break;
            bool sole = false;
            for (auto const & t : rows_[r]) {
                if (weight_[t.first] == 1) {
                    sole = true;
                    break;
                }
            }
            if (sole)
                continue;
            kill_row(r);
            ++dropped;
        }
        stats_.discarded += dropped;
        return dropped;
    }

    /* Merges every column of weight <= limit, smallest first, until nothing changes. */
    void sweep(size_t limit)
    {
        std::vector<bool> skip(ncols_, false);
        for (;;) {
            std::vector<std::pair<uint32_t, uint32_t>> todo;
            for (uint32_t c = 0; c < ncols_; ++c) {
                if (!col_removed_[c] && !skip[c] && weight_[c] >= 1 && weight_[c] <= limit)
                    todo.emplace_back(weight_[c], c);
            }
            if (todo.empty())
                return;
            std::sort(todo.begin(), todo.end());
            bool progress = false;
            for (auto const & [w0, c] : todo) {
                if (col_removed_[c] || weight_[c] == 0 || weight_[c] > limit)
                    continue;
                if (live_rows_ < live_cols_ + 1)
                    return;
                switch (merge_column(c)) {
                case MergeResult::merged: progress = true; break;
                case MergeResult::retained:
                    ++stats_.retained;
                    skip[c] = true;
                    break;
                case MergeResult::overflow:
                    ++stats_.overflow_aborts;
                    skip[c] = true;
                    break;
                default: break;
                }
            }
            if (!progress)
                return;
        }
    }

    /* Live rows over the surviving columns, renumbered; `columns` maps back. */
    SparseMatrix compact(std::vector<uint32_t> * columns = nullptr) const
    {
        std::vector<uint32_t> remap(ncols_, UINT32_MAX);
        std::vector<uint32_t> cols;
        for (uint32_t c = 0; c < ncols_; ++c) {
            if (!col_removed_[c]) {
                remap[c] = static_cast<uint32_t>(cols.size());
                cols.push_back(c);
            }
        }
        SparseMatrix m;
        m.ncols = cols.size();
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r])
                continue;
            SparseRow row;
            for (auto const & t : rows_[r]) {
                if (remap[t.first] == UINT32_MAX)
                    throw std::logic_error("compact: entry in a removed column");
                row.emplace_back(remap[t.first], t.second);
            }
            m.rows.push_back(std::move(row));
        }
        if (columns)
            *columns = std::move(cols);
        return m;
    }

    /* The full schedule: sweeps at limits stride, 2 stride, ..., w with discards after each. */
    void run()
    {
        stats_.sweeps.push_back(snapshot(0));
        size_t levels = std::max<size_t>(1, params_.w / params_.stride);
        for (size_t i = 1; i <= levels; ++i) {
            sweep(std::min(params_.w, params_.stride * i));
            drop_duplicates();
            if (params_.k > 0)
                discard_rows();
            stats_.sweeps.push_back(snapshot(i));
        }
        if (live_rows_ < live_cols_)
            throw InsufficientSurplus("elimination: fewer rows than columns");
    }
};

struct EliminationResult
{
    SparseMatrix matrix;
    /* column of the input for each output column */
    std::vector<uint32_t> columns;
    EliminationStats stats;
};

inline EliminationResult eliminate(SparseMatrix const & m, CostParams const & params)
{
    Eliminator e(m, params);
    e.run();
    EliminationResult res;
    res.matrix = e.compact(&res.columns);
    res.stats = e.stats();
    return res;
}

inline void print_stats_table(std::ostream & os, EliminationStats const & st)
{
    os << "sweep  rows  cols  avg-weight  max  min\n";
    for (auto const & s : st.sweeps) {
        os << s.sweep << "  " << s.nrows << "  " << s.ncols << "  " << s.avg_weight << "  " << s.max << "  "
           << s.min << "\n";
    }
}

} // namespace clgroup
