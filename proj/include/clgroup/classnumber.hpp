#pragma once

#include "clgroup/elimination.hpp"
#include "clgroup/forms.hpp"
#include "clgroup/hnf.hpp"
#include "clgroup/numtheory.hpp"
#include "clgroup/relations.hpp"
#include "clgroup/sieve.hpp"

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clgroup {

struct HStarBound
{
    mpz_class hstar;
    u64 truncation = 0;
    /* the truncated analytic estimate of h */
    double approx = 0;
    /* h is expected within a factor sqrt(2) of approx */
    double error_margin = std::numbers::sqrt2;

    bool contains(mpz_class const & h) const { return h >= hstar && h < 2 * hstar; }
};

inline u64 default_hstar_truncation(Discriminant const & disc)
{
    double l = log2_of(disc.value()) * std::numbers::ln2;
    return std::max<u64>(u64(1) << 20, static_cast<u64>(std::ceil(l * l)));
}

/*
 * h ~ w sqrt|D| / (2 pi) prod_{p <= P} (1 - (D/p)/p)^-1, and hstar is that
 * estimate divided by sqrt(2), rounded up.
 */
inline HStarBound hstar(Discriminant const & disc, std::optional<u64> truncation = std::nullopt)
{
    u64 bound = truncation ? *truncation : default_hstar_truncation(disc);
    if (bound < 100)
        throw std::invalid_argument("hstar: truncation bound must be at least 100");
    long double log_l = 0;
    for (u64 p : primes_up_to(bound)) {
        int chi = kronecker(disc.value(), p);
        if (chi != 0)
            log_l -= std::log1p(-static_cast<long double>(chi) / static_cast<long double>(p));
    }
    long double w = 2;
    if (disc.value() == -3)
        w = 6;
    else if (disc.value() == -4)
        w = 4;
    long double log_root = 0.5L * static_cast<long double>(log2_of(disc.value())) * std::numbers::ln2_v<long double>;
    long double log_h = std::log(w) + log_root - std::log(2.0L * std::numbers::pi_v<long double>) + log_l;
    long double approx = std::exp(log_h);
    long double scaled = approx / std::numbers::sqrt2_v<long double>;

    HStarBound hs;
    hs.truncation = bound;
    hs.approx = static_cast<double>(approx);
    if (scaled < 1e18L) {
        hs.hstar = static_cast<unsigned long>(std::ceil(scaled));
    } else {
        /* beyond 64 bits: keep the leading digits of the long double */
        int e2;
        long double mant = std::frexp(scaled, &e2);
        mpz_class m(static_cast<unsigned long>(std::ldexp(mant, 63)));
        if (e2 >= 63)
            mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e2 - 63));
        else
            mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(63 - e2));
        hs.hstar = m + 1;
    }
    if (hs.hstar < 1)
        hs.hstar = 1;
    return hs;
}

class WindowViolation : public std::runtime_error
{
  public:
    mpz_class h;
    WindowViolation(std::string const & what, mpz_class h_) : std::runtime_error(what), h(std::move(h_)) {}
};

/*
 * Least h_i > 0 with h_i e_i in the column lattice of A_i (an i x m matrix),
 * read off the HNF of A_i^T.  `modulus`, when given, must be a multiple of
 * the lattice determinant.
 */
inline mpz_class minimal_denominator(ZMatrix const & a_i, std::optional<mpz_class> const & modulus = std::nullopt)
{
    size_t i = a_i.rows();
    if (i == 0)
        throw std::invalid_argument("minimal_denominator: empty system");
    ZMatrix t = a_i.transpose();
    ZMatrix h = modulus ? hnf_mod(t, *modulus) : hnf(t);
    return h(i - 1, i - 1);
}

enum class ClassNumberMode { incremental, independent };

struct ClassNumberResult
{
    mpz_class h;
    /* h_n, h_{n-1}, ... as consumed by the loop */
    std::vector<mpz_class> h_i;
    /* product of every HNF diagonal; independent mode fills it in certified_class_number */
    mpz_class determinant;
    mpz_class modulus;
    ZMatrix hnf;
};

/*
 * h <- 1; for i = n .. 1: h <- h h_i until h >= hstar.  Throws WindowViolation
 * unless hstar <= h < 2 hstar.
 */
inline ClassNumberResult class_number(ZMatrix const & a, mpz_class const & hs,
                                      ClassNumberMode mode = ClassNumberMode::incremental)
{
    size_t const n = a.cols();
    ClassNumberResult res;
    res.h = 1;
    if (n == 0) {
        if (!(res.h >= hs && res.h < 2 * hs))
            throw WindowViolation("class number outside [hstar, 2 hstar)", res.h);
        res.determinant = 1;
        return res;
    }
    res.modulus = determinant_multiple(a);
    if (mode == ClassNumberMode::incremental) {
        res.hnf = hnf_mod(a, res.modulus);
        res.determinant = hnf_determinant(res.hnf);
    }
    for (size_t i = n; i-- > 0 && res.h < hs;) {
        mpz_class hi;
        if (mode == ClassNumberMode::incremental)
            hi = res.hnf(i, i);
        else
            hi = minimal_denominator(a.left_columns(i + 1).transpose(), res.modulus);
        res.h_i.push_back(hi);
        res.h *= hi;
    }
    if (res.h < hs || res.h >= 2 * hs)
        throw WindowViolation("class number " + res.h.get_str() + " outside [" + hs.get_str() + ", " +
                                  mpz_class(2 * hs).get_str() + ")",
                              res.h);
    return res;
}

/*
 * class_number plus the check that the window product is the whole lattice
 * determinant, so an index-2 sublattice anywhere in A is rejected.
 */
inline ClassNumberResult certified_class_number(ZMatrix const & a, mpz_class const & hs,
                                                ClassNumberMode mode = ClassNumberMode::incremental)
{
    ClassNumberResult cn = class_number(a, hs, mode);
    if (a.cols() == 0)
        return cn;
    if (mode == ClassNumberMode::independent)
        cn.determinant = hnf_determinant(hnf_mod(a, cn.modulus));
    if (cn.determinant != cn.h)
        throw WindowViolation("lattice determinant " + cn.determinant.get_str() + " differs from h " +
                                  cn.h.get_str(),
                              cn.h);
    return cn;
}

/* Trailing block of an HNF starting at its first diagonal entry > 1. */
inline ZMatrix essential_block(ZMatrix const & hm)
{
    size_t const n = hm.cols();
    size_t first = n;
    for (size_t i = 0; i < n; ++i) {
        if (hm(i, i) != 1) {
            first = i;
            break;
        }
    }
    if (first == n)
        return ZMatrix(0, 0);
    return hm.trailing_block(first);
}

/* essential_block of the HNF of a, computed modulo 2h. */
inline ZMatrix essential_hnf(ZMatrix const & a, mpz_class const & h)
{
    size_t const n = a.cols();
    if (h == 1 || n == 0)
        return ZMatrix(0, 0);
    ZMatrix hm = hnf_mod(a, 2 * h);
    if (hnf_determinant(hm) != h)
        throw std::invalid_argument("essential_hnf: h is not the lattice determinant");
    return essential_block(hm);
}

struct PipelineConfig
{
    std::optional<size_t> fb_size;
    std::optional<u64> b1;
    double ratio = 120;
    std::optional<double> tolerance;
    int lp_count = 2;
    CostParams cost;
    u64 seed = 1;
    unsigned workers = 1;
    ClassNumberMode mode = ClassNumberMode::incremental;
    std::optional<u64> hstar_truncation;
    std::optional<u64> r_min;
    std::optional<u64> r_max;
    /* total sieve ideals before giving up */
    u64 max_ideals = 200000;
    unsigned max_rounds = 60;
    /* window failures tolerated before the factor base grows */
    unsigned violations_per_fb = 3;
    unsigned max_fb_growth = 3;
    /* ideals one round may sieve before the yield counts as stalled and the factor base grows */
    u64 stall_ideals = 200;
    unsigned max_stall_growth = 12;
    /* relations from an earlier run, already validated by the caller */
    std::vector<Relation> initial_relations;

    double effective_tolerance() const { return tolerance ? *tolerance : default_tolerance(lp_count); }
};

struct RoundInfo
{
    unsigned round = 0;
    size_t relations = 0;
    size_t rows = 0;
    size_t cols = 0;
    size_t reduced_rows = 0;
    size_t reduced_cols = 0;
    std::string outcome;
};

struct PipelineObserver
{
    std::function<void(IdealReport const &)> on_ideal;
    std::function<void(Relation const &)> on_relation;
    std::function<void(RoundInfo const &)> on_round;
    std::function<void(EliminationStats const &)> on_elimination;
    std::function<void(ClassNumberResult const &)> on_class_number;
    /* new factor base, e.g. to restart a relation file */
    std::function<void(FactorBase const &, SieveParams const &)> on_factor_base;
};

struct PhaseTimings
{
    double sieve = 0;
    double elimination = 0;
    double class_number = 0;
    double structure = 0;

    double total() const { return sieve + elimination + class_number + structure; }
};

struct PipelineResult
{
    GroupStructure group;
    mpz_class h;
    HStarBound hstar;
    bool shortcut = false;
    size_t fb_size = 0;
    SieveParams params;
    CollectStats collect;
    EliminationStats elimination;
    std::vector<mpz_class> h_i;
    size_t matrix_rows = 0;
    size_t matrix_cols = 0;
    size_t reduced_rows = 0;
    size_t reduced_cols = 0;
    unsigned rounds = 0;
    unsigned window_violations = 0;
    PhaseTimings timings;
    std::vector<Relation> relations;
};

class BadConfig : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/* Rewrite a relation for a larger factor base: same prefix, large primes now inside it become columns. */
inline std::optional<Relation> lift_relation(Relation const & r, FactorBase const & fb)
{
    Relation out = r;
    out.large_primes.clear();
    for (auto const & [p, s] : r.large_primes) {
        if (p <= fb.bound) {
            long idx = fb.index_of(p);
            if (idx < 0)
                return std::nullopt;
            out.exponents.emplace_back(static_cast<uint32_t>(idx), s);
        } else {
            out.large_primes.emplace_back(p, s);
        }
    }
    std::sort(out.exponents.begin(), out.exponents.end());
    SparseRow merged;
    for (auto const & t : out.exponents) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](auto const & t) { return t.second == 0; });
    out.exponents = std::move(merged);
    return out;
}

inline IdealWindow choose_window(FactorBase const & fb, Discriminant const & disc, SieveParams const & params,
                                 u64 seed)
{
    try {
        pick_sieve_ideal(fb, disc, params, seed, IdealWindow::standard());
        return IdealWindow::standard();
    } catch (std::runtime_error const &) {
        return IdealWindow::relaxed();
    }
}

/*
 * A full-rank subset of the rows, smallest entries first, plus `extra` more.
 * Its lattice determinant is a multiple of the full one, so a certified
 * class number on it is the class number.
 */
inline ZMatrix lean_rows(SparseMatrix const & m, size_t extra, u64 seed)
{
    std::vector<std::pair<std::pair<i64, size_t>, size_t>> key;
    for (size_t r = 0; r < m.nrows(); ++r) {
        i64 mx = 0;
        for (auto const & t : m.rows[r])
            mx = std::max<i64>(mx, t.second < 0 ? -t.second : t.second);
        key.push_back({{mx, m.rows[r].size()}, r});
    }
    std::sort(key.begin(), key.end());
    SparseMatrix sorted;
    sorted.ncols = m.ncols;
    for (auto const & k : key)
        sorted.rows.push_back(m.rows[k.second]);
    auto cert = rank_mod_p(sorted, random_prime62(seed));
    std::vector<bool> used(sorted.nrows(), false);
    for (size_t r : cert.rows)
        used[r] = true;
    size_t want = cert.rows.size() + extra;
    for (size_t r = 0; r < sorted.nrows() && cert.rows.size() < want; ++r) {
        if (!used[r])
            cert.rows.push_back(r);
    }
    std::sort(cert.rows.begin(), cert.rows.end());
    ZMatrix z(cert.rows.size(), m.ncols);
    for (size_t i = 0; i < cert.rows.size(); ++i) {
        for (auto const & t : sorted.rows[cert.rows[i]])
            z(i, t.first) = static_cast<long>(t.second);
    }
    return z;
}

} // namespace detail

inline FactorBase pipeline_factor_base(Discriminant const & disc, PipelineConfig const & cfg)
{
    if (cfg.fb_size)
        return build_factor_base_by_size(disc, *cfg.fb_size);
    u64 b = cfg.b1 ? *cfg.b1 : std::max<u64>(bach_bound(disc), 50);
    return build_factor_base(disc, b);
}

/*
 * factor base -> relations -> elimination -> class number -> essential HNF -> SNF,
 * collecting more relations whenever a check fails.
 */
inline PipelineResult group_structure(Discriminant const & disc, PipelineConfig const & cfg,
                                      PipelineObserver const & obs = {})
{
    using clock = std::chrono::steady_clock;
    PipelineResult res;
    res.hstar = hstar(disc, cfg.hstar_truncation);
    mpz_class const & hs = res.hstar.hstar;
    if (cfg.lp_count < 0 || cfg.lp_count > 2)
        throw BadConfig("lp_count must be 0, 1 or 2");
    if (hs == 1) {
        res.h = 1;
        res.shortcut = true;
        return res;
    }
    if (cfg.fb_size && *cfg.fb_size == 0)
        throw BadConfig("an empty factor base cannot produce relations");

    FactorBase fb = pipeline_factor_base(disc, cfg);
    if (fb.empty())
        throw BadConfig("factor base is empty");

    std::vector<Relation> carried = cfg.initial_relations;
    unsigned violations_here = 0;
    unsigned growth = 0;
    unsigned stalls = 0;
    u64 ideals_used = 0;

    for (;;) {
        SieveParams params = SieveParams::make(fb, cfg.lp_count, cfg.ratio, cfg.effective_tolerance());
        if (cfg.r_min)
            params.r_min = *cfg.r_min;
        if (cfg.r_max)
            params.r_max = *cfg.r_max;
        params.validate();
        if (obs.on_factor_base)
            obs.on_factor_base(fb, params);
        res.params = params;
        res.fb_size = fb.size();

        IdealWindow window = detail::choose_window(fb, disc, params, cfg.seed);
        RelationCollector coll(disc, fb, params, cfg.seed, window, cfg.workers);
        u64 max_id = 0;
        bool any_id = false;
        for (auto const & r : carried) {
            auto lifted = detail::lift_relation(r, fb);
            if (!lifted)
                continue;
            if (coll.add(*lifted) && obs.on_relation)
                obs.on_relation(coll.relations().back());
            if (r.seed == cfg.seed) {
                max_id = std::max(max_id, r.ideal_id);
                any_id = true;
            }
        }
        if (any_id)
            coll.set_next_id(max_id + 1);
        coll.observer = [&](IdealReport const & rep) {
            if (obs.on_ideal)
                obs.on_ideal(rep);
        };

        size_t surplus = default_surplus(fb.size());
        size_t target = std::max(coll.relations().size(), fb.size() + surplus + 20);
        std::vector<uint32_t> forced;
        bool stalled = false;

        for (unsigned round = 0; round < cfg.max_rounds; ++round) {
            ++res.rounds;
            RoundInfo info;
            info.round = res.rounds;

            auto t0 = clock::now();
            size_t before = coll.relations().size();
            u64 sieved_before = coll.stats().ideals;
            if (ideals_used >= cfg.max_ideals)
                throw BudgetExhausted("sieving budget exhausted");
            u64 allowance = std::min<u64>(cfg.max_ideals - ideals_used, cfg.stall_ideals);
            bool met = coll.collect(target, allowance, forced);
            ideals_used += coll.stats().ideals - sieved_before;
            if (obs.on_relation) {
                for (size_t i = before; i < coll.relations().size(); ++i)
                    obs.on_relation(coll.relations()[i]);
            }
            res.timings.sieve += detail::seconds_since(t0);
            forced.clear();
            if (!met && ideals_used < cfg.max_ideals && stalls < cfg.max_stall_growth) {
                /* the ideals are repeating themselves: a bigger factor base gives fresh ones */
                ++stalls;
                stalled = true;
                info.relations = coll.relations().size();
                info.outcome = "stalled";
                if (obs.on_round)
                    obs.on_round(info);
                break;
            }

            t0 = clock::now();
            RelationMatrix mat(fb);
            for (auto const & r : coll.relations())
                mat.add(r);
            mat.add_ramified_rows(fb);
            mat.prune_singletons();
            info.relations = coll.relations().size();
            info.rows = mat.nrows();
            info.cols = mat.ncols();
            res.matrix_rows = mat.nrows();
            res.matrix_cols = mat.ncols();

            auto next_target = [&]() {
                size_t cur = coll.relations().size();
                return std::max(cur + 20, cur + cur / 4);
            };
            auto report = [&](char const * outcome) {
                info.outcome = outcome;
                if (obs.on_round)
                    obs.on_round(info);
            };

            surplus = default_surplus(mat.ncols());
            if (!plausibly_enough(mat, surplus)) {
                auto const & w = mat.col_weights();
                for (uint32_t c = 0; c < fb.size(); ++c) {
                    if (w[c] < 2)
                        forced.push_back(c);
                }
                target = next_target();
                res.timings.elimination += detail::seconds_since(t0);
                report("more-relations");
                continue;
            }

            EliminationResult er;
            try {
                er = eliminate(mat.matrix(), cfg.cost);
            } catch (InsufficientSurplus const &) {
                target = next_target();
                res.timings.elimination += detail::seconds_since(t0);
                report("insufficient-surplus");
                continue;
            }
            res.elimination = er.stats;
            if (obs.on_elimination)
                obs.on_elimination(er.stats);
            info.reduced_rows = er.matrix.nrows();
            info.reduced_cols = er.matrix.ncols;
            res.reduced_rows = er.matrix.nrows();
            res.reduced_cols = er.matrix.ncols;
            bool full = full_column_rank(er.matrix, mix_seed(cfg.seed, res.rounds));
            if (!full && cfg.cost.k > 0) {
                /* the discards may have cost rank: redo without them */
                CostParams keep = cfg.cost;
                keep.k = 0;
                try {
                    er = eliminate(mat.matrix(), keep);
                    full = full_column_rank(er.matrix, mix_seed(cfg.seed, res.rounds));
                } catch (InsufficientSurplus const &) {
                }
                res.elimination = er.stats;
                info.reduced_rows = er.matrix.nrows();
                info.reduced_cols = er.matrix.ncols;
                res.reduced_rows = er.matrix.nrows();
                res.reduced_cols = er.matrix.ncols;
            }
            res.timings.elimination += detail::seconds_since(t0);
            if (!full) {
                auto w = er.matrix.column_weights();
                for (size_t c = 0; c < er.columns.size(); ++c) {
                    if (w[c] == 0 && er.columns[c] < fb.size())
                        forced.push_back(er.columns[c]);
                }
                target = next_target();
                report("rank-deficient");
                continue;
            }

            t0 = clock::now();
            ZMatrix z;
            ClassNumberResult cn;
            bool ok = false;
            size_t extra = std::max<size_t>(40, er.matrix.ncols / 5);
            if (er.matrix.nrows() > 2 * (er.matrix.ncols + extra)) {
                z = detail::lean_rows(er.matrix, extra, mix_seed(cfg.seed, res.rounds));
                try {
                    cn = certified_class_number(z, hs, cfg.mode);
                    ok = true;
                } catch (WindowViolation const &) {
                }
            }
            if (!ok) {
                z = ZMatrix::from_sparse(er.matrix);
                try {
                    cn = certified_class_number(z, hs, cfg.mode);
                    ok = true;
                } catch (WindowViolation const &) {
                }
            }
            if (ok && obs.on_class_number)
                obs.on_class_number(cn);
            res.timings.class_number += detail::seconds_since(t0);
            if (!ok) {
                ++res.window_violations;
                ++violations_here;
                target = next_target();
                report("window-violation");
                if (violations_here >= cfg.violations_per_fb)
                    break;
                continue;
            }

            t0 = clock::now();
            ZMatrix ess = cfg.mode == ClassNumberMode::incremental ? essential_block(cn.hnf) : essential_hnf(z, cn.h);
            res.group = ess.rows() ? snf(ess) : GroupStructure{};
            res.timings.structure += detail::seconds_since(t0);
            if (res.group.order() != cn.h)
                throw std::logic_error("group order does not match the class number");
            res.h = cn.h;
            res.h_i = cn.h_i;
            res.collect = coll.stats();
            res.relations = coll.relations();
            report("done");
            return res;
        }

        if (!stalled) {
            if (growth >= cfg.max_fb_growth)
                throw WindowViolation("no certified class number after the allowed retries", 0);
            ++growth;
        }
        violations_here = 0;
        carried = coll.relations();
        u64 nb = fb.bound + fb.bound / 2;
        fb = build_factor_base(disc, nb);
    }
}

} // namespace clgroup
