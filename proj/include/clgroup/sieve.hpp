#pragma once

#include "clgroup/forms.hpp"
#include "clgroup/numtheory.hpp"
#include "clgroup/residue.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace clgroup {

inline double default_tolerance(int lp_count)
{
    switch (lp_count) {
    case 0: return 1.5;
    case 1: return 2.1;
    default: return 2.7;
    }
}

struct SieveParams
{
    u64 b1 = 0;
    u64 b2 = 0;
    double tolerance = 2.7;
    int lp_count = 2;
    /* clamp for the sieve radius */
    u64 r_min = 64;
    u64 r_max = u64(1) << 20;
    /* largest factor base prime, used by the threshold when lp_count = 0 */
    u64 p_n = 0;

    ResidueBounds bounds() const { return {b1, b2, lp_count}; }

    void validate() const
    {
        if (lp_count < 0 || lp_count > 2)
            throw std::invalid_argument("lp_count must be 0, 1 or 2");
        if (b1 < 2)
            throw std::invalid_argument("B1 must be at least 2");
        if (lp_count == 0 && b2 != b1)
            throw std::invalid_argument("lp_count = 0 requires B2 = B1");
        if (lp_count > 0 && static_cast<u128>(b2) >= static_cast<u128>(b1) * b1)
            throw std::invalid_argument("B2 must be below B1^2");
        if (b2 < b1)
            throw std::invalid_argument("B2 must be at least B1");
        if (r_min < 1 || r_max < r_min)
            throw std::invalid_argument("bad radius clamp");
    }

    /* B2 = ratio B1, capped below B1^2 */
    static SieveParams make(FactorBase const & fb, int lp_count, double ratio, double tolerance)
    {
        SieveParams sp;
        sp.b1 = std::max<u64>(fb.bound, 2);
        sp.lp_count = lp_count;
        sp.tolerance = tolerance;
        sp.p_n = fb.largest();
        if (lp_count == 0) {
            sp.b2 = sp.b1;
        } else {
            if (ratio < 1)
                throw std::invalid_argument("ratio must be at least 1");
            long double b2 = static_cast<long double>(sp.b1) * ratio;
            long double cap = static_cast<long double>(sp.b1) * sp.b1 - 1;
            sp.b2 = static_cast<u64>(std::min(b2, cap));
        }
        sp.validate();
        return sp;
    }
};

struct SieveIdeal
{
    /* (a, b, c) with a = N(ideal), b in (-a, a]; not reduced */
    QuadForm form;
    /* factor base index -> exponent, ascending by index */
    std::vector<std::pair<uint32_t, i64>> exponents;
    u64 radius = 0;
    u64 id = 0;
};

/* Which products of factor base primes count as a sieve ideal. */
struct IdealWindow
{
    unsigned k_min = 1;
    unsigned k_max = 3;
    /* choose primes with index >= lower_fraction * |fb| */
    double lower_fraction = 0.5;
    /* demand N in [B1, B1^3] and raw radius >= 2 B1 */
    bool strict = true;
    unsigned attempts = 256;

    static IdealWindow standard() { return {}; }

    /* any fb primes; the raw radius should land in the clamp range, otherwise the closest try wins */
    static IdealWindow relaxed()
    {
        IdealWindow w;
        w.lower_fraction = 0.0;
        w.strict = false;
        return w;
    }
};

namespace detail {

inline double raw_radius(Discriminant const & disc, mpz_class const & norm)
{
    double l = 0.5 * (log2_of(disc.value()) - 1.0) - log2_of(norm);
    return std::exp2(l);
}

/* b with b = s_i b_{p_i} (mod 2 p_i) for all i, b = Delta (mod 2), b in (-a, a] */
inline mpz_class crt_root(Discriminant const & disc, FactorBase const & fb,
                          std::vector<std::pair<uint32_t, i64>> const & exps, mpz_class & a)
{
    a = 1;
    mpz_class b = disc.odd() ? 1 : 0;
    mpz_class m = 2;
    for (auto const & [idx, s] : exps) {
        auto const & q = fb[idx];
        a *= static_cast<unsigned long>(q.p);
        mpz_class target = mpz_class(static_cast<unsigned long>(q.bp)) * static_cast<long>(s);
        mpz_class mod = q.p == 2 ? mpz_class(4) : mpz_class(static_cast<unsigned long>(q.p));
        /* b + m t = target (mod mod) */
        mpz_class g, u, v;
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t(), mod.get_mpz_t());
        mpz_class diff = target - b;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()))
            throw std::logic_error("crt_root: inconsistent congruences");
        mpz_class l = mod / g;
        mpz_class t = (diff / g) * u;
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), l.get_mpz_t());
        b += m * t;
        m *= l;
        mpz_fdiv_r(b.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t());
    }
    /* m = 2a now */
    if (b > a)
        b -= 2 * a;
    return b;
}

} // namespace detail

/* Build the ideal for explicit exponents (each +-1 on distinct primes). */
inline SieveIdeal make_sieve_ideal(Discriminant const & disc, FactorBase const & fb,
                                   SieveParams const & params,
                                   std::vector<std::pair<uint32_t, i64>> exps, u64 id = 0)
{
    std::sort(exps.begin(), exps.end());
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i].first >= fb.size())
            throw std::out_of_range("make_sieve_ideal: bad prime index");
        if (i > 0 && exps[i].first == exps[i - 1].first)
            throw std::invalid_argument("make_sieve_ideal: repeated prime");
        if (fb[exps[i].first].ramified)
            exps[i].second = 1;
        if (exps[i].second != 1 && exps[i].second != -1)
            throw std::invalid_argument("make_sieve_ideal: exponents must be +-1");
    }
    SieveIdeal ideal;
    mpz_class a;
    mpz_class b = detail::crt_root(disc, fb, exps, a);
    mpz_class c = (b * b - disc.value()) / (4 * a);
    ideal.form = QuadForm(a, b, c);
    ideal.exponents = std::move(exps);
    double r = std::round(detail::raw_radius(disc, a));
    if (!(r >= static_cast<double>(params.r_min)))
        r = static_cast<double>(params.r_min);
    if (r > static_cast<double>(params.r_max))
        r = static_cast<double>(params.r_max);
    ideal.radius = static_cast<u64>(r);
    ideal.id = id;
    return ideal;
}

/*
 * A random product of k distinct factor base primes with random orientation.
 * `forced`, when given, is always one of the primes.
 */
inline SieveIdeal pick_sieve_ideal(FactorBase const & fb, Discriminant const & disc,
                                   SieveParams const & params, u64 seed,
                                   IdealWindow const & window = IdealWindow::standard(),
                                   std::optional<uint32_t> forced = std::nullopt, u64 id = 0)
{
    if (fb.empty())
        throw std::invalid_argument("pick_sieve_ideal: empty factor base");
    std::vector<uint32_t> pool;
    auto first = static_cast<size_t>(window.lower_fraction * static_cast<double>(fb.size()));
    for (size_t i = std::min(first, fb.size() - 1); i < fb.size(); ++i) {
        if (window.strict && (fb[i].p == 2 || fb[i].ramified))
            continue;
        if (forced && *forced == i)
            continue;
        pool.push_back(static_cast<uint32_t>(i));
    }
    size_t fixed = forced ? 1 : 0;
    if (pool.size() + fixed == 0)
        throw std::runtime_error("pick_sieve_ideal: no usable primes");

    std::mt19937_64 rng(seed);
    double lo_r = static_cast<double>(params.r_min);
    double hi_r = static_cast<double>(params.r_max);
    mpz_class b1(static_cast<unsigned long>(params.b1));
    mpz_class b1_cubed = b1 * b1 * b1;

    std::vector<std::pair<uint32_t, i64>> best;
    double best_score = INFINITY;
    for (unsigned attempt = 0; attempt < window.attempts; ++attempt) {
        unsigned kmax = static_cast<unsigned>(std::min<size_t>(window.k_max, pool.size() + fixed));
        unsigned kmin = std::max<unsigned>(window.k_min, static_cast<unsigned>(fixed));
        if (kmin > kmax)
            kmin = kmax;
        unsigned k = std::uniform_int_distribution<unsigned>(kmin, kmax)(rng);
        std::vector<uint32_t> chosen;
        if (forced)
            chosen.push_back(*forced);
        while (chosen.size() < k) {
            uint32_t idx = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
            if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end())
                chosen.push_back(idx);
        }
        std::vector<std::pair<uint32_t, i64>> exps;
        mpz_class norm = 1;
        for (uint32_t idx : chosen) {
            i64 s = (rng() & 1) ? 1 : -1;
            exps.emplace_back(idx, s);
            norm *= static_cast<unsigned long>(fb[idx].p);
        }
        double r = detail::raw_radius(disc, norm);
        if (window.strict) {
            if (norm >= b1 && norm <= b1_cubed && r >= 2.0 * static_cast<double>(params.b1))
                return make_sieve_ideal(disc, fb, params, std::move(exps), id);
            continue;
        }
        if (r >= lo_r && r <= hi_r)
            return make_sieve_ideal(disc, fb, params, std::move(exps), id);
        double score = r < lo_r ? std::log2(lo_r / r) : std::log2(r / hi_r);
        if (score < best_score) {
            best_score = score;
            best = std::move(exps);
        }
    }
    if (window.strict)
        throw std::runtime_error("pick_sieve_ideal: no ideal norm in the target window");
    return make_sieve_ideal(disc, fb, params, std::move(best), id);
}

/* Roots of phi(x,1) modulo each factor base prime, as residues in [0, p). */
struct PolyRoots
{
    uint32_t r[2];
    uint8_t count;
};

/* A sieve ideal with its per-prime roots. */
struct PreparedIdeal
{
    SieveIdeal ideal;
    std::vector<PolyRoots> roots;
};

inline PreparedIdeal prepare_ideal(SieveIdeal ideal, FactorBase const & fb, Discriminant const & disc)
{
    PreparedIdeal out;
    out.roots.resize(fb.size());
    mpz_class const & a = ideal.form.a;
    mpz_class const & b = ideal.form.b;
    mpz_class const & c = ideal.form.c;
    for (size_t i = 0; i < fb.size(); ++i) {
        u64 p = fb[i].p;
        PolyRoots & pr = out.roots[i];
        pr.count = 0;
        u64 am = mod_of(a, p), bm = mod_of(b, p), cm = mod_of(c, p);
        if (p == 2) {
            for (u64 x = 0; x < 2; ++x) {
                if (((am * x * x + bm * x + cm) & 1) == 0)
                    pr.r[pr.count++] = static_cast<uint32_t>(x);
            }
            continue;
        }
        if (am == 0) {
            if (bm == 0)
                continue;
            /* linear: b x + c = 0 */
            u64 x = mulmod(p - cm % p, invmod(bm, p), p) % p;
            pr.r[pr.count++] = static_cast<uint32_t>(x);
            continue;
        }
        u64 inv2a = invmod(mulmod(2, am, p), p);
        u64 s = sqrt_mod_p(disc.value(), p);
        u64 nb = (p - bm) % p;
        u64 x1 = mulmod((nb + s) % p, inv2a, p);
        u64 x2 = mulmod((nb + p - s) % p, inv2a, p);
        pr.r[pr.count++] = static_cast<uint32_t>(x1);
        if (x2 != x1)
            pr.r[pr.count++] = static_cast<uint32_t>(x2);
    }
    out.ideal = std::move(ideal);
    return out;
}

/* Threshold F in bits. */
inline long sieve_threshold(Discriminant const & disc, SieveParams const & params, u64 radius)
{
    double lphi = 0.5 * (log2_of(disc.value()) - 1.0) + std::log2(static_cast<double>(radius));
    u64 lp = params.lp_count == 0 ? std::max<u64>(params.p_n, 2) : params.b2;
    return static_cast<long>(std::floor(lphi - params.tolerance * std::log2(static_cast<double>(lp))));
}

/* All x in [-R, R] whose accumulated log contributions reach F. */
inline std::vector<i64> sieve_interval(PreparedIdeal const & prep, FactorBase const & fb,
                                       SieveParams const & params, Discriminant const & disc)
{
    u64 const radius = prep.ideal.radius;
    u64 const len = 2 * radius + 1;
    long const threshold = sieve_threshold(disc, params, radius);
    std::vector<i64> out;
    if (threshold <= 0) {
        out.reserve(len);
        for (u64 i = 0; i < len; ++i)
            out.push_back(static_cast<i64>(i) - static_cast<i64>(radius));
        return out;
    }
    std::vector<uint16_t> s(len, 0);
    for (size_t i = 0; i < fb.size(); ++i) {
        u64 p = fb[i].p;
        auto w = static_cast<uint16_t>(floor_log2(p));
        PolyRoots const & pr = prep.roots[i];
        for (unsigned j = 0; j < pr.count; ++j) {
            u64 start = (pr.r[j] + radius) % p;
            for (u64 pos = start; pos < len; pos += p)
                s[pos] = static_cast<uint16_t>(s[pos] + w);
        }
    }
    for (u64 i = 0; i < len; ++i) {
        if (static_cast<long>(s[i]) >= threshold)
            out.push_back(static_cast<i64>(i) - static_cast<i64>(radius));
    }
    return out;
}

inline std::vector<i64> sieve_interval(SieveIdeal const & ideal, FactorBase const & fb,
                                       SieveParams const & params, Discriminant const & disc)
{
    return sieve_interval(prepare_ideal(ideal, fb, disc), fb, params, disc);
}

struct Relation
{
    /* factor base index -> exponent, ascending, nonzero */
    std::vector<std::pair<uint32_t, i64>> exponents;
    /* (prime, +-1); a squared large prime appears twice */
    std::vector<std::pair<u64, int>> large_primes;
    u64 seed = 0;
    u64 ideal_id = 0;
    i64 x = 0;

    ResidueClass::Kind kind() const
    {
        if (large_primes.empty())
            return ResidueClass::Kind::full;
        return large_primes.size() == 1 ? ResidueClass::Kind::one_partial
                                        : ResidueClass::Kind::two_partial;
    }

    /* sign-normalized vector over fb indices and large primes, for duplicate detection */
    std::vector<std::pair<u64, i64>> key() const
    {
        std::vector<std::pair<u64, i64>> k;
        for (auto const & [i, e] : exponents)
            k.emplace_back(i, e);
        u64 const tag = u64(1) << 62;
        for (auto const & [p, s] : large_primes) {
            if (!k.empty() && k.back().first == (tag | p))
                k.back().second += s;
            else
                k.emplace_back(tag | p, s);
        }
        std::sort(k.begin(), k.end());
        std::erase_if(k, [](auto const & t) { return t.second == 0; });
        if (!k.empty() && k.front().second < 0) {
            for (auto & t : k)
                t.second = -t.second;
        }
        return k;
    }
};

/* The load-bearing identity: the product of the oriented prime forms is principal. */
inline bool verify_relation(Relation const & rel, FactorBase const & fb, Discriminant const & disc)
{
    QuadForm acc = principal_form(disc);
    for (auto const & [i, e] : rel.exponents)
        acc = compose(acc, pow(prime_form(disc, fb[i].p), e));
    for (auto const & [p, s] : rel.large_primes)
        acc = compose(acc, pow(prime_form(disc, p), static_cast<long>(s)));
    return is_principal(acc);
}

namespace detail {
/* orientation of a prime q | phi(x,1): +1 when the ideal (q, b_q) divides alpha */
inline int orientation(mpz_class const & u, u64 q, u64 bq)
{
    u64 two_q = 2 * q;
    return mod_of(u, two_q) == bq % two_q ? 1 : -1;
}

inline i64 pos_mod(i64 x, u64 p)
{
    i64 r = x % static_cast<i64>(p);
    return r < 0 ? r + static_cast<i64>(p) : r;
}
} // namespace detail

/*
 * Trial-divide phi(x,1) over the factor base and classify the cofactor.
 * The classification is reported through `cls` when given.
 */
inline std::optional<Relation> extract_relation(PreparedIdeal const & prep, i64 x, FactorBase const & fb,
                                                SieveParams const & params, Discriminant const & disc,
                                                ResidueClass * cls = nullptr)
{
    QuadForm const & f = prep.ideal.form;
    mpz_class xv(static_cast<long>(x));
    mpz_class phi = (f.a * xv + f.b) * xv + f.c;
    /* alpha = (u + sqrt(Delta)) / 2 */
    mpz_class u = 2 * f.a * xv + f.b;

    if (cls)
        *cls = ResidueClass::discard();
    for (u64 q : fb.excluded) {
        if (mpz_divisible_ui_p(phi.get_mpz_t(), q))
            return std::nullopt;
    }

    std::vector<std::pair<uint32_t, i64>> f_exp;
    for (size_t i = 0; i < fb.size(); ++i) {
        PolyRoots const & pr = prep.roots[i];
        if (pr.count == 0)
            continue;
        u64 p = fb[i].p;
        auto xm = static_cast<uint32_t>(detail::pos_mod(x, p));
        if (xm != pr.r[0] && (pr.count < 2 || xm != pr.r[1]))
            continue;
        i64 v = 0;
        while (mpz_divisible_ui_p(phi.get_mpz_t(), p)) {
            mpz_divexact_ui(phi.get_mpz_t(), phi.get_mpz_t(), p);
            ++v;
        }
        if (v == 0)
            continue;
        int s = fb[i].ramified ? 1 : detail::orientation(u, p, fb[i].bp);
        f_exp.emplace_back(static_cast<uint32_t>(i), s * v);
    }

    if (mpz_sizeinbase(phi.get_mpz_t(), 2) > 64)
        return std::nullopt;
    u64 m = mpz_get_ui(phi.get_mpz_t());
    ResidueClass rc = classify_residue(m, params.bounds());
    if (cls)
        *cls = rc;
    if (rc.kind == ResidueClass::Kind::discard)
        return std::nullopt;

    Relation rel;
    auto add_large = [&](u64 q) {
        if (mpz_divisible_ui_p(disc.value().get_mpz_t(), q))
            return false;
        int s = detail::orientation(u, q, normalized_root(disc, q));
        rel.large_primes.emplace_back(q, s);
        return true;
    };
    if (rc.kind == ResidueClass::Kind::one_partial) {
        if (!add_large(rc.p))
            return std::nullopt;
    } else if (rc.kind == ResidueClass::Kind::two_partial) {
        if (!add_large(rc.p) || !add_large(rc.q))
            return std::nullopt;
    }

    /* e(ideal) + f */
    std::vector<std::pair<uint32_t, i64>> all = prep.ideal.exponents;
    all.insert(all.end(), f_exp.begin(), f_exp.end());
    std::sort(all.begin(), all.end());
    for (auto const & t : all) {
        if (!rel.exponents.empty() && rel.exponents.back().first == t.first)
            rel.exponents.back().second += t.second;
        else
            rel.exponents.push_back(t);
    }
    std::erase_if(rel.exponents, [](auto const & t) { return t.second == 0; });
    std::sort(rel.large_primes.begin(), rel.large_primes.end());
    rel.ideal_id = prep.ideal.id;
    rel.x = x;
    if (rel.exponents.empty() && rel.large_primes.empty())
        return std::nullopt;
    return rel;
}

inline std::optional<Relation> extract_relation(SieveIdeal const & ideal, i64 x, FactorBase const & fb,
                                                SieveParams const & params, Discriminant const & disc)
{
    return extract_relation(prepare_ideal(ideal, fb, disc), x, fb, params, disc);
}

struct CollectStats
{
    u64 ideals = 0;
    u64 candidates = 0;
    u64 full = 0;
    u64 one_partial = 0;
    u64 two_partial = 0;
    u64 discarded = 0;
    u64 duplicates = 0;

    u64 relations() const { return full + one_partial + two_partial; }

    CollectStats & operator+=(CollectStats const & o)
    {
        ideals += o.ideals;
        candidates += o.candidates;
        full += o.full;
        one_partial += o.one_partial;
        two_partial += o.two_partial;
        discarded += o.discarded;
        duplicates += o.duplicates;
        return *this;
    }
};

/* Per-ideal outcome, also handed to the optional observer. */
struct IdealReport
{
    u64 id = 0;
    mpz_class norm;
    u64 radius = 0;
    CollectStats stats;
    std::vector<Relation> relations;
    /* candidate index of each relation */
    std::vector<size_t> positions;

    /* Keeps the first k relations and the stats of the candidates up to the k-th. */
    void truncate(size_t k)
    {
        if (k > relations.size())
            return;
        size_t scanned = k ? positions[k - 1] + 1 : 0;
        relations.resize(k);
        positions.resize(k);
        stats.full = stats.one_partial = stats.two_partial = 0;
        for (auto const & r : relations) {
            switch (r.kind()) {
            case ResidueClass::Kind::full: ++stats.full; break;
            case ResidueClass::Kind::one_partial: ++stats.one_partial; break;
            default: ++stats.two_partial; break;
            }
        }
        stats.candidates = scanned;
        stats.discarded = scanned - k;
    }
};

class BudgetExhausted : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/*
 * Sieve ideals with ids next_id, next_id+1, ..., one per worker at a time.  Each ideal
 * uses seed mix_seed(seed, id) and results are merged in id order, so the
 * relation list does not depend on the number of workers.
 */
class RelationCollector
{
    Discriminant disc_;
    FactorBase const & fb_;
    SieveParams params_;
    u64 seed_;
    IdealWindow window_;
    unsigned workers_;
    u64 next_id_ = 0;
    std::vector<Relation> relations_;
    std::set<std::vector<std::pair<u64, i64>>> seen_;
    CollectStats stats_;

  public:
    std::function<void(IdealReport const &)> observer;

    RelationCollector(Discriminant disc, FactorBase const & fb, SieveParams params, u64 seed,
                      IdealWindow window = IdealWindow::standard(), unsigned workers = 1)
        : disc_(std::move(disc)), fb_(fb), params_(params), seed_(seed), window_(window),
          workers_(std::max(1u, workers))
    {
        params_.validate();
    }

    std::vector<Relation> const & relations() const { return relations_; }
    CollectStats const & stats() const { return stats_; }
    SieveParams const & params() const { return params_; }
    IdealWindow const & window() const { return window_; }
    u64 next_id() const { return next_id_; }
    void set_next_id(u64 id) { next_id_ = id; }

    /* Adds a relation obtained elsewhere; false if it is a duplicate. */
    bool add(Relation rel)
    {
        if (!seen_.insert(rel.key()).second) {
            ++stats_.duplicates;
            return false;
        }
        relations_.push_back(std::move(rel));
        return true;
    }

    /* Sieves one ideal; extraction stops after `cap` relations. */
    IdealReport process_ideal(u64 id, std::optional<uint32_t> forced, size_t cap = SIZE_MAX) const
    {
        IdealReport rep;
        rep.id = id;
        u64 s = mix_seed(seed_, id);
        SieveIdeal ideal;
        try {
            ideal = pick_sieve_ideal(fb_, disc_, params_, s, window_, forced, id);
        } catch (std::runtime_error const &) {
            /* a forced prime, or a small factor base, may not fit the strict window */
            if (!window_.strict)
                throw;
            ideal = pick_sieve_ideal(fb_, disc_, params_, s, IdealWindow::relaxed(), forced, id);
        }
        rep.norm = ideal.form.a;
        rep.radius = ideal.radius;
        PreparedIdeal prep = prepare_ideal(std::move(ideal), fb_, disc_);
        std::vector<i64> cand = sieve_interval(prep, fb_, params_, disc_);
        rep.stats.ideals = 1;
        rep.stats.candidates = cand.size();
        for (size_t ci = 0; ci < cand.size() && rep.relations.size() < cap; ++ci) {
            i64 const x = cand[ci];
            ResidueClass rc;
            auto rel = extract_relation(prep, x, fb_, params_, disc_, &rc);
            if (!rel) {
                ++rep.stats.discarded;
                continue;
            }
            rel->seed = seed_;
            switch (rel->kind()) {
            case ResidueClass::Kind::full: ++rep.stats.full; break;
            case ResidueClass::Kind::one_partial: ++rep.stats.one_partial; break;
            default: ++rep.stats.two_partial; break;
            }
            rep.relations.push_back(std::move(*rel));
            rep.positions.push_back(ci);
        }
        if (rep.relations.size() >= cap)
            rep.truncate(cap);
        return rep;
    }

    /*
     * Sieves ideals until at least `target` relations are held or `max_ideals`
     * more ideals have been sieved.  The first ideals of the call each contain
     * one of the `forced` primes.  An ideal contributes at most target - held
     * relations (counted before its merge, duplicates included), so one large
     * ideal cannot overshoot.  Returns true if the target was met.
     */
    bool collect(size_t target, u64 max_ideals, std::vector<uint32_t> const & forced = {})
    {
        u64 done = 0;
        size_t forced_pos = 0;
        while (relations_.size() < target && done < max_ideals) {
            unsigned n = static_cast<unsigned>(std::min<u64>(workers_, max_ideals - done));
            std::vector<std::optional<uint32_t>> force(n);
            for (unsigned i = 0; i < n && forced_pos + i < forced.size(); ++i)
                force[i] = forced[forced_pos + i];
            std::vector<IdealReport> reps(n);
            std::vector<std::exception_ptr> errors(n);
            size_t const cap = target - relations_.size();
            auto work = [&](unsigned i) {
                try {
                    reps[i] = process_ideal(next_id_ + i, force[i], cap);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            };
            if (n == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (unsigned i = 0; i < n; ++i)
                    pool.emplace_back(work, i);
                for (auto & t : pool)
                    t.join();
            }
            /* merge in id order and stop at the first ideal that meets the target */
            for (unsigned i = 0; i < n; ++i) {
                if (errors[i])
                    std::rethrow_exception(errors[i]);
                reps[i].truncate(target - relations_.size());
                CollectStats st = reps[i].stats;
                u64 dup_before = stats_.duplicates;
                for (auto & rel : reps[i].relations)
                    add(std::move(rel));
                st.duplicates = stats_.duplicates - dup_before;
                stats_.duplicates = dup_before;
                stats_ += st;
                if (observer) {
                    reps[i].stats = st;
                    observer(reps[i]);
                }
                ++next_id_;
                ++done;
                if (force[i])
                    ++forced_pos;
                if (relations_.size() >= target)
                    break;
            }
        }
        return relations_.size() >= target;
    }
};

/* One-shot collection; throws BudgetExhausted when the ideal budget runs out. */
inline std::vector<Relation> collect(Discriminant const & disc, FactorBase const & fb, SieveParams const & params,
                                     size_t target_count, u64 seed,
                                     IdealWindow const & window = IdealWindow::standard(),
                                     unsigned workers = 1, u64 max_ideals = 100000)
{
    if (target_count == 0)
        return {};
    RelationCollector rc(disc, fb, params, seed, window, workers);
    if (!rc.collect(target_count, max_ideals))
        throw BudgetExhausted("collect: sieving budget exhausted before reaching the target");
    return rc.relations();
}

} // namespace clgroup
