#include "clgroup/cli.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace clgroup;
namespace to = testing_oracle;

namespace {

using clock_type = std::chrono::steady_clock;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, Outcome const & o, double seconds)
{
    if (!o.pass)
        ++failures;
    std::printf("criterion %d: %s  %s  (%.1f s)\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
    std::fflush(stdout);
}

template <class F>
void run(int n, F f)
{
    auto t0 = clock_type::now();
    Outcome o;
    try {
        o = f();
    } catch (std::exception const & e) {
        o.pass = false;
        o.detail = std::string("threw: ") + e.what();
    }
    report(n, o, std::chrono::duration<double>(clock_type::now() - t0).count());
}

Discriminant family(unsigned n)
{
    return cli::parse_delta_family(std::to_string(n));
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

ZMatrix from_dense(to::Dense const & d)
{
    ZMatrix z(d.size(), d.empty() ? 0 : d[0].size());
    for (size_t i = 0; i < z.rows(); ++i) {
        for (size_t j = 0; j < z.cols(); ++j)
            z(i, j) = d[i][j];
    }
    return z;
}

SparseMatrix sieved_matrix(PipelineResult const & r, Discriminant const & disc)
{
    FactorBase fb = build_factor_base(disc, r.params.b1);
    RelationMatrix m(fb);
    for (auto const & rel : r.relations)
        m.add(rel);
    m.add_ramified_rows(fb);
    m.prune_singletons();
    return m.matrix();
}

/* results of the oracle sweep, shared by criteria 1-3 */
struct SweepRun
{
    i64 delta;
    PipelineResult result;
    bool ok = false;
};

size_t sweep_checked = 0;
size_t sweep_mismatches = 0;
std::string first_mismatch;
size_t sweep_relations = 0;
size_t sweep_bad_relations = 0;
size_t sweep_window_bad = 0;
std::vector<SweepRun> injection_pool;

void oracle_sweep()
{
    auto discs = cli::fundamental_discriminants(3, 10000);
    auto big = cli::fundamental_discriminants(1000000, 10000000, 100, 2026);
    discs.insert(discs.end(), big.begin(), big.end());
    PipelineConfig cfg;
    for (size_t idx = 0; idx < discs.size(); ++idx) {
        i64 d = discs[idx];
        Discriminant disc(d);
        ++sweep_checked;
        std::string want = cli::structure_string(oracle::group_structure_bsgs(d).divisors);
        std::string got;
        try {
            PipelineResult r = group_structure(disc, cfg);
            got = r.group.to_string();
            if (!r.shortcut) {
                FactorBase fb = build_factor_base(disc, r.params.b1);
                for (auto const & rel : r.relations) {
                    ++sweep_relations;
                    if (!verify_relation(rel, fb, disc))
                        ++sweep_bad_relations;
                }
            }
            mpz_class prod = 1;
            for (auto const & x : r.group.divisors)
                prod *= x;
            if (!r.hstar.contains(r.h) || prod != r.h)
                ++sweep_window_bad;
            if (!r.shortcut && r.h > 1 && idx % 150 == 0)
                injection_pool.push_back({d, std::move(r), true});
        } catch (std::exception const & e) {
            got = std::string("error: ") + e.what();
        }
        if (got != want) {
            if (!sweep_mismatches)
                first_mismatch = std::to_string(d) + " got " + got + " want " + want;
            ++sweep_mismatches;
        }
    }
}

Outcome criterion1()
{
    oracle_sweep();
    std::ostringstream s;
    s << sweep_checked << " discriminants, " << sweep_mismatches << " mismatches";
    if (sweep_mismatches)
        s << " (first " << first_mismatch << ")";
    return {sweep_mismatches == 0 && sweep_checked > 3000, s.str()};
}

Outcome criterion2()
{
    std::ostringstream s;
    s << sweep_relations << " relations, " << sweep_bad_relations << " unsound";
    return {sweep_relations > 0 && sweep_bad_relations == 0, s.str()};
}

Outcome criterion3()
{
    /* index-2 sublattices of real reduced lattices: double one HNF row */
    size_t injected = 0, caught = 0;
    for (auto const & run : injection_pool) {
        Discriminant disc(run.delta);
        auto er = eliminate(sieved_matrix(run.result, disc), CostParams{});
        ZMatrix z = ZMatrix::from_sparse(er.matrix);
        mpz_class const & hs = run.result.hstar.hstar;
        ZMatrix hm = hnf_mod(z, 2 * run.result.h);
        if (hnf_determinant(hm) != run.result.h)
            return {false, "reduced lattice of " + std::to_string(run.delta) + " has the wrong determinant"};
        std::vector<size_t> rows = {0, hm.rows() / 2, hm.rows() - 1};
        for (size_t j = 0; j < hm.rows(); ++j) {
            if (hm(j, j) != 1) {
                rows.push_back(j);
                break;
            }
        }
        for (size_t j : rows) {
            ZMatrix sub = hm;
            for (size_t c = 0; c < sub.cols(); ++c)
                sub(j, c) *= 2;
            ++injected;
            try {
                certified_class_number(sub, hs);
            } catch (WindowViolation const &) {
                ++caught;
            }
        }
    }
    std::ostringstream s;
    s << sweep_checked - sweep_window_bad << "/" << sweep_checked << " runs inside [hstar, 2 hstar); " << caught
      << "/" << injected << " index-2 injections rejected";
    return {sweep_window_bad == 0 && injected > 0 && caught == injected, s.str()};
}

Outcome criterion4()
{
    std::mt19937_64 rng(404);
    int agree = 0, tried = 0;
    while (tried < 50) {
        size_t n = 1 + rng() % 30;
        size_t m = n + rng() % (41 - n);
        auto d = to::random_dense(rng, m, n, -10, 10);
        auto h = to::hnf(d);
        if (!h)
            continue;
        ++tried;
        mpz_class det = 1;
        for (size_t i = 0; i < n; ++i)
            det *= (*h)[i][i];
        ZMatrix a = from_dense(d);
        mpz_class prod = 1;
        for (size_t i = 1; i <= n; ++i)
            prod *= minimal_denominator(a.left_columns(i).transpose());
        agree += (prod == det);
    }
    return {agree == tried, std::to_string(agree) + "/" + std::to_string(tried) + " products equal the oracle determinant"};
}

struct ElimSummary
{
    i64 final_max = 0;
    i64 run_max = 0;
    size_t overflow = 0;
    size_t rows = 0, cols = 0;
};

ElimSummary summarize(EliminationResult const & er)
{
    ElimSummary s;
    for (auto const & sw : er.stats.sweeps)
        s.run_max = std::max({s.run_max, sw.max, -sw.min});
    auto const & last = er.stats.sweeps.back();
    s.final_max = std::max(last.max, -last.min);
    s.overflow = er.stats.overflow_aborts;
    s.rows = last.nrows;
    s.cols = last.ncols;
    return s;
}

Outcome criterion5()
{
    Discriminant disc = family(20);
    PipelineConfig cfg;
    cfg.seed = 1;
    PipelineResult r = group_structure(disc, cfg);
    SparseMatrix m = sieved_matrix(r, disc);
    CostParams adapted;
    CostParams weight_only = adapted;
    weight_only.c = 1;
    weight_only.k = 0;
    auto a = summarize(eliminate(m, adapted));
    auto b = summarize(eliminate(m, weight_only));
    i64 const limit = i64(1) << 16;
    bool controlled = a.run_max < limit && a.overflow == 0;
    bool contrast = b.final_max >= 4 * a.final_max || b.run_max > limit || b.overflow > 0;
    std::ostringstream s;
    s << "input " << m.nrows() << "x" << m.ncols << "; c=100,K=10 -> " << a.rows << "x" << a.cols << " max|e| "
      << a.final_max << "; c=1,K=0 -> " << b.rows << "x" << b.cols << " max|e| " << b.final_max << " (run max "
      << b.run_max << ", ratio " << static_cast<double>(b.final_max) / static_cast<double>(a.final_max)
      << ", need >= 4 or > 2^16)";
    return {controlled && contrast, s.str()};
}

Outcome criterion6()
{
    Discriminant disc = family(20);
    FactorBase fb = pipeline_factor_base(disc, PipelineConfig{});
    u64 const budget = 40;
    std::ostringstream s;
    bool all = true;
    for (u64 seed = 1; seed <= 3; ++seed) {
        u64 yield[3] = {0, 0, 0};
        for (int lp : {0, 2}) {
            SieveParams params = SieveParams::make(fb, lp, 120, default_tolerance(lp));
            RelationCollector coll(disc, fb, params, seed, detail::choose_window(fb, disc, params, seed));
            coll.collect(SIZE_MAX, budget);
            yield[lp] = lp == 0 ? coll.stats().full : coll.stats().relations();
        }
        bool ok = static_cast<double>(yield[2]) >= 1.5 * static_cast<double>(yield[0]);
        all = all && ok;
        s << "seed " << seed << ": lp2 " << yield[2] << " vs lp0 full " << yield[0] << "; ";
    }
    s << budget << " ideals each";
    return {all, s.str()};
}

Outcome criterion7()
{
    Discriminant disc = family(20);
    std::vector<double> ts = {1.5, 2.0, 2.5, 3.0, 3.5};
    std::vector<double> ratios = {12, 120, 1200};
    auto medians = [&](cli::TuneParam p, std::vector<double> const & grid, bool & ok) {
        std::vector<std::vector<double>> secs(grid.size());
        for (u64 seed = 1; seed <= 3; ++seed) {
            PipelineConfig cfg;
            cfg.lp_count = 2;
            cfg.seed = seed;
            auto pts = cli::tune(disc, cfg, p, grid);
            for (size_t i = 0; i < pts.size(); ++i) {
                ok = ok && pts[i].ok;
                secs[i].push_back(pts[i].seconds);
            }
        }
        std::vector<double> out;
        for (auto & v : secs)
            out.push_back(median(v));
        return out;
    };
    bool ok = true;
    auto tm = medians(cli::TuneParam::tolerance, ts, ok);
    auto rm = medians(cli::TuneParam::ratio, ratios, ok);
    double interior = *std::min_element(tm.begin() + 1, tm.end() - 1);
    bool t_shape = tm.front() > interior && tm.back() > interior;
    bool r_shape = *std::min_element(rm.begin(), rm.end()) < rm.back();
    std::ostringstream s;
    s.precision(3);
    s << "T medians";
    for (size_t i = 0; i < ts.size(); ++i)
        s << " " << ts[i] << ":" << tm[i];
    s << (t_shape ? " (interior minimum)" : " (no interior minimum)") << "; ratio medians";
    for (size_t i = 0; i < ratios.size(); ++i)
        s << " " << ratios[i] << ":" << rm[i];
    s << (r_shape ? " (1200 not best)" : " (1200 best)");
    return {ok && t_shape && r_shape, s.str()};
}

Outcome criterion8()
{
    Discriminant disc = family(30);
    std::vector<mpz_class> hs;
    std::ostringstream s;
    bool ok = true;
    for (u64 seed = 1; seed <= 3; ++seed) {
        PipelineConfig cfg;
        cfg.seed = seed;
        auto t0 = clock_type::now();
        PipelineResult r = group_structure(disc, cfg);
        double sec = std::chrono::duration<double>(clock_type::now() - t0).count();
        ok = ok && r.hstar.contains(r.h) && sec < 3600;
        hs.push_back(r.h);
        s << "seed " << seed << " h " << r.h.get_str() << " " << static_cast<int>(sec) << " s; ";
        if (seed == 1)
            s << r.group.to_string() << "; ";
    }
    bool stable = std::all_of(hs.begin(), hs.end(), [&](mpz_class const & h) { return h == hs[0]; });
    s << (stable ? "stable" : "NOT stable");
    return {ok && stable, s.str()};
}

} // namespace

int main()
{
    run(1, criterion1);
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, criterion6);
    run(7, criterion7);
    run(8, criterion8);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures ? 1 : 0;
}
