#pragma once

#include "clgroup/classnumber.hpp"
#include "clgroup/oracle.hpp"
#include "clgroup/relation_io.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/* Argument helpers and the compute / tune / verify drivers behind tools/classgroup. */
namespace clgroup::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_window = 2, exit_mismatch = 3, exit_bad_config = 4 };

class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

inline i64 parse_int(std::string const & s, char const * what)
{
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (std::exception const &) {
        throw UsageError(std::string(what) + ": not an integer: '" + s + "'");
    }
    if (used != s.size())
        throw UsageError(std::string(what) + ": trailing characters in '" + s + "'");
    return v;
}

/* a negative discriminant literal, any size */
inline Discriminant parse_delta(std::string const & s)
{
    mpz_class d;
    if (s.empty() || d.set_str(s, 10) != 0)
        throw UsageError("--delta: not an integer: '" + s + "'");
    try {
        return Discriminant(d);
    } catch (std::invalid_argument const & e) {
        throw UsageError(std::string("--delta: ") + e.what());
    }
}

/* "n" or "10^n+1", both meaning -4 (10^n + 1) */
inline Discriminant parse_delta_family(std::string const & s)
{
    std::string n = s;
    if (n.rfind("10^", 0) == 0) {
        if (n.size() < 6 || n.substr(n.size() - 2) != "+1")
            throw UsageError("--delta-family: expected n or 10^n+1, got '" + s + "'");
        n = n.substr(3, n.size() - 5);
    }
    i64 e = parse_int(n, "--delta-family");
    if (e < 1 || e > 200)
        throw UsageError("--delta-family: exponent must be in [1, 200]");
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return Discriminant(mpz_class(-4 * (p + 1)));
}

/* "a:b" as |D| bounds; a > b is an empty range */
inline std::pair<i64, i64> parse_range(std::string const & s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw UsageError("--verify-range: expected a:b, got '" + s + "'");
    i64 a = parse_int(s.substr(0, colon), "--verify-range");
    i64 b = parse_int(s.substr(colon + 1), "--verify-range");
    if (a < 0 || b < 0)
        throw UsageError("--verify-range: bounds are absolute values and must be >= 0");
    if (b > oracle::guard_rail)
        throw UsageError("--verify-range: upper bound above the oracle guard rail");
    return {a, b};
}

/* comma separated numbers, at least one */
inline std::vector<double> parse_grid(std::string const & s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            continue;
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (std::exception const &) {
            throw UsageError("--values: not a number: '" + tok + "'");
        }
        if (used != tok.size())
            throw UsageError("--values: trailing characters in '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError("--values: empty grid");
    return out;
}

enum class TuneParam { tolerance, fb_size, ratio };

inline TuneParam parse_tune_param(std::string const & s)
{
    if (s == "tolerance" || s == "T")
        return TuneParam::tolerance;
    if (s == "fb-size")
        return TuneParam::fb_size;
    if (s == "ratio")
        return TuneParam::ratio;
    throw UsageError("--sweep: expected tolerance, fb-size or ratio, got '" + s + "'");
}

inline char const * tune_param_name(TuneParam p)
{
    switch (p) {
    case TuneParam::tolerance: return "tolerance";
    case TuneParam::fb_size: return "fb-size";
    default: return "ratio";
    }
}

inline PipelineConfig with_value(PipelineConfig cfg, TuneParam p, double v)
{
    switch (p) {
    case TuneParam::tolerance: cfg.tolerance = v; break;
    case TuneParam::fb_size:
        if (v < 1)
            throw BadConfig("fb-size must be positive");
        cfg.fb_size = static_cast<size_t>(v);
        cfg.b1.reset();
        break;
    case TuneParam::ratio: cfg.ratio = v; break;
    }
    return cfg;
}

struct TunePoint
{
    double value = 0;
    u64 seed = 0;
    bool ok = false;
    std::string error;
    double seconds = 0;
    size_t fb_size = 0;
    size_t relations = 0;
    u64 full = 0;
    u64 partial = 0;
    u64 ideals = 0;
    std::string group;
};

/* One full compute per grid value; failures are recorded and the sweep goes on. */
inline std::vector<TunePoint> tune(Discriminant const & disc, PipelineConfig const & base, TuneParam param,
                                   std::vector<double> const & values)
{
    if (values.empty())
        throw UsageError("tune: empty grid");
    std::vector<TunePoint> out;
    for (double v : values) {
        TunePoint pt;
        pt.value = v;
        pt.seed = base.seed;
        auto t0 = std::chrono::steady_clock::now();
        try {
            PipelineConfig cfg = with_value(base, param, v);
            PipelineResult r = group_structure(disc, cfg);
            pt.ok = true;
            pt.fb_size = r.fb_size;
            pt.relations = r.relations.size();
            pt.full = r.collect.full;
            pt.partial = r.collect.one_partial + r.collect.two_partial;
            pt.ideals = r.collect.ideals;
            pt.group = r.group.to_string();
        } catch (std::exception const & e) {
            pt.error = e.what();
        }
        pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(pt));
    }
    return out;
}

/* fundamental discriminants with |D| in [a, b], all of them or n drawn at random */
inline std::vector<i64> fundamental_discriminants(i64 a, i64 b, std::optional<size_t> sample = std::nullopt,
                                                  u64 seed = 1)
{
    a = std::max<i64>(a, 3);
    std::vector<i64> out;
    if (a > b)
        return out;
    auto const span = static_cast<u64>(b - a + 1);
    if (!sample || span <= 20 * *sample) {
        for (i64 n = a; n <= b; ++n) {
            if (oracle::is_fundamental(-n))
                out.push_back(-n);
        }
        if (sample && out.size() > *sample) {
            std::mt19937_64 rng(seed);
            std::shuffle(out.begin(), out.end(), rng);
            out.resize(*sample);
            std::sort(out.begin(), out.end(), std::greater<>());
        }
        return out;
    }
    /* about 60% of integers are fundamental up to sign, so rejection is quick */
    std::mt19937_64 rng(seed);
    std::set<i64> picked;
    while (picked.size() < *sample) {
        i64 n = a + static_cast<i64>(rng() % span);
        if (oracle::is_fundamental(-n))
            picked.insert(n);
    }
    for (i64 n : picked)
        out.push_back(-n);
    return out;
}

struct Mismatch
{
    i64 delta = 0;
    std::string pipeline;
    std::string oracle;
};

struct VerifyReport
{
    size_t checked = 0;
    std::vector<Mismatch> mismatches;
    /* relations that failed the principal-form identity */
    size_t bad_relations = 0;
    size_t relations = 0;
};

inline std::string structure_string(std::vector<u64> const & d)
{
    GroupStructure g;
    for (u64 x : d)
        g.divisors.emplace_back(static_cast<unsigned long>(x));
    return g.to_string();
}

/* Pipeline against the oracle, with every emitted relation re-verified. */
inline VerifyReport verify(std::vector<i64> const & discs, PipelineConfig const & cfg)
{
    VerifyReport rep;
    for (i64 d : discs) {
        Discriminant disc(d);
        ++rep.checked;
        std::string got;
        try {
            PipelineResult r = group_structure(disc, cfg);
            got = r.group.to_string();
            FactorBase fb = r.shortcut ? FactorBase{} : build_factor_base(disc, r.params.b1);
            for (auto const & rel : r.relations) {
                ++rep.relations;
                if (!verify_relation(rel, fb, disc))
                    ++rep.bad_relations;
            }
        } catch (std::exception const & e) {
            got = std::string("error: ") + e.what();
        }
        std::string want = structure_string(oracle::group_structure_bsgs(d).divisors);
        if (got != want)
            rep.mismatches.push_back({d, got, want});
    }
    return rep;
}

} // namespace clgroup::cli
