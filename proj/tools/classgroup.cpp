#include "clgroup/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

using namespace clgroup;
using nlohmann::json;

namespace {

struct Options
{
    std::string delta;
    std::string family;
    size_t fb_size = 0;
    u64 b1 = 0;
    double ratio = 120;
    double tolerance = 0;
    int lp = 2;
    i64 cost_c = 100;
    i64 cost_q = 8;
    size_t discard_k = 10;
    size_t merge_w = 120;
    u64 seed = 1;
    unsigned workers = 1;
    std::string relations;
    std::string stats;
    std::string record;
    std::string mode = "incremental";
    u64 max_ideals = 200000;
};

void add_common(CLI::App * app, Options & o)
{
    auto d = app->add_option("--delta", o.delta, "discriminant, e.g. -23");
    auto f = app->add_option("--delta-family", o.family, "n or 10^n+1 for -4(10^n+1)");
    d->excludes(f);
    app->add_option("--fb-size", o.fb_size, "number of factor base primes (default: from B1)");
    app->add_option("--b1", o.b1, "factor base bound B1 (default 6 log^2 |D|)");
    app->add_option("--ratio", o.ratio, "B2 / B1")->check(CLI::PositiveNumber);
    app->add_option("--tolerance", o.tolerance, "sieve tolerance T (default by --lp)");
    app->add_option("--lp", o.lp, "large primes per relation")->check(CLI::Range(0, 2));
    app->add_option("--cost-c", o.cost_c, "elimination cost: weight of a coefficient above q");
    app->add_option("--cost-q", o.cost_q, "elimination cost: coefficient threshold");
    app->add_option("--discard-k", o.discard_k, "rows dropped after each sweep");
    app->add_option("--merge-w", o.merge_w, "largest column weight merged");
    app->add_option("--seed", o.seed, "random seed");
    app->add_option("--workers", o.workers, "sieve threads")->check(CLI::PositiveNumber);
    app->add_option("--mode", o.mode, "class number loop")->check(CLI::IsMember({"incremental", "independent"}));
    app->add_option("--max-ideals", o.max_ideals, "sieving budget in ideals");
    app->add_option("--stats", o.stats, "JSON-lines stats output");
}

Discriminant discriminant(Options const & o)
{
    if (!o.family.empty())
        return cli::parse_delta_family(o.family);
    if (o.delta.empty())
        throw cli::UsageError("one of --delta or --delta-family is required");
    return cli::parse_delta(o.delta);
}

PipelineConfig config(Options const & o)
{
    PipelineConfig cfg;
    if (o.fb_size)
        cfg.fb_size = o.fb_size;
    else if (o.b1)
        cfg.b1 = o.b1;
    cfg.ratio = o.ratio;
    if (o.tolerance > 0)
        cfg.tolerance = o.tolerance;
    cfg.lp_count = o.lp;
    cfg.cost.c = o.cost_c;
    cfg.cost.q = o.cost_q;
    cfg.cost.k = o.discard_k;
    cfg.cost.w = o.merge_w;
    try {
        cfg.cost.validate();
    } catch (std::invalid_argument const & e) {
        throw BadConfig(e.what());
    }
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    cfg.mode = o.mode == "independent" ? ClassNumberMode::independent : ClassNumberMode::incremental;
    cfg.max_ideals = o.max_ideals;
    return cfg;
}

json divisors_json(GroupStructure const & g)
{
    json a = json::array();
    for (auto const & d : g.divisors)
        a.push_back(d.get_str());
    return a;
}

class StatsSink
{
    std::unique_ptr<std::ofstream> out_;

  public:
    explicit StatsSink(std::string const & path)
    {
        if (path.empty())
            return;
        out_ = std::make_unique<std::ofstream>(path);
        if (!*out_)
            throw BadConfig("cannot open stats file " + path);
    }
    bool on() const { return static_cast<bool>(out_); }
    void emit(json const & j)
    {
        if (out_)
            *out_ << j.dump() << "\n" << std::flush;
    }
};

int cmd_compute(Options const & o)
{
    Discriminant disc = discriminant(o);
    PipelineConfig cfg = config(o);
    StatsSink stats(o.stats);

    /* resume */
    if (!o.relations.empty() && std::filesystem::exists(o.relations)) {
        std::ifstream in(o.relations);
        RelationFile rf = read_relations(in);
        if (rf.header) {
            if (rf.header->delta != disc.value())
                throw BadConfig("relation file is for discriminant " + rf.header->delta.get_str());
            if (rf.header->lp_count != cfg.lp_count)
                throw BadConfig("relation file was written with a different --lp");
            cfg.fb_size.reset();
            cfg.b1 = rf.header->b1;
            FactorBase fb = build_factor_base(disc, rf.header->b1);
            size_t bad = 0;
            for (auto & r : rf.relations) {
                bool in_range = std::all_of(r.exponents.begin(), r.exponents.end(),
                                            [&](auto const & t) { return t.first < fb.size(); });
                if (in_range && verify_relation(r, fb, disc))
                    cfg.initial_relations.push_back(std::move(r));
                else
                    ++bad;
            }
            std::cerr << "resuming with " << cfg.initial_relations.size() << " relations";
            if (bad)
                std::cerr << " (" << bad << " rejected)";
            std::cerr << "\n";
        }
    }

    /* relations of the current factor base, kept for the relation file */
    std::optional<RelationFileHeader> header;
    std::vector<Relation> kept;
    PipelineObserver obs;
    obs.on_factor_base = [&](FactorBase const & fb, SieveParams const & p) {
        header = RelationFileHeader::of(disc, p);
        kept.clear();
        stats.emit({{"phase", "factor_base"}, {"size", fb.size()}, {"b1", p.b1}, {"b2", p.b2},
                    {"tolerance", p.tolerance}, {"lp", p.lp_count}});
    };
    obs.on_relation = [&](Relation const & r) { kept.push_back(r); };
    if (stats.on()) {
        obs.on_ideal = [&](IdealReport const & rep) {
            stats.emit({{"phase", "sieve"},
                        {"ideal", rep.id},
                        {"norm", rep.norm.get_str()},
                        {"radius", rep.radius},
                        {"candidates", rep.stats.candidates},
                        {"full", rep.stats.full},
                        {"one_partial", rep.stats.one_partial},
                        {"two_partial", rep.stats.two_partial},
                        {"duplicates", rep.stats.duplicates}});
        };
        obs.on_round = [&](RoundInfo const & ri) {
            stats.emit({{"phase", "round"},
                        {"round", ri.round},
                        {"relations", ri.relations},
                        {"rows", ri.rows},
                        {"cols", ri.cols},
                        {"reduced_rows", ri.reduced_rows},
                        {"reduced_cols", ri.reduced_cols},
                        {"outcome", ri.outcome}});
        };
        obs.on_elimination = [&](EliminationStats const & es) {
            json sw = json::array();
            for (auto const & s : es.sweeps)
                sw.push_back({{"sweep", s.sweep}, {"rows", s.nrows}, {"cols", s.ncols},
                              {"avg_weight", s.avg_weight}, {"max", s.max}, {"min", s.min}});
            stats.emit({{"phase", "elimination"},
                        {"merges", es.merges},
                        {"retained", es.retained},
                        {"overflow_aborts", es.overflow_aborts},
                        {"discarded", es.discarded},
                        {"duplicates", es.duplicates},
                        {"sweeps", sw}});
        };
        obs.on_class_number = [&](ClassNumberResult const & cn) {
            json hi = json::array();
            for (auto const & x : cn.h_i)
                hi.push_back(x.get_str());
            stats.emit({{"phase", "class_number"}, {"h", cn.h.get_str()}, {"h_i", hi}});
        };
    }

    auto save_relations = [&]() {
        if (o.relations.empty() || !header)
            return;
        std::ofstream out(o.relations);
        write_header(out, *header);
        for (auto const & r : kept)
            write_relation(out, r);
    };

    PipelineResult res;
    try {
        res = group_structure(disc, cfg, obs);
    } catch (...) {
        save_relations();
        throw;
    }
    save_relations();

    json rec = {{"delta", disc.value().get_str()},
                {"group", divisors_json(res.group)},
                {"h", res.h.get_str()},
                {"hstar", res.hstar.hstar.get_str()},
                {"shortcut", res.shortcut},
                {"fb_size", res.fb_size},
                {"b1", res.params.b1},
                {"b2", res.params.b2},
                {"tolerance", res.params.tolerance},
                {"lp", res.params.lp_count},
                {"seed", cfg.seed},
                {"relations", res.relations.size()},
                {"rounds", res.rounds},
                {"window_violations", res.window_violations}};
    json hi = json::array();
    for (auto const & x : res.h_i)
        hi.push_back(x.get_str());
    rec["h_i"] = hi;
    if (!o.record.empty()) {
        std::ofstream out(o.record);
        out << rec.dump(2) << "\n";
    }
    stats.emit({{"phase", "result"},
                {"record", rec},
                {"seconds",
                 {{"sieve", res.timings.sieve},
                  {"elimination", res.timings.elimination},
                  {"class_number", res.timings.class_number},
                  {"structure", res.timings.structure}}}});
    std::cout << "Cl(" << disc.value() << ") = " << res.group << "\n";
    std::cerr << "h = " << res.h << ", hstar = " << res.hstar.hstar << ", factor base " << res.fb_size
              << ", " << res.relations.size() << " relations, " << res.timings.total() << " s\n";
    return cli::exit_ok;
}

int cmd_tune(Options const & o, std::string const & sweep, std::string const & values, unsigned seeds)
{
    Discriminant disc = discriminant(o);
    PipelineConfig cfg = config(o);
    auto param = cli::parse_tune_param(sweep);
    auto grid = cli::parse_grid(values);
    StatsSink stats(o.stats);
    std::cout << cli::tune_param_name(param) << "\tseed\tseconds\trelations\tfull\tpartial\tideals\tstatus\n";
    for (unsigned s = 0; s < std::max(1u, seeds); ++s) {
        cfg.seed = o.seed + s;
        for (auto const & pt : cli::tune(disc, cfg, param, grid)) {
            std::cout << pt.value << "\t" << pt.seed << "\t" << pt.seconds << "\t" << pt.relations << "\t"
                      << pt.full << "\t" << pt.partial << "\t" << pt.ideals << "\t"
                      << (pt.ok ? pt.group : "FAILED: " + pt.error) << "\n";
            stats.emit({{"phase", "tune"},
                        {"param", cli::tune_param_name(param)},
                        {"value", pt.value},
                        {"seed", pt.seed},
                        {"seconds", pt.seconds},
                        {"ok", pt.ok},
                        {"error", pt.error},
                        {"fb_size", pt.fb_size},
                        {"relations", pt.relations},
                        {"full", pt.full},
                        {"partial", pt.partial},
                        {"ideals", pt.ideals},
                        {"group", pt.group}});
        }
    }
    return cli::exit_ok;
}

int cmd_verify(Options const & o, std::string const & range, size_t sample)
{
    auto [a, b] = cli::parse_range(range);
    PipelineConfig cfg = config(o);
    std::optional<size_t> n;
    if (sample)
        n = sample;
    auto discs = cli::fundamental_discriminants(a, b, n, o.seed);
    auto rep = cli::verify(discs, cfg);
    for (auto const & m : rep.mismatches)
        std::cout << "MISMATCH " << m.delta << ": pipeline " << m.pipeline << ", oracle " << m.oracle << "\n";
    std::cout << rep.checked << " discriminants, " << rep.mismatches.size() << " mismatches, "
              << rep.relations << " relations, " << rep.bad_relations << " unsound\n";
    return rep.mismatches.empty() && rep.bad_relations == 0 ? cli::exit_ok : cli::exit_mismatch;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Class groups of imaginary quadratic orders by relation sieving"};
    app.require_subcommand(1);
    Options o;

    auto compute = app.add_subcommand("compute", "compute the class group of one discriminant");
    add_common(compute, o);
    compute->add_option("--relations", o.relations, "relation file: resumed from if present, then rewritten");
    compute->add_option("--record", o.record, "JSON result record");

    auto tune = app.add_subcommand("tune", "time full computations over a parameter grid");
    add_common(tune, o);
    std::string sweep = "tolerance", values;
    unsigned seeds = 1;
    tune->add_option("--sweep", sweep, "tolerance | fb-size | ratio");
    tune->add_option("--values", values, "comma separated grid")->required();
    tune->add_option("--seeds", seeds, "seeds per grid point, starting at --seed");

    auto verify = app.add_subcommand("verify", "compare against the brute-force oracle");
    add_common(verify, o);
    std::string range;
    size_t sample = 0;
    verify->add_option("--verify-range", range, "a:b, bounds on |D|")->required();
    verify->add_option("--sample", sample, "check only this many random discriminants");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const & e) {
        return app.exit(e);
    } catch (CLI::ParseError const & e) {
        app.exit(e);
        return cli::exit_bad_config;
    }

    try {
        if (*compute)
            return cmd_compute(o);
        if (*tune)
            return cmd_tune(o, sweep, values, seeds);
        return cmd_verify(o, range, sample);
    } catch (WindowViolation const & e) {
        std::cerr << "window violation: " << e.what() << "\n";
        return cli::exit_window;
    } catch (BudgetExhausted const & e) {
        std::cerr << "no certified result: " << e.what() << "\n";
        return cli::exit_window;
    } catch (std::invalid_argument const & e) {
        std::cerr << "bad configuration: " << e.what() << "\n";
        return cli::exit_bad_config;
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
