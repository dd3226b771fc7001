#include <relbound/corpus.hpp>
#include <relbound/driver.hpp>
#include <relbound/report.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace relbound;

namespace
{

constexpr int kUsage = 1;
constexpr int kAnalysis = 2;
constexpr int kSoundness = 3;

struct Flags {
    std::string approach = "taylor-rel";
    std::string range_method = "refined";
    std::string backend = "internal";
    std::string output = "text";
    long timeout_ms = 1000;
    std::string gap = "0.01";
    int max_bisections = 2000;
    int m = 0;
    int budget = 0;
};

void add_common(CLI::App &cmd, RunConfig &cfg, Flags &f)
{
    cmd.add_option("inputs", cfg.inputs, "Input files, or names of bundled benchmarks (bspline0..bspline3)");
    cmd.add_option("--range-method", f.range_method, "Range method for the forward analysis")
        ->check(CLI::IsMember({"interval", "affine", "refined"}));
    cmd.add_option("--backend", f.backend, "Range refinement engine")->check(CLI::IsMember({"internal", "smt"}));
    cmd.add_option("--solver", cfg.refinement.solver_path, "SMT solver binary (default: $RELBOUND_SMT_SOLVER, z3)");
    cmd.add_option("--timeout", f.timeout_ms, "Per-query wall-clock limit in milliseconds");
    cmd.add_option("--gap", f.gap, "Relative optimality gap, as a decimal or p/q");
    cmd.add_option("--max-bisections", f.max_bisections, "Branch-and-bound bisection budget");
    cmd.add_option("--precision", cfg.precision, "float64 or float32");
    cmd.add_option("--seed", cfg.seed, "Sampler seed");
    cmd.add_option("--output", f.output, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    cmd.add_option("--jobs", cfg.jobs, "Worker threads (1 = deterministic sequential run)");
    cmd.add_flag("--timings", cfg.timings, "Include wall-clock times in the output");
    cmd.add_flag("--no-input-rounding", [&](std::int64_t) { cfg.round_inputs = false; },
                 "Treat inputs as exactly representable");
}

void finish(RunConfig &cfg, const Flags &f)
{
    cfg.range_method = f.range_method == "interval" ? RangeMethod::IntervalOnly
                       : f.range_method == "affine" ? RangeMethod::AffineOnly
                                                    : RangeMethod::IntervalWithRefinement;
    cfg.refinement.backend = f.backend == "smt" ? Backend::ExternalSmtProcess : Backend::InternalBranchAndBound;
    cfg.refinement.timeout = std::chrono::milliseconds(f.timeout_ms);
    cfg.refinement.gap = f.gap.find('/') != std::string::npos ? Rational::parse_fraction(f.gap)
                                                             : Rational::parse_decimal(f.gap);
    cfg.refinement.max_bisections = f.max_bisections;
    cfg.format = format_from_string(f.output);
    if (f.m > 0) {
        cfg.m = f.m;
    }
    if (f.budget > 0) {
        cfg.budget = f.budget;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Sound floating-point roundoff error bounds, absolute and relative"};
    app.require_subcommand(1);

    RunConfig cfg;
    Flags flags;
    long bench_samples = 100000;

    CLI::App *run = app.add_subcommand("run", "Analyze functions with one approach");
    add_common(*run, cfg, flags);
    run->add_option("--approach", flags.approach, "Analysis approach")
        ->check(CLI::IsMember({"forward", "taylor-abs", "taylor-rel", "rel-via-abs", "naive"}));
    run->add_flag("--subdivide", cfg.subdivide, "Subdivide the domain, falling back to absolute errors");
    run->add_option("--m", flags.m, "Pieces per subdivided variable (default 8 univariate, 4 otherwise)");
    run->add_option("--budget", flags.budget, "Subdivision budget p (default 50 univariate, 100 otherwise)");
    run->add_option("--samples", cfg.samples, "Also sample this many points as an observed lower bound");
    run->add_option("--function", cfg.function, "Only analyze the named function");
    run->add_flag("--verbose,-v", cfg.verbose, "Per-node trace for the forward analysis");

    CLI::App *bench = app.add_subcommand("bench", "Compare all approaches over a benchmark set");
    add_common(*bench, cfg, flags);
    bench->add_option("--samples", bench_samples, "Sampled points per benchmark");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        finish(cfg, flags);
        cfg.approach = approach_from_string(flags.approach);
        if (*bench) {
            if (cfg.inputs.empty()) {
                for (const auto &b : bundled_corpus()) {
                    cfg.inputs.push_back(b.name);
                }
            }
            BenchConfig bc;
            bc.base = cfg;
            bc.samples = bench_samples;
            const BenchReport rep = run_bench(load_inputs(cfg), bc);
            std::cout << render(rep, cfg.format);
            return rep.violation() ? kSoundness : 0;
        }
        if (cfg.inputs.empty()) {
            std::cerr << "relbound run: no inputs\n";
            return kUsage;
        }
        cfg.validate();
        const RunReport rep = execute(load_inputs(cfg), cfg);
        std::cout << render(rep, cfg.format);
        return exit_status(rep) == 0 ? 0 : kAnalysis;
    } catch (const Error &e) {
        std::cerr << "relbound: " << e.what() << "\n";
        return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Usage ? kUsage : kAnalysis;
    }
}
