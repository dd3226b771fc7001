#include <relbound/corpus.hpp>
#include <relbound/driver.hpp>
#include <relbound/taylor.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace relbound
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ApproachName {
    Approach a;
    const char *name;
};

constexpr ApproachName kApproaches[] = {
    {Approach::Forward, "forward"},       {Approach::TaylorAbs, "taylor-abs"}, {Approach::TaylorRel, "taylor-rel"},
    {Approach::RelViaAbs, "rel-via-abs"}, {Approach::Naive, "naive"},
};

SubdivisionMethod subdivision_method(Approach a)
{
    return a == Approach::TaylorRel ? SubdivisionMethod::Direct : SubdivisionMethod::ViaAbsForward;
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Usage, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Fn> void parallel_for(std::size_t count, int jobs, Fn &&fn)
{
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

} // namespace

const char *to_string(Approach a) noexcept
{
    for (const auto &n : kApproaches) {
        if (n.a == a) {
            return n.name;
        }
    }
    return "?";
}

Approach approach_from_string(const std::string &s)
{
    for (const auto &n : kApproaches) {
        if (s == n.name) {
            return n.a;
        }
    }
    throw Error(ErrorKind::Usage, "unknown approach '" + s + "'");
}

bool is_relative(Approach a) noexcept
{
    return a == Approach::TaylorRel || a == Approach::RelViaAbs || a == Approach::Naive;
}

OutputFormat format_from_string(const std::string &s)
{
    if (s == "text") {
        return OutputFormat::Text;
    }
    if (s == "csv") {
        return OutputFormat::Csv;
    }
    if (s == "json") {
        return OutputFormat::Json;
    }
    throw Error(ErrorKind::Usage, "unknown output format '" + s + "'");
}

void RunConfig::validate() const
{
    refinement.validate();
    PrecisionSpec::by_name(precision);
    if (subdivide && approach != Approach::TaylorRel && approach != Approach::RelViaAbs) {
        throw Error(ErrorKind::Usage, std::string("--subdivide needs --approach taylor-rel or rel-via-abs, not ") +
                                          to_string(approach));
    }
    if (!subdivide && (m || budget)) {
        throw Error(ErrorKind::Usage, "--m and --budget only apply with --subdivide");
    }
    if ((m && *m < 1) || (budget && *budget < 1)) {
        throw Error(ErrorKind::Usage, "--m and --budget must be positive");
    }
    if (samples < 0) {
        throw Error(ErrorKind::Usage, "--samples must be nonnegative");
    }
    if (jobs < 1) {
        throw Error(ErrorKind::Usage, "--jobs must be positive");
    }
}

int default_m(std::size_t nvars)
{
    return nvars <= 1 ? 8 : 4;
}

int default_budget(std::size_t nvars)
{
    return nvars <= 1 ? 50 : 100;
}

std::vector<FunctionSpec> load_inputs(const RunConfig &cfg)
{
    std::vector<FunctionSpec> out;
    for (const auto &in : cfg.inputs) {
        if (std::filesystem::exists(in)) {
            for (auto &f : parse_file(read_file(in))) {
                out.push_back(std::move(f));
            }
        } else {
            out.push_back(corpus_spec(in));
        }
    }
    if (cfg.function) {
        std::erase_if(out, [&](const FunctionSpec &f) { return f.name != *cfg.function; });
        if (out.empty()) {
            throw Error(ErrorKind::Usage, "no function named " + *cfg.function);
        }
    }
    return out;
}

FunctionReport analyze_function(const FunctionSpec &spec, const RunConfig &cfg)
{
    const auto t0 = Clock::now();
    const PrecisionSpec prec = PrecisionSpec::by_name(cfg.precision);
    AbstractionOptions abs_opts;
    abs_opts.round_inputs = cfg.round_inputs;

    FunctionReport rep;
    rep.name = spec.name;
    rep.approach = cfg.approach;
    rep.precision = prec.name;
    rep.domain = spec.domain;
    rep.relative = is_relative(cfg.approach);
    try {
        if (cfg.subdivide) {
            const std::size_t n = spec.domain.size();
            const auto plan =
                plan_subdivision(spec.domain, cfg.m.value_or(default_m(n)), cfg.budget.value_or(default_budget(n)));
            SubdivisionOptions so;
            so.jobs = cfg.jobs;
            so.range_method = cfg.range_method;
            so.abstraction = abs_opts;
            SubdivisionReport sub =
                analyze_subdivided(spec, prec, subdivision_method(cfg.approach), plan, cfg.refinement, so);
            if (!sub.suppressed && sub.rel_bound) {
                rep.bound = sub.rel_bound;
            } else {
                rep.error_kind = ErrorKind::ZeroRangeFailure;
                rep.error = sub.suppressed ? "relative error suppressed: failed on " +
                                                 std::to_string(sub.failure_count()) + " of " +
                                                 std::to_string(sub.total) + " sub-intervals"
                                           : "no sub-interval produced a relative bound";
            }
            rep.subdivision = std::move(sub);
        } else {
            switch (cfg.approach) {
                case Approach::Forward: {
                    AbsErrorResult r = forward_abs_error(spec, prec, cfg.range_method, cfg.refinement, abs_opts);
                    rep.bound = r.bound;
                    rep.result_range = r.result_range;
                    if (cfg.verbose) {
                        rep.trace = std::move(r.trace);
                    }
                    break;
                }
                case Approach::TaylorAbs: {
                    AbsErrorResult r = taylor_abs(spec, prec, cfg.refinement, abs_opts);
                    rep.bound = r.bound;
                    rep.result_range = r.result_range;
                    rep.remainder = r.remainder;
                    break;
                }
                case Approach::TaylorRel:
                case Approach::RelViaAbs:
                case Approach::Naive: {
                    RelErrorResult r = cfg.approach == Approach::TaylorRel ? taylor_rel_direct(spec, prec, cfg.refinement, abs_opts)
                                       : cfg.approach == Approach::Naive
                                           ? naive_rel(spec, prec, cfg.refinement, abs_opts)
                                           : rel_via_abs(spec, prec, cfg.range_method, cfg.refinement, abs_opts);
                    rep.bound = r.bound;
                    rep.result_range = r.result_range;
                    if (cfg.approach == Approach::TaylorRel) {
                        rep.remainder = r.remainder;
                    }
                    break;
                }
            }
        }
    } catch (const Error &e) {
        rep.error_kind = e.kind();
        rep.error = e.what();
    }
    if (cfg.samples > 0) {
        SamplerOptions so;
        so.n = cfg.samples;
        so.seed = cfg.seed;
        so.jobs = cfg.jobs;
        try {
            rep.sample = underapprox(spec, prec, so);
        } catch (const Error &) {
            // formats without a native evaluator have no sampler
        }
    }
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

RunReport execute(const std::vector<FunctionSpec> &specs, const RunConfig &cfg)
{
    cfg.validate();
    RunReport r;
    r.approach = to_string(cfg.approach);
    r.range_method = to_string(cfg.range_method);
    r.backend = to_string(cfg.refinement.backend);
    r.precision = PrecisionSpec::by_name(cfg.precision).name;
    r.timings = cfg.timings;
    for (const auto &s : specs) {
        r.functions.push_back(analyze_function(s, cfg));
    }
    return r;
}

int exit_status(const RunReport &r)
{
    for (const auto &f : r.functions) {
        if (!f.ok()) {
            return 2;
        }
    }
    return 0;
}

bool BenchReport::violation() const
{
    for (const auto &row : rows) {
        for (const auto &c : row.cells) {
            if (c.violation) {
                return true;
            }
        }
    }
    return false;
}

namespace
{

BenchCell whole_cell(const FunctionSpec &spec, Approach a, const RunConfig &base, const SampleReport &floor)
{
    RunConfig cfg = base;
    cfg.approach = a;
    cfg.subdivide = false;
    cfg.samples = 0;
    FunctionReport r = analyze_function(spec, cfg);
    BenchCell c;
    c.wall_seconds = r.wall_seconds;
    c.value = r.bound;
    if (!r.bound) {
        c.note = r.error_kind == ErrorKind::ZeroRangeFailure ? "zero-range" : to_string(*r.error_kind);
    } else if (floor.max_rel && *r.bound < *floor.max_rel) {
        c.violation = true;
    }
    return c;
}

BenchCell subdivided_cell(const FunctionSpec &spec, Approach a, const RunConfig &base,
                          const SubdivisionPlan &plan, const std::vector<SampleReport> &parts)
{
    RunConfig cfg = base;
    cfg.approach = a;
    cfg.subdivide = true;
    cfg.m = plan.m;
    cfg.budget = plan.budget;
    cfg.samples = 0;
    FunctionReport r = analyze_function(spec, cfg);
    BenchCell c;
    c.wall_seconds = r.wall_seconds;
    c.value = r.bound;
    if (!r.subdivision) {
        c.note = r.error_kind ? to_string(*r.error_kind) : "failed";
        return c;
    }
    const SubdivisionReport &sub = *r.subdivision;
    c.failures = sub.failure_count();
    c.total = sub.total;
    if (sub.suppressed) {
        c.note = "suppressed";
    }
    for (const auto &[box, abs] : sub.failed) {
        c.abs_fallback = c.abs_fallback ? max(*c.abs_fallback, abs) : abs;
    }
    for (std::size_t i = 0; i < sub.per_subdomain.size() && i < parts.size(); ++i) {
        const auto &piece = sub.per_subdomain[i];
        if (piece.rel && parts[i].max_rel && *piece.rel < *parts[i].max_rel) {
            c.violation = true;
        }
        if (piece.abs && *piece.abs < parts[i].max_abs) {
            c.violation = true;
        }
    }
    return c;
}

} // namespace

BenchReport run_bench(const std::vector<FunctionSpec> &specs, const BenchConfig &cfg)
{
    cfg.base.validate();
    BenchReport rep;
    rep.timings = cfg.base.timings;
    rep.columns = {"forward-via-abs", "taylor-direct", "naive", "subdiv-direct", "subdiv-forward"};
    rep.rows.resize(specs.size());
    RunConfig inner = cfg.base;
    inner.jobs = 1;

    parallel_for(specs.size(), cfg.base.jobs, [&](std::size_t k) {
        const FunctionSpec &spec = specs[k];
        const PrecisionSpec prec = PrecisionSpec::by_name(cfg.base.precision);
        SamplerOptions so;
        so.n = cfg.samples;
        so.seed = cfg.base.seed;
        const std::size_t n = spec.domain.size();
        const SubdivisionPlan plan = plan_subdivision(spec.domain, default_m(n), default_budget(n));
        // One sample stream: the whole domain first, then each planned piece.
        std::vector<Box> boxes = {spec.domain};
        boxes.insert(boxes.end(), plan.boxes.begin(), plan.boxes.end());
        std::vector<SampleReport> parts = underapprox_partitioned(spec, prec, boxes, so);
        const SampleReport floor = parts.front();
        parts.erase(parts.begin());

        BenchRow &row = rep.rows[k];
        row.name = spec.name;
        row.domain = spec.domain;
        row.underapprox = floor.max_rel;
        row.cells.push_back(whole_cell(spec, Approach::RelViaAbs, inner, floor));
        row.cells.push_back(whole_cell(spec, Approach::TaylorRel, inner, floor));
        row.cells.push_back(whole_cell(spec, Approach::Naive, inner, floor));
        row.cells.push_back(subdivided_cell(spec, Approach::TaylorRel, inner, plan, parts));
        row.cells.push_back(subdivided_cell(spec, Approach::RelViaAbs, inner, plan, parts));
    });
    return rep;
}

} // namespace relbound
