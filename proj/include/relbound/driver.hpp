#ifndef RELBOUND_DRIVER_HPP
#define RELBOUND_DRIVER_HPP

#include <optional>
#include <string>
#include <vector>

#include <relbound/dataflow.hpp>
#include <relbound/errors.hpp>
#include <relbound/parser.hpp>
#include <relbound/range.hpp>
#include <relbound/sampler.hpp>
#include <relbound/subdivision.hpp>

namespace relbound
{

enum class Approach { Forward, TaylorAbs, TaylorRel, RelViaAbs, Naive };
const char *to_string(Approach a) noexcept;
// "forward", "taylor-abs", "taylor-rel", "rel-via-abs", "naive"; throws Error(Usage).
Approach approach_from_string(const std::string &s);
bool is_relative(Approach a) noexcept;

enum class OutputFormat { Text, Csv, Json };
OutputFormat format_from_string(const std::string &s);

struct RunConfig {
    std::vector<std::string> inputs; // files, or names of bundled benchmarks
    std::optional<std::string> function; // only analyze this function
    Approach approach = Approach::TaylorRel;
    RangeMethod range_method = RangeMethod::IntervalWithRefinement;
    RefinementConfig refinement;
    bool subdivide = false;
    std::optional<int> m;
    std::optional<int> budget;
    std::string precision = "float64";
    long samples = 0; // 0: no sampling
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::Text;
    bool verbose = false;
    bool timings = false;
    bool round_inputs = true;
    int jobs = 1;

    // Throws Error(Usage) on inconsistent flag combinations.
    void validate() const;
};

// Division-by-zero mode defaults: m = 8, budget = 50 for one variable,
// m = 4, budget = 100 otherwise.
int default_m(std::size_t nvars);
int default_budget(std::size_t nvars);

struct FunctionReport {
    std::string name;
    Approach approach = Approach::TaylorRel;
    std::string precision;
    Box domain;
    bool relative = true;
    std::optional<Rational> bound;
    std::optional<Interval> result_range;
    std::optional<Rational> remainder;
    std::optional<SubdivisionReport> subdivision;
    std::optional<SampleReport> sample;
    std::optional<ErrorKind> error_kind;
    std::string error;
    std::vector<TraceEntry> trace; // verbose forward runs
    double wall_seconds = 0;

    bool ok() const
    {
        return bound.has_value() && !error_kind;
    }
};

struct RunReport {
    static constexpr int kSchemaVersion = 1;
    int schema_version = kSchemaVersion;
    std::string approach;
    std::string range_method;
    std::string backend;
    std::string precision;
    bool timings = false;
    std::vector<FunctionReport> functions;
};

// Loads every input (file path or bundled benchmark name). Throws ParseError
// or Error(Usage) for unknown inputs.
std::vector<FunctionSpec> load_inputs(const RunConfig &cfg);

FunctionReport analyze_function(const FunctionSpec &spec, const RunConfig &cfg);
RunReport execute(const std::vector<FunctionSpec> &specs, const RunConfig &cfg);

// 0 when every function produced its bound, 2 otherwise.
int exit_status(const RunReport &r);

struct BenchCell {
    std::optional<Rational> value;
    std::string note; // why the value is missing ("zero-range", "suppressed", ...)
    std::optional<Rational> abs_fallback;
    int failures = 0;
    int total = 0;
    double wall_seconds = 0;
    bool violation = false; // below the sampled floor
};

struct BenchRow {
    std::string name;
    Box domain;
    std::optional<Rational> underapprox;
    std::vector<BenchCell> cells; // parallel to BenchReport::columns
};

struct BenchReport {
    std::vector<std::string> columns;
    std::vector<BenchRow> rows;
    bool timings = false;

    bool violation() const;
};

struct BenchConfig {
    RunConfig base;
    long samples = 100000;
};

BenchReport run_bench(const std::vector<FunctionSpec> &specs, const BenchConfig &cfg);

} // namespace relbound

#endif
