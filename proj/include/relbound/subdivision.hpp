#ifndef RELBOUND_SUBDIVISION_HPP
#define RELBOUND_SUBDIVISION_HPP

#include <optional>
#include <string>
#include <vector>

#include <relbound/abstraction.hpp>
#include <relbound/box.hpp>
#include <relbound/errors.hpp>
#include <relbound/parser.hpp>
#include <relbound/precision.hpp>
#include <relbound/range.hpp>

namespace relbound
{

struct SubdivisionPlan {
    int m = 1;
    int budget = 1;
    std::vector<std::size_t> chosen; // variable positions, widest first
    std::vector<Box> boxes;          // lexicographic order over the chosen variables
    std::string warning;
};

// floor(log_m(budget - n)) variables, capped at n; none when budget - n < m.
// Throws Error(Usage) when m < 1 or budget < 1.
SubdivisionPlan plan_subdivision(const Box &box, int m, int budget);

enum class SubdivisionMethod { Direct, ViaAbsForward };
const char *to_string(SubdivisionMethod m) noexcept;

struct SubdomainOutcome {
    Box box;
    std::optional<Rational> rel; // relative bound when the relative method succeeded
    std::optional<Rational> abs; // absolute fallback bound after a zero-range failure
    std::string error;           // any other analysis error
    double wall_seconds = 0;
};

struct SubdivisionReport {
    std::optional<Rational> rel_bound;
    std::vector<std::pair<Box, Rational>> failed; // (sub-box, absolute bound)
    int total = 0;
    bool suppressed = false;
    std::vector<SubdomainOutcome> per_subdomain;
    std::vector<std::string> errors;
    std::optional<Rational> whole_bound; // same method on the undivided box
    double wall_seconds = 0;

    // Number of sub-boxes where the relative method hit a zero-range failure.
    int failure_count() const;
};

struct SubdivisionOptions {
    int jobs = 1;
    // Forward method only.
    RangeMethod range_method = RangeMethod::IntervalWithRefinement;
    AbstractionOptions abstraction;
    // Report min(piece bound, whole-domain bound) per piece.
    bool cap_with_whole = true;
};

SubdivisionReport analyze_subdivided(const FunctionSpec &spec, const PrecisionSpec &prec, SubdivisionMethod method,
                                     const SubdivisionPlan &plan, const RefinementConfig &cfg,
                                     const SubdivisionOptions &opts = {});

} // namespace relbound

#endif
