#ifndef RELBOUND_RESULTS_HPP
#define RELBOUND_RESULTS_HPP

#include <optional>
#include <string>
#include <vector>

#include <relbound/interval.hpp>
#include <relbound/range.hpp>

namespace relbound
{

struct TraceEntry {
    int op_id;
    std::string node;
    Interval range_used;   // finite range the new roundoff was computed from
    Rational new_roundoff; // magnitude of the fresh error term
};

struct AbsErrorResult {
    Rational bound;
    Interval result_range;
    RangeMethod method = RangeMethod::IntervalOnly;
    std::string engine; // "forward" or "taylor"
    Rational remainder; // M_R (Taylor only)
    int queries = 0;
    double wall_seconds = 0;
    std::vector<TraceEntry> trace;
};

enum class RelMethod { ViaAbsolute, Direct, Naive, ForwardViaAbs };
const char *to_string(RelMethod m) noexcept;

struct RelErrorResult {
    Rational bound;
    RelMethod kind = RelMethod::Direct;
    Interval result_range;
    Rational remainder; // M_R contribution (Taylor methods)
    Rational first_order;
    int queries = 0;
    std::optional<Rational> achieved_gap;
    double wall_seconds = 0;
};

} // namespace relbound

#endif
