#ifndef RELBOUND_DATAFLOW_HPP
#define RELBOUND_DATAFLOW_HPP

#include <relbound/abstraction.hpp>
#include <relbound/parser.hpp>
#include <relbound/precision.hpp>
#include <relbound/range.hpp>
#include <relbound/results.hpp>

namespace relbound
{

// Forward propagation of (real range, error affine form) pairs. Throws
// Error(DivisionByZeroRange / NegativeSqrt) naming the offending node.
AbsErrorResult forward_abs_error(const FunctionSpec &spec, const PrecisionSpec &prec, RangeMethod rm,
                                 const RefinementConfig &cfg, const AbstractionOptions &opts = {},
                                 RangeCache *cache = nullptr);

// Absolute bound divided by the smallest |f|. Throws Error(ZeroRangeFailure)
// when the result range may contain zero.
RelErrorResult rel_via_abs(const FunctionSpec &spec, const PrecisionSpec &prec, RangeMethod rm,
                           const RefinementConfig &cfg, const AbstractionOptions &opts = {},
                           RangeCache *cache = nullptr);

} // namespace relbound

#endif
