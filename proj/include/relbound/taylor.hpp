#ifndef RELBOUND_TAYLOR_HPP
#define RELBOUND_TAYLOR_HPP

#include <optional>
#include <vector>

#include <relbound/abstraction.hpp>
#include <relbound/parser.hpp>
#include <relbound/range.hpp>
#include <relbound/results.hpp>

namespace relbound
{

struct TaylorTerm {
    int noise_index;   // eps index
    Expr partial;      // d f~/d e_i at zero noise (Absolute) or -(that)/f (RelativeDirect)
    Expr numerator;    // d f~/d e_i at zero noise in both kinds
    Rational bound;    // bound on |e_i|
};

struct TaylorObjective {
    enum class Kind { Absolute, RelativeDirect };
    Kind kind = Kind::Absolute;
    std::vector<TaylorTerm> first_order;
    Rational remainder; // M_R
    Expr denominator;   // f, RelativeDirect only

    // Sum of weighted |numerator| terms, divided by |f| for RelativeDirect.
    Objective objective(const std::optional<Interval> &certificate = std::nullopt) const;
};

// First-order terms only; remainder left at 0.
TaylorObjective taylor_objective(const AbstractedExpr &a, TaylorObjective::Kind kind);

// 1/2 sum_ij |d2 f~/dy_i dy_j| b_i b_j over dom (box x noise box, by IA), plus
// sum_i |d f~/d d_i at zero noise| * bound(d_i). Divided by min|f| when
// f_range is given. Only structurally nonzero second partials are formed.
Rational remainder_bound(const AbstractedExpr &a, const Domain &dom,
                         const std::optional<Interval> &f_range = std::nullopt);

// Certified zero-free enclosure of f over the box, via range_refined.
// Throws Error(ZeroRangeFailure) when zero cannot be excluded.
Interval certify_zero_free(const Expr &f, const Domain &dom, const RefinementConfig &cfg, int *queries = nullptr);

AbsErrorResult taylor_abs(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                          const AbstractionOptions &opts = {});
RelErrorResult taylor_rel_direct(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                                 const AbstractionOptions &opts = {});
// Taylor absolute bound divided by min |f|.
RelErrorResult taylor_rel_via_abs(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                                  const AbstractionOptions &opts = {});
// max |(f - f~) / f| over box x noise box, no Taylor decomposition.
RelErrorResult naive_rel(const FunctionSpec &spec, const PrecisionSpec &prec, const RefinementConfig &cfg,
                         const AbstractionOptions &opts = {});

} // namespace relbound

#endif
