#ifndef RELBOUND_ABSTRACTION_HPP
#define RELBOUND_ABSTRACTION_HPP

#include <string>
#include <vector>

#include <relbound/eval.hpp>
#include <relbound/expr.hpp>
#include <relbound/precision.hpp>

namespace relbound
{

enum class NoiseKind { Eps, Delta };

// Where a noise symbol came from. source_op is the post-order position of the
// originating node in the input tree.
struct NoiseEntry {
    NoiseKind kind;
    int index;
    int source_op;
    std::string source; // rendering of the originating subexpression
};

struct AbstractionOptions {
    // Wrap variable reads with input-rounding noise.
    bool round_inputs = true;
};

// f~(x, e, d): every rounding replaced by (.)(1 + e_i) + d_i. Eps and delta
// indices live in separate ranges [0, eps_count) and [0, delta_count).
struct AbstractedExpr {
    Expr original;
    Expr tree;
    std::vector<NoiseEntry> registry;
    Rational eps_bound;
    Rational delta_bound;
    // Per-index bounds; uniform by default but kept separate on purpose.
    std::vector<Rational> eps_bounds;
    std::vector<Rational> delta_bounds;

    int eps_count() const
    {
        return static_cast<int>(eps_bounds.size());
    }
    int delta_count() const
    {
        return static_cast<int>(delta_bounds.size());
    }
    // Box over the input variables plus [-bound, bound] per noise symbol.
    Domain domain(const std::vector<Interval> &vars) const;
};

AbstractedExpr abstract_fp(const Expr &e, const PrecisionSpec &prec, const AbstractionOptions &opts = {});

} // namespace relbound

#endif
