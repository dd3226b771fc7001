#ifndef RELBOUND_EVAL_HPP
#define RELBOUND_EVAL_HPP

#include <vector>

#include <relbound/box.hpp>
#include <relbound/expr.hpp>
#include <relbound/interval.hpp>
#include <relbound/precision.hpp>

namespace relbound
{

// Ranges for every symbol kind: input box plus noise box. Noise indices
// absent from eps / delta are treated as [0, 0].
struct Domain {
    std::vector<Interval> vars;
    std::vector<Interval> eps;
    std::vector<Interval> delta;

    static Domain from_box(const Box &box)
    {
        return Domain{box.intervals(), {}, {}};
    }
};

constexpr int kDefaultSqrtBits = 80;
constexpr int kOracleSqrtBits = 200;

// Bottom-up interval evaluation. Throws DivisionByZeroRange / NegativeSqrt.
Interval eval_interval(const Expr &e, const Domain &dom, int sqrt_bits = kDefaultSqrtBits);

// Exact value, or the midpoint of a 2^-200 enclosure when a sqrt is irrational.
struct ExactValue {
    Rational value;
    Rational radius; // 0 when exact

    bool enclosed() const
    {
        return !radius.is_zero();
    }
    Interval enclosure() const
    {
        return Interval(value - radius, value + radius);
    }
};

// Noise symbols read their value from eps / delta (missing entries are 0).
// Throws DivisionByZeroPoint / NegativeSqrt.
ExactValue eval_rational(const Expr &e, const std::vector<Rational> &vars, const std::vector<Rational> &eps = {},
                         const std::vector<Rational> &delta = {});

// IEEE evaluation with round-to-nearest-even at every operation, in binary32
// or binary64 depending on prec. Throws InvalidFloatOp on NaN / infinity.
double eval_float(const Expr &e, const std::vector<double> &vars, const PrecisionSpec &prec);

} // namespace relbound

#endif
