#include <relbound/errors.hpp>
#include <relbound/eval.hpp>

#include <cmath>
#include <stdexcept>

namespace relbound
{

namespace
{

const Interval &lookup(const std::vector<Interval> &v, int index, const Interval &zero)
{
    return index >= 0 && static_cast<std::size_t>(index) < v.size() ? v[index] : zero;
}

Interval interval_rec(const Expr &e, const Domain &dom, int bits)
{
    static const Interval zero(Rational(0));
    switch (e->op) {
        case Op::Const:
            return Interval(e->value);
        case Op::Var:
            if (e->index < 0 || static_cast<std::size_t>(e->index) >= dom.vars.size()) {
                throw std::out_of_range("variable " + e->name + " has no range");
            }
            return dom.vars[e->index];
        case Op::Eps:
            return lookup(dom.eps, e->index, zero);
        case Op::Delta:
            return lookup(dom.delta, e->index, zero);
        case Op::Neg:
            return -interval_rec(e->lhs, dom, bits);
        case Op::Sqrt:
            return sqrt(interval_rec(e->lhs, dom, bits), bits);
        case Op::Add:
            return interval_rec(e->lhs, dom, bits) + interval_rec(e->rhs, dom, bits);
        case Op::Sub:
            return interval_rec(e->lhs, dom, bits) - interval_rec(e->rhs, dom, bits);
        case Op::Mul: {
            // Same subtree on both sides: the square is never negative.
            if (structurally_equal(e->lhs, e->rhs)) {
                return square(interval_rec(e->lhs, dom, bits));
            }
            return interval_rec(e->lhs, dom, bits) * interval_rec(e->rhs, dom, bits);
        }
        case Op::Div:
            return interval_rec(e->lhs, dom, bits) / interval_rec(e->rhs, dom, bits);
    }
    throw std::logic_error("bad op");
}

Interval point_rec(const Expr &e, const std::vector<Rational> &vars, const std::vector<Rational> &eps,
                   const std::vector<Rational> &delta)
{
    auto noise = [](const std::vector<Rational> &v, int i) {
        return i >= 0 && static_cast<std::size_t>(i) < v.size() ? Interval(v[i]) : Interval(Rational(0));
    };
    switch (e->op) {
        case Op::Const:
            return Interval(e->value);
        case Op::Var:
            if (e->index < 0 || static_cast<std::size_t>(e->index) >= vars.size()) {
                throw std::out_of_range("variable " + e->name + " is not bound");
            }
            return Interval(vars[e->index]);
        case Op::Eps:
            return noise(eps, e->index);
        case Op::Delta:
            return noise(delta, e->index);
        case Op::Neg:
            return -point_rec(e->lhs, vars, eps, delta);
        case Op::Sqrt: {
            Interval a = point_rec(e->lhs, vars, eps, delta);
            if (a.hi().sign() < 0) {
                throw Error(ErrorKind::NegativeSqrt, "sqrt of negative value " + a.hi().str());
            }
            // An enclosure straddling 0 can only come from an earlier sqrt; the
            // exact argument is then >= 0 or the expression is undefined anyway.
            if (a.lo().sign() < 0) {
                a = Interval(Rational(0), a.hi());
            }
            return sqrt(a, kOracleSqrtBits);
        }
        case Op::Add:
            return point_rec(e->lhs, vars, eps, delta) + point_rec(e->rhs, vars, eps, delta);
        case Op::Sub:
            return point_rec(e->lhs, vars, eps, delta) - point_rec(e->rhs, vars, eps, delta);
        case Op::Mul:
            return point_rec(e->lhs, vars, eps, delta) * point_rec(e->rhs, vars, eps, delta);
        case Op::Div: {
            const Interval n = point_rec(e->lhs, vars, eps, delta);
            const Interval d = point_rec(e->rhs, vars, eps, delta);
            if (d.contains_zero()) {
                throw Error(ErrorKind::DivisionByZeroPoint, "division by zero in " + to_string(e));
            }
            return n / d;
        }
    }
    throw std::logic_error("bad op");
}

template <typename T> T to_native(const Rational &x)
{
    if constexpr (std::is_same_v<T, float>) {
        return to_nearest_float(x);
    } else {
        return to_nearest_double(x);
    }
}

template <typename T> T checked(T v, const Expr &e)
{
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::InvalidFloatOp, "non-finite result in " + to_string(e));
    }
    return v;
}

template <typename T> T float_rec(const Expr &e, const std::vector<T> &vars)
{
    switch (e->op) {
        case Op::Const:
            return checked(to_native<T>(e->value), e);
        case Op::Var:
            return vars.at(e->index);
        case Op::Eps:
        case Op::Delta:
            throw std::invalid_argument("float evaluation of a noise symbol");
        case Op::Neg:
            return -float_rec(e->lhs, vars);
        case Op::Sqrt:
            return checked(std::sqrt(float_rec(e->lhs, vars)), e);
        case Op::Add:
            return checked(float_rec(e->lhs, vars) + float_rec(e->rhs, vars), e);
        case Op::Sub:
            return checked(float_rec(e->lhs, vars) - float_rec(e->rhs, vars), e);
        case Op::Mul:
            return checked(float_rec(e->lhs, vars) * float_rec(e->rhs, vars), e);
        case Op::Div:
            return checked(float_rec(e->lhs, vars) / float_rec(e->rhs, vars), e);
    }
    throw std::logic_error("bad op");
}

} // namespace

Interval eval_interval(const Expr &e, const Domain &dom, int sqrt_bits)
{
    return interval_rec(e, dom, sqrt_bits);
}

ExactValue eval_rational(const Expr &e, const std::vector<Rational> &vars, const std::vector<Rational> &eps,
                         const std::vector<Rational> &delta)
{
    const Interval r = point_rec(e, vars, eps, delta);
    return ExactValue{r.midpoint(), r.radius()};
}

double eval_float(const Expr &e, const std::vector<double> &vars, const PrecisionSpec &prec)
{
    if (prec.significand_bits == 53 && prec.min_exponent == -1022) {
        for (double v : vars) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::InvalidFloatOp, "non-finite input");
            }
        }
        return float_rec<double>(e, vars);
    }
    if (prec.significand_bits == 24 && prec.min_exponent == -126) {
        std::vector<float> fv;
        fv.reserve(vars.size());
        for (double v : vars) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::InvalidFloatOp, "non-finite input");
            }
            // Exact casts keep the sign of zero, which the rational route loses.
            const float exact = static_cast<float>(v);
            fv.push_back(static_cast<double>(exact) == v ? exact : to_nearest_float(Rational::from_double(v)));
        }
        return float_rec<float>(e, fv);
    }
    throw Error(ErrorKind::Usage, "no native evaluator for precision " + prec.name);
}

} // namespace relbound
