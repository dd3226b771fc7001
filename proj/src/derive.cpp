#include <relbound/derive.hpp>
#include <relbound/interval.hpp>

#include <optional>
#include <stdexcept>

namespace relbound
{

namespace
{

bool is_zero(const Expr &e)
{
    return is_const(e, Rational(0));
}

bool is_one(const Expr &e)
{
    return is_const(e, Rational(1));
}

bool matches(const Node &n, const Symbol &s)
{
    switch (s.kind) {
        case SymbolKind::Var:
            return n.op == Op::Var && n.index == s.index;
        case SymbolKind::Eps:
            return n.op == Op::Eps && n.index == s.index;
        case SymbolKind::Delta:
            return n.op == Op::Delta && n.index == s.index;
    }
    return false;
}

Expr diff(const Expr &e, const Symbol &s)
{
    static const Expr zero = ex::constant(0);
    static const Expr one = ex::constant(1);
    static const Expr two = ex::constant(2);
    if (is_leaf(e->op)) {
        return matches(*e, s) ? one : zero;
    }
    if (!contains_symbol(e, s)) {
        return zero;
    }
    switch (e->op) {
        case Op::Neg:
            return ex::neg(diff(e->lhs, s));
        case Op::Add:
            return ex::add(diff(e->lhs, s), diff(e->rhs, s));
        case Op::Sub:
            return ex::sub(diff(e->lhs, s), diff(e->rhs, s));
        case Op::Mul:
            return ex::add(ex::mul(diff(e->lhs, s), e->rhs), ex::mul(e->lhs, diff(e->rhs, s)));
        case Op::Div: {
            const Expr da = diff(e->lhs, s);
            const Expr db = diff(e->rhs, s);
            if (is_zero(db)) {
                return ex::div(da, e->rhs);
            }
            return ex::div(ex::sub(ex::mul(da, e->rhs), ex::mul(e->lhs, db)), ex::mul(e->rhs, e->rhs));
        }
        case Op::Sqrt:
            return ex::div(diff(e->lhs, s), ex::mul(two, e));
        default:
            break;
    }
    throw std::logic_error("bad op in derive");
}

std::optional<Rational> exact_sqrt(const Rational &v)
{
    if (v.sign() < 0) {
        return std::nullopt;
    }
    const Interval r = rat_sqrt_outward(v, 64);
    if (r.is_point()) {
        return r.lo();
    }
    return std::nullopt;
}

// One rewrite step at the root; children are already simplified.
Expr rewrite(const Expr &e)
{
    const Expr &a = e->lhs;
    const Expr &b = e->rhs;
    switch (e->op) {
        case Op::Neg:
            if (a->op == Op::Const) {
                return ex::constant(-a->value);
            }
            if (a->op == Op::Neg) {
                return a->lhs;
            }
            return e;
        case Op::Add:
            if (a->op == Op::Const && b->op == Op::Const) {
                return ex::constant(a->value + b->value);
            }
            if (is_zero(b)) {
                return a;
            }
            if (is_zero(a)) {
                return b;
            }
            return e;
        case Op::Sub:
            if (a->op == Op::Const && b->op == Op::Const) {
                return ex::constant(a->value - b->value);
            }
            if (is_zero(b)) {
                return a;
            }
            if (is_zero(a)) {
                return rewrite(ex::neg(b));
            }
            return e;
        case Op::Mul:
            if (a->op == Op::Const && b->op == Op::Const) {
                return ex::constant(a->value * b->value);
            }
            if (is_zero(a) || is_zero(b)) {
                return ex::constant(0);
            }
            if (is_one(b)) {
                return a;
            }
            if (is_one(a)) {
                return b;
            }
            return e;
        case Op::Div:
            if (is_zero(a)) {
                return ex::constant(0);
            }
            if (b->op == Op::Const && !b->value.is_zero()) {
                if (a->op == Op::Const) {
                    return ex::constant(a->value / b->value);
                }
                if (is_one(b)) {
                    return a;
                }
            }
            return e;
        case Op::Sqrt:
            if (a->op == Op::Const) {
                if (auto r = exact_sqrt(a->value)) {
                    return ex::constant(*r);
                }
            }
            return e;
        default:
            return e;
    }
}

Expr simplify_once(const Expr &e)
{
    if (is_leaf(e->op)) {
        return e;
    }
    const Expr a = simplify_once(e->lhs);
    const Expr b = e->rhs ? simplify_once(e->rhs) : nullptr;
    const Expr rebuilt = (a == e->lhs && b == e->rhs) ? e : ex::make(e->op, a, b);
    return rewrite(rebuilt);
}

Expr zero_rec(const Expr &e, NoiseSelect which)
{
    static const Expr zero = ex::constant(0);
    switch (e->op) {
        case Op::Eps:
            return which != NoiseSelect::Delta ? zero : e;
        case Op::Delta:
            return which != NoiseSelect::Eps ? zero : e;
        case Op::Const:
        case Op::Var:
            return e;
        default: {
            const Expr a = zero_rec(e->lhs, which);
            const Expr b = e->rhs ? zero_rec(e->rhs, which) : nullptr;
            return (a == e->lhs && b == e->rhs) ? e : ex::make(e->op, a, b);
        }
    }
}

} // namespace

Expr derive_raw(const Expr &e, const Symbol &wrt)
{
    return diff(e, wrt);
}

Expr derive(const Expr &e, const Symbol &wrt)
{
    return simplify(diff(e, wrt));
}

Expr simplify(const Expr &e)
{
    Expr cur = e;
    for (;;) {
        Expr next = simplify_once(cur);
        if (next == cur || structurally_equal(next, cur)) {
            return next;
        }
        cur = next;
    }
}

Expr substitute_zero_noise(const Expr &e, NoiseSelect which)
{
    return zero_rec(e, which);
}

} // namespace relbound
