#include <relbound/expr.hpp>

#include <algorithm>
#include <stdexcept>

namespace relbound
{

namespace ex
{

namespace
{

Expr node(Op op, Expr a = nullptr, Expr b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

} // namespace

Expr constant(Rational value)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = std::move(value);
    return n;
}

Expr var(int index, std::string name)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->index = index;
    n->name = std::move(name);
    return n;
}

Expr eps(int index)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Eps;
    n->index = index;
    return n;
}

Expr delta(int index)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Delta;
    n->index = index;
    return n;
}

Expr neg(Expr a)
{
    return node(Op::Neg, std::move(a));
}
Expr add(Expr a, Expr b)
{
    return node(Op::Add, std::move(a), std::move(b));
}
Expr sub(Expr a, Expr b)
{
    return node(Op::Sub, std::move(a), std::move(b));
}
Expr mul(Expr a, Expr b)
{
    return node(Op::Mul, std::move(a), std::move(b));
}
Expr div(Expr a, Expr b)
{
    return node(Op::Div, std::move(a), std::move(b));
}
Expr sqrt(Expr a)
{
    return node(Op::Sqrt, std::move(a));
}

Expr make(Op op, Expr a, Expr b)
{
    switch (op) {
        case Op::Neg:
            return neg(std::move(a));
        case Op::Sqrt:
            return sqrt(std::move(a));
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            return node(op, std::move(a), std::move(b));
        default:
            throw std::invalid_argument("ex::make called with a leaf op");
    }
}

} // namespace ex

bool is_const(const Expr &e, const Rational &value)
{
    return e->op == Op::Const && e->value == value;
}

bool structurally_equal(const Expr &a, const Expr &b)
{
    if (a == b) {
        return true;
    }
    if (a->op != b->op) {
        return false;
    }
    switch (a->op) {
        case Op::Const:
            return a->value == b->value;
        case Op::Var:
        case Op::Eps:
        case Op::Delta:
            return a->index == b->index;
        case Op::Neg:
        case Op::Sqrt:
            return structurally_equal(a->lhs, b->lhs);
        default:
            return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

namespace
{

Symbol symbol_of(const Node &n)
{
    switch (n.op) {
        case Op::Var:
            return {SymbolKind::Var, n.index};
        case Op::Eps:
            return {SymbolKind::Eps, n.index};
        default:
            return {SymbolKind::Delta, n.index};
    }
}

template <typename Pred> bool any_node(const Expr &e, Pred &&pred)
{
    if (pred(*e)) {
        return true;
    }
    if (e->lhs && any_node(e->lhs, pred)) {
        return true;
    }
    return e->rhs && any_node(e->rhs, pred);
}

} // namespace

bool contains_symbol(const Expr &e, const Symbol &s)
{
    return any_node(e, [&](const Node &n) {
        return (n.op == Op::Var || n.op == Op::Eps || n.op == Op::Delta) && symbol_of(n) == s;
    });
}

bool contains_noise(const Expr &e)
{
    return any_node(e, [](const Node &n) { return n.op == Op::Eps || n.op == Op::Delta; });
}

bool contains_sqrt(const Expr &e)
{
    return any_node(e, [](const Node &n) { return n.op == Op::Sqrt; });
}

std::size_t node_count(const Expr &e)
{
    std::size_t n = 1;
    if (e->lhs) {
        n += node_count(e->lhs);
    }
    if (e->rhs) {
        n += node_count(e->rhs);
    }
    return n;
}

std::vector<Symbol> collect_symbols(const Expr &e)
{
    std::vector<Symbol> out;
    any_node(e, [&](const Node &n) {
        if (n.op == Op::Var || n.op == Op::Eps || n.op == Op::Delta) {
            out.push_back(symbol_of(n));
        }
        return false;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace
{

// Binding strength used by the printer; mirrors the parser's grammar levels.
constexpr int kAdditive = 1;
constexpr int kSigned = 2;
constexpr int kMultiplicative = 3;
constexpr int kAtom = 4;

int level_of(const Expr &e)
{
    switch (e->op) {
        case Op::Add:
        case Op::Sub:
            return kAdditive;
        case Op::Neg:
            return kSigned;
        case Op::Mul:
        case Op::Div:
            return kMultiplicative;
        case Op::Const:
            if (e->value.sign() < 0) {
                return kSigned;
            }
            return e->value.exact_decimal().empty() ? kMultiplicative : kAtom;
        default:
            return kAtom;
    }
}

std::string render(const Expr &e);

std::string render_at(const Expr &e, int required)
{
    std::string s = render(e);
    return level_of(e) < required ? "(" + s + ")" : s;
}

std::string render_const(const Rational &v)
{
    if (v.sign() < 0) {
        return "-" + render_const(-v);
    }
    if (v.is_integer()) {
        return v.str();
    }
    const std::string d = v.exact_decimal();
    if (!d.empty()) {
        return d;
    }
    return v.numerator().get_str() + " / " + v.denominator().get_str();
}

std::string render(const Expr &e)
{
    switch (e->op) {
        case Op::Const:
            return render_const(e->value);
        case Op::Var:
            return e->name.empty() ? "x" + std::to_string(e->index) : e->name;
        case Op::Eps:
            return "e" + std::to_string(e->index);
        case Op::Delta:
            return "d" + std::to_string(e->index);
        case Op::Neg:
            return "-" + render_at(e->lhs, kMultiplicative);
        case Op::Sqrt:
            return "sqrt(" + render(e->lhs) + ")";
        case Op::Add:
            return render_at(e->lhs, kAdditive) + " + " + render_at(e->rhs, kMultiplicative);
        case Op::Sub:
            return render_at(e->lhs, kAdditive) + " - " + render_at(e->rhs, kMultiplicative);
        case Op::Mul:
            return render_at(e->lhs, kMultiplicative) + " * " + render_at(e->rhs, kAtom);
        case Op::Div:
            return render_at(e->lhs, kMultiplicative) + " / " + render_at(e->rhs, kAtom);
    }
    return "?";
}

} // namespace

std::string to_string(const Expr &e)
{
    return render(e);
}

} // namespace relbound
