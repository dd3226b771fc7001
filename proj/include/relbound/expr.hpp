#ifndef RELBOUND_EXPR_HPP
#define RELBOUND_EXPR_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <relbound/rational.hpp>

namespace relbound
{

enum class Op : std::uint8_t {
    Const,
    Var,   // input variable, by parameter position
    Eps,   // relative rounding noise e_i
    Delta, // absolute (subnormal) rounding noise d_i
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
};

struct Node;
// Immutable, shareable expression tree.
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    Rational value;   // Const
    int index = -1;   // Var / Eps / Delta
    std::string name; // Var
    Expr lhs;         // unary operand or left operand
    Expr rhs;
};

enum class SymbolKind : std::uint8_t { Var, Eps, Delta };

struct Symbol {
    SymbolKind kind;
    int index;

    friend bool operator==(const Symbol &, const Symbol &) = default;
    friend auto operator<=>(const Symbol &, const Symbol &) = default;
};

inline bool is_binary(Op op)
{
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

inline bool is_leaf(Op op)
{
    return op == Op::Const || op == Op::Var || op == Op::Eps || op == Op::Delta;
}

namespace ex
{

Expr constant(Rational value);
Expr var(int index, std::string name);
Expr eps(int index);
Expr delta(int index);
Expr neg(Expr a);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr sqrt(Expr a);
Expr make(Op op, Expr a, Expr b);

} // namespace ex

bool is_const(const Expr &e, const Rational &value);
bool structurally_equal(const Expr &a, const Expr &b);
bool contains_symbol(const Expr &e, const Symbol &s);
bool contains_noise(const Expr &e);
bool contains_sqrt(const Expr &e);
// Tree size, counting shared subtrees once per occurrence.
std::size_t node_count(const Expr &e);
// Sorted, deduplicated.
std::vector<Symbol> collect_symbols(const Expr &e);

// Infix rendering in the input grammar (noise symbols print as e<i> / d<i>).
std::string to_string(const Expr &e);

} // namespace relbound

#endif
