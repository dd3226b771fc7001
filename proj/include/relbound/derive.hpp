#ifndef RELBOUND_DERIVE_HPP
#define RELBOUND_DERIVE_HPP

#include <relbound/expr.hpp>

namespace relbound
{

// Symbolic partial derivative, simplified. Zero tree when wrt does not occur.
Expr derive(const Expr &e, const Symbol &wrt);
// Same without the final simplify (exposed for tests).
Expr derive_raw(const Expr &e, const Symbol &wrt);

// Local rewrites (x+0, x*1, x*0, 0/x, x/1, --x, constant folding) to a fixpoint.
Expr simplify(const Expr &e);

enum class NoiseSelect { Eps, Delta, Both };

// Replaces the selected noise symbols by the constant 0 (no simplification).
Expr substitute_zero_noise(const Expr &e, NoiseSelect which);

} // namespace relbound

#endif
