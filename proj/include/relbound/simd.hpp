#ifndef RELBOUND_SIMD_HPP
#define RELBOUND_SIMD_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <relbound/expr.hpp>
#include <relbound/precision.hpp>

namespace relbound::simd
{

enum class OpCode : std::uint8_t { Load, Const, Neg, Add, Sub, Mul, Div, Sqrt };

// One SSA step; the result lives in the register named by its position.
struct Instr {
    OpCode op;
    std::int32_t a; // variable index for Load, operand register otherwise
    std::int32_t b;
    double value; // Const, already rounded to the target format
};

// Linear program for batched IEEE evaluation of a noise-free expression.
class Tape
{
public:
    // Throws Error(Usage) for formats other than binary32 / binary64 and for
    // expressions that contain noise symbols.
    static Tape compile(const Expr &e, const PrecisionSpec &prec);

    const std::vector<Instr> &code() const
    {
        return code_;
    }
    bool single() const
    {
        return single_;
    }
    int var_count() const
    {
        return vars_;
    }

private:
    std::vector<Instr> code_;
    bool single_ = false;
    int vars_ = 0;
};

enum class Kernel { Scalar, Avx2, Neon };
const char *to_string(Kernel k) noexcept;
bool kernel_available(Kernel k) noexcept;
// Best available kernel; RELBOUND_SIMD=scalar forces the reference kernel.
Kernel active_kernel();

// inputs is variable-major: inputs[v * n + i] is variable v of point i, each
// already representable in the tape's format. out[i] receives the result and
// bad[i] = 1 when any step produced NaN or an infinity.
void evaluate(const Tape &t, const double *inputs, std::size_t n, double *out, std::uint8_t *bad, Kernel k);
void evaluate(const Tape &t, const double *inputs, std::size_t n, double *out, std::uint8_t *bad);

} // namespace relbound::simd

#endif
