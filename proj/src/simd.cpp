#include <relbound/errors.hpp>
#include <relbound/simd.hpp>

#include "simd_kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <string_view>

namespace relbound::simd
{

namespace
{

class Compiler
{
public:
    Compiler(const PrecisionSpec &prec, std::vector<Instr> &code) : prec_(prec), code_(code) {}

    std::int32_t emit(const Expr &e)
    {
        switch (e->op) {
            case Op::Const: {
                const Rational r = round_to_precision(e->value, prec_);
                return push({OpCode::Const, 0, 0, to_nearest_double(r)});
            }
            case Op::Var: {
                auto it = loads_.find(e->index);
                if (it != loads_.end()) {
                    return it->second;
                }
                const std::int32_t r = push({OpCode::Load, e->index, 0, 0});
                loads_.emplace(e->index, r);
                max_var_ = std::max(max_var_, e->index);
                return r;
            }
            case Op::Eps:
            case Op::Delta:
                throw Error(ErrorKind::Usage, "cannot compile noise symbols to a float tape");
            case Op::Neg:
                return push({OpCode::Neg, emit(e->lhs), 0, 0});
            case Op::Sqrt:
                return push({OpCode::Sqrt, emit(e->lhs), 0, 0});
            default:
                break;
        }
        const std::int32_t a = emit(e->lhs);
        const std::int32_t b = emit(e->rhs);
        OpCode op = OpCode::Add;
        switch (e->op) {
            case Op::Sub:
                op = OpCode::Sub;
                break;
            case Op::Mul:
                op = OpCode::Mul;
                break;
            case Op::Div:
                op = OpCode::Div;
                break;
            default:
                break;
        }
        return push({op, a, b, 0});
    }

    int var_count() const
    {
        return max_var_ + 1;
    }

private:
    std::int32_t push(Instr i)
    {
        code_.push_back(i);
        return static_cast<std::int32_t>(code_.size() - 1);
    }

    const PrecisionSpec &prec_;
    std::vector<Instr> &code_;
    std::map<int, std::int32_t> loads_;
    int max_var_ = -1;
};

template <typename T>
void scalar_kernel(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out,
                   std::uint8_t *bad, void *scratch)
{
    T *r = static_cast<T *>(scratch);
    for (std::size_t i = 0; i < n; ++i) {
        bool invalid = false;
        for (std::size_t t = 0; t < len; ++t) {
            const Instr &ins = code[t];
            T v{};
            switch (ins.op) {
                case OpCode::Load:
                    v = static_cast<T>(in[static_cast<std::size_t>(ins.a) * n + i]);
                    break;
                case OpCode::Const:
                    v = static_cast<T>(ins.value);
                    break;
                case OpCode::Neg:
                    v = -r[ins.a];
                    break;
                case OpCode::Add:
                    v = r[ins.a] + r[ins.b];
                    break;
                case OpCode::Sub:
                    v = r[ins.a] - r[ins.b];
                    break;
                case OpCode::Mul:
                    v = r[ins.a] * r[ins.b];
                    break;
                case OpCode::Div:
                    v = r[ins.a] / r[ins.b];
                    break;
                case OpCode::Sqrt:
                    v = std::sqrt(r[ins.a]);
                    break;
            }
            invalid = invalid || !std::isfinite(v);
            r[t] = v;
        }
        out[i] = static_cast<double>(r[len - 1]);
        bad[i] = invalid ? 1 : 0;
    }
}

detail::KernelFn kernel_fn(Kernel k, bool single)
{
    switch (k) {
#ifdef RELBOUND_HAVE_AVX2
        case Kernel::Avx2:
            return single ? detail::avx2_f32 : detail::avx2_f64;
#endif
#ifdef RELBOUND_HAVE_NEON
        case Kernel::Neon:
            return single ? detail::neon_f32 : detail::neon_f64;
#endif
        default:
            return single ? detail::scalar_f32 : detail::scalar_f64;
    }
}

} // namespace

namespace detail
{

void scalar_f64(const Instr *c, std::size_t l, const double *in, std::size_t n, double *out, std::uint8_t *bad,
                void *s)
{
    scalar_kernel<double>(c, l, in, n, out, bad, s);
}

void scalar_f32(const Instr *c, std::size_t l, const double *in, std::size_t n, double *out, std::uint8_t *bad,
                void *s)
{
    scalar_kernel<float>(c, l, in, n, out, bad, s);
}

} // namespace detail

Tape Tape::compile(const Expr &e, const PrecisionSpec &prec)
{
    Tape t;
    if (prec.significand_bits == 24 && prec.min_exponent == -126) {
        t.single_ = true;
    } else if (!(prec.significand_bits == 53 && prec.min_exponent == -1022)) {
        throw Error(ErrorKind::Usage, "float tapes support binary32 and binary64 only");
    }
    Compiler c(prec, t.code_);
    c.emit(e);
    t.vars_ = c.var_count();
    return t;
}

const char *to_string(Kernel k) noexcept
{
    switch (k) {
        case Kernel::Scalar:
            return "scalar";
        case Kernel::Avx2:
            return "avx2";
        case Kernel::Neon:
            return "neon";
    }
    return "?";
}

bool kernel_available(Kernel k) noexcept
{
    switch (k) {
        case Kernel::Scalar:
            return true;
        case Kernel::Avx2:
#ifdef RELBOUND_HAVE_AVX2
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Kernel::Neon:
#ifdef RELBOUND_HAVE_NEON
            return true;
#else
            return false;
#endif
    }
    return false;
}

Kernel active_kernel()
{
    static const Kernel chosen = [] {
        const char *env = std::getenv("RELBOUND_SIMD");
        if (env && std::string_view(env) == "scalar") {
            return Kernel::Scalar;
        }
        for (Kernel k : {Kernel::Avx2, Kernel::Neon}) {
            if (kernel_available(k)) {
                return k;
            }
        }
        return Kernel::Scalar;
    }();
    return chosen;
}

void evaluate(const Tape &t, const double *inputs, std::size_t n, double *out, std::uint8_t *bad, Kernel k)
{
    if (!kernel_available(k)) {
        throw Error(ErrorKind::Usage, std::string("kernel not available: ") + to_string(k));
    }
    if (n == 0 || t.code().empty()) {
        return;
    }
    std::vector<unsigned char> scratch(t.code().size() * detail::kScratchPerInstr);
    kernel_fn(k, t.single())(t.code().data(), t.code().size(), inputs, n, out, bad, scratch.data());
}

void evaluate(const Tape &t, const double *inputs, std::size_t n, double *out, std::uint8_t *bad)
{
    evaluate(t, inputs, n, out, bad, active_kernel());
}

} // namespace relbound::simd
