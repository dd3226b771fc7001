// Compiled with -mavx2 (and without FMA); only reached after a runtime CPU check.
#include "simd_kernels.hpp"

#include <immintrin.h>

namespace relbound::simd::detail
{

namespace
{

__m256d load_f64(const double *in, std::size_t i, std::size_t count)
{
    if (count == 4) {
        return _mm256_loadu_pd(in + i);
    }
    alignas(32) double tmp[4] = {1.0, 1.0, 1.0, 1.0};
    for (std::size_t j = 0; j < count; ++j) {
        tmp[j] = in[i + j];
    }
    return _mm256_load_pd(tmp);
}

__m256 load_f32(const double *in, std::size_t i, std::size_t count)
{
    alignas(32) double tmp[8] = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    for (std::size_t j = 0; j < count; ++j) {
        tmp[j] = in[i + j];
    }
    const __m128 lo = _mm256_cvtpd_ps(_mm256_load_pd(tmp));
    const __m128 hi = _mm256_cvtpd_ps(_mm256_load_pd(tmp + 4));
    return _mm256_set_m128(hi, lo);
}

} // namespace

void avx2_f64(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out, std::uint8_t *bad,
              void *scratch)
{
    double *regs = static_cast<double *>(scratch);
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d inf = _mm256_set1_pd(__builtin_inf());
    for (std::size_t i = 0; i < n; i += 4) {
        const std::size_t count = n - i < 4 ? n - i : 4;
        __m256d invalid = _mm256_setzero_pd();
        __m256d v = _mm256_setzero_pd();
        for (std::size_t t = 0; t < len; ++t) {
            const Instr &ins = code[t];
            switch (ins.op) {
                case OpCode::Load:
                    v = load_f64(in + static_cast<std::size_t>(ins.a) * n, i, count);
                    break;
                case OpCode::Const:
                    v = _mm256_set1_pd(ins.value);
                    break;
                case OpCode::Neg:
                    v = _mm256_xor_pd(_mm256_loadu_pd(regs + 4 * ins.a), sign);
                    break;
                case OpCode::Add:
                    v = _mm256_add_pd(_mm256_loadu_pd(regs + 4 * ins.a), _mm256_loadu_pd(regs + 4 * ins.b));
                    break;
                case OpCode::Sub:
                    v = _mm256_sub_pd(_mm256_loadu_pd(regs + 4 * ins.a), _mm256_loadu_pd(regs + 4 * ins.b));
                    break;
                case OpCode::Mul:
                    v = _mm256_mul_pd(_mm256_loadu_pd(regs + 4 * ins.a), _mm256_loadu_pd(regs + 4 * ins.b));
                    break;
                case OpCode::Div:
                    v = _mm256_div_pd(_mm256_loadu_pd(regs + 4 * ins.a), _mm256_loadu_pd(regs + 4 * ins.b));
                    break;
                case OpCode::Sqrt:
                    v = _mm256_sqrt_pd(_mm256_loadu_pd(regs + 4 * ins.a));
                    break;
            }
            invalid = _mm256_or_pd(invalid, _mm256_cmp_pd(_mm256_andnot_pd(sign, v), inf, _CMP_NLT_UQ));
            _mm256_storeu_pd(regs + 4 * t, v);
        }
        alignas(32) double res[4];
        _mm256_store_pd(res, v);
        const int mask = _mm256_movemask_pd(invalid);
        for (std::size_t j = 0; j < count; ++j) {
            out[i + j] = res[j];
            bad[i + j] = static_cast<std::uint8_t>((mask >> j) & 1);
        }
    }
}

void avx2_f32(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out, std::uint8_t *bad,
              void *scratch)
{
    float *regs = static_cast<float *>(scratch);
    const __m256 sign = _mm256_set1_ps(-0.0f);
    const __m256 inf = _mm256_set1_ps(__builtin_inff());
    for (std::size_t i = 0; i < n; i += 8) {
        const std::size_t count = n - i < 8 ? n - i : 8;
        __m256 invalid = _mm256_setzero_ps();
        __m256 v = _mm256_setzero_ps();
        for (std::size_t t = 0; t < len; ++t) {
            const Instr &ins = code[t];
            switch (ins.op) {
                case OpCode::Load:
                    v = load_f32(in + static_cast<std::size_t>(ins.a) * n, i, count);
                    break;
                case OpCode::Const:
                    v = _mm256_set1_ps(static_cast<float>(ins.value));
                    break;
                case OpCode::Neg:
                    v = _mm256_xor_ps(_mm256_loadu_ps(regs + 8 * ins.a), sign);
                    break;
                case OpCode::Add:
                    v = _mm256_add_ps(_mm256_loadu_ps(regs + 8 * ins.a), _mm256_loadu_ps(regs + 8 * ins.b));
                    break;
                case OpCode::Sub:
                    v = _mm256_sub_ps(_mm256_loadu_ps(regs + 8 * ins.a), _mm256_loadu_ps(regs + 8 * ins.b));
                    break;
                case OpCode::Mul:
                    v = _mm256_mul_ps(_mm256_loadu_ps(regs + 8 * ins.a), _mm256_loadu_ps(regs + 8 * ins.b));
                    break;
                case OpCode::Div:
                    v = _mm256_div_ps(_mm256_loadu_ps(regs + 8 * ins.a), _mm256_loadu_ps(regs + 8 * ins.b));
                    break;
                case OpCode::Sqrt:
                    v = _mm256_sqrt_ps(_mm256_loadu_ps(regs + 8 * ins.a));
                    break;
            }
            invalid = _mm256_or_ps(invalid, _mm256_cmp_ps(_mm256_andnot_ps(sign, v), inf, _CMP_NLT_UQ));
            _mm256_storeu_ps(regs + 8 * t, v);
        }
        alignas(32) float res[8];
        _mm256_store_ps(res, v);
        const int mask = _mm256_movemask_ps(invalid);
        for (std::size_t j = 0; j < count; ++j) {
            out[i + j] = static_cast<double>(res[j]);
            bad[i + j] = static_cast<std::uint8_t>((mask >> j) & 1);
        }
    }
}

} // namespace relbound::simd::detail
