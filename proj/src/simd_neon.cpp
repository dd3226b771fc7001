// AArch64 only; Advanced SIMD is part of the base architecture there.
#include "simd_kernels.hpp"

#include <arm_neon.h>

namespace relbound::simd::detail
{

void neon_f64(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out, std::uint8_t *bad,
              void *scratch)
{
    double *regs = static_cast<double *>(scratch);
    const float64x2_t inf = vdupq_n_f64(__builtin_inf());
    for (std::size_t i = 0; i < n; i += 2) {
        const std::size_t count = n - i < 2 ? n - i : 2;
        uint64x2_t finite = vdupq_n_u64(~0ULL);
        float64x2_t v = vdupq_n_f64(0.0);
        for (std::size_t t = 0; t < len; ++t) {
            const Instr &ins = code[t];
            switch (ins.op) {
                case OpCode::Load: {
                    const double *src = in + static_cast<std::size_t>(ins.a) * n + i;
                    double tmp[2] = {src[0], count > 1 ? src[1] : 1.0};
                    v = vld1q_f64(tmp);
                    break;
                }
                case OpCode::Const:
                    v = vdupq_n_f64(ins.value);
                    break;
                case OpCode::Neg:
                    v = vnegq_f64(vld1q_f64(regs + 2 * ins.a));
                    break;
                case OpCode::Add:
                    v = vaddq_f64(vld1q_f64(regs + 2 * ins.a), vld1q_f64(regs + 2 * ins.b));
                    break;
                case OpCode::Sub:
                    v = vsubq_f64(vld1q_f64(regs + 2 * ins.a), vld1q_f64(regs + 2 * ins.b));
                    break;
                case OpCode::Mul:
                    v = vmulq_f64(vld1q_f64(regs + 2 * ins.a), vld1q_f64(regs + 2 * ins.b));
                    break;
                case OpCode::Div:
                    v = vdivq_f64(vld1q_f64(regs + 2 * ins.a), vld1q_f64(regs + 2 * ins.b));
                    break;
                case OpCode::Sqrt:
                    v = vsqrtq_f64(vld1q_f64(regs + 2 * ins.a));
                    break;
            }
            finite = vandq_u64(finite, vcltq_f64(vabsq_f64(v), inf));
            vst1q_f64(regs + 2 * t, v);
        }
        double res[2];
        std::uint64_t ok[2];
        vst1q_f64(res, v);
        vst1q_u64(ok, finite);
        for (std::size_t j = 0; j < count; ++j) {
            out[i + j] = res[j];
            bad[i + j] = ok[j] ? 0 : 1;
        }
    }
}

void neon_f32(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out, std::uint8_t *bad,
              void *scratch)
{
    float *regs = static_cast<float *>(scratch);
    const float32x4_t inf = vdupq_n_f32(__builtin_inff());
    for (std::size_t i = 0; i < n; i += 4) {
        const std::size_t count = n - i < 4 ? n - i : 4;
        uint32x4_t finite = vdupq_n_u32(~0U);
        float32x4_t v = vdupq_n_f32(0.0f);
        for (std::size_t t = 0; t < len; ++t) {
            const Instr &ins = code[t];
            switch (ins.op) {
                case OpCode::Load: {
                    const double *src = in + static_cast<std::size_t>(ins.a) * n + i;
                    float tmp[4] = {1.0f, 1.0f, 1.0f, 1.0f};
                    for (std::size_t j = 0; j < count; ++j) {
                        tmp[j] = static_cast<float>(src[j]);
                    }
                    v = vld1q_f32(tmp);
                    break;
                }
                case OpCode::Const:
                    v = vdupq_n_f32(static_cast<float>(ins.value));
                    break;
                case OpCode::Neg:
                    v = vnegq_f32(vld1q_f32(regs + 4 * ins.a));
                    break;
                case OpCode::Add:
                    v = vaddq_f32(vld1q_f32(regs + 4 * ins.a), vld1q_f32(regs + 4 * ins.b));
                    break;
                case OpCode::Sub:
                    v = vsubq_f32(vld1q_f32(regs + 4 * ins.a), vld1q_f32(regs + 4 * ins.b));
                    break;
                case OpCode::Mul:
                    v = vmulq_f32(vld1q_f32(regs + 4 * ins.a), vld1q_f32(regs + 4 * ins.b));
                    break;
                case OpCode::Div:
                    v = vdivq_f32(vld1q_f32(regs + 4 * ins.a), vld1q_f32(regs + 4 * ins.b));
                    break;
                case OpCode::Sqrt:
                    v = vsqrtq_f32(vld1q_f32(regs + 4 * ins.a));
                    break;
            }
            finite = vandq_u32(finite, vcltq_f32(vabsq_f32(v), inf));
            vst1q_f32(regs + 4 * t, v);
        }
        float res[4];
        std::uint32_t ok[4];
        vst1q_f32(res, v);
        vst1q_u32(ok, finite);
        for (std::size_t j = 0; j < count; ++j) {
            out[i + j] = static_cast<double>(res[j]);
            bad[i + j] = ok[j] ? 0 : 1;
        }
    }
}

} // namespace relbound::simd::detail
