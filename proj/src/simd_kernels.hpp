#ifndef RELBOUND_SIMD_KERNELS_HPP
#define RELBOUND_SIMD_KERNELS_HPP

// Kernel entry points. The vector TUs are compiled with their own target
// flags, so this interface stays free of templates and inline library code.

#include <cstddef>
#include <cstdint>

#include <relbound/simd.hpp>

namespace relbound::simd::detail
{

using KernelFn = void (*)(const Instr *code, std::size_t len, const double *in, std::size_t n, double *out,
                          std::uint8_t *bad, void *scratch);

void scalar_f64(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);
void scalar_f32(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);

#ifdef RELBOUND_HAVE_AVX2
void avx2_f64(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);
void avx2_f32(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);
#endif

#ifdef RELBOUND_HAVE_NEON
void neon_f64(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);
void neon_f32(const Instr *, std::size_t, const double *, std::size_t, double *, std::uint8_t *, void *);
#endif

// Scratch bytes per instruction; enough for every kernel's lane width.
constexpr std::size_t kScratchPerInstr = 64;

} // namespace relbound::simd::detail

#endif
