#pragma once

/** \file simd_dot.hpp
 *  \brief Inner-product kernels for the dense scoring path.
 *
 * A scalar reference kernel plus SIMD variants (AVX2+FMA on x86-64, NEON on
 * aarch64) selected once at runtime. All variants accumulate in 32-bit floats
 * and must agree with the scalar reference within fp32 reassociation error;
 * the equivalence tests pin that down.
 */

#include <cstddef>
#include <string>

namespace rankfuse::simd {

enum class Kernel {
    Auto,    ///< pick the best supported variant at first use
    Scalar,  ///< portable reference
    Avx2,    ///< x86-64 AVX2+FMA
    Neon,    ///< aarch64 NEON
};

/// Force a specific kernel (throws std::invalid_argument if unsupported
/// on this CPU). Kernel::Auto restores runtime detection.
void select_kernel(Kernel k);

/// The kernel dispatch resolves to right now.
Kernel active_kernel();

/// Human-readable name of a kernel.
std::string kernel_name(Kernel k);

/// True if the CPU can run the given kernel.
bool kernel_supported(Kernel k);

/// Inner product of two n-length float vectors via the active kernel.
float dot(const float* a, const float* b, std::size_t n);

/// out[r] = dot(matrix row r, vec) for r in [0, rows); matrix is row-major.
void matvec(const float* matrix, std::size_t rows, std::size_t dim,
            const float* vec, float* out);

// Direct entry points, used by the equivalence tests.
float dot_scalar(const float* a, const float* b, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
float dot_avx2(const float* a, const float* b, std::size_t n);
#endif
#if defined(__aarch64__)
float dot_neon(const float* a, const float* b, std::size_t n);
#endif

}  // namespace rankfuse::simd
