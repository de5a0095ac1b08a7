#include "rankfuse/simd_dot.hpp"

#include <atomic>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace rankfuse::simd {

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

#if defined(__x86_64__) || defined(_M_X64)

__attribute__((target("avx2,fma")))
float dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    }
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    }
    acc0 = _mm256_add_ps(acc0, acc1);
    __m128 lo = _mm256_castps256_ps128(acc0);
    __m128 hi = _mm256_extractf128_ps(acc0, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_hadd_ps(lo, lo);
    lo = _mm_hadd_ps(lo, lo);
    float acc = _mm_cvtss_f32(lo);
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // x86_64

#if defined(__aarch64__)

float dot_neon(const float* a, const float* b, std::size_t n) {
    float32x4_t acc0 = vdupq_n_f32(0.0f);
    float32x4_t acc1 = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
        acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    }
    float acc = vaddvq_f32(vaddq_f32(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

#endif  // aarch64

bool kernel_supported(Kernel k) {
    switch (k) {
        case Kernel::Auto:
        case Kernel::Scalar:
            return true;
        case Kernel::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return cpu_has_avx2();
#else
            return false;
#endif
        case Kernel::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

static Kernel detect_best() {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return Kernel::Avx2;
#endif
#if defined(__aarch64__)
    return Kernel::Neon;
#endif
    return Kernel::Scalar;
}

static std::atomic<Kernel> g_forced{Kernel::Auto};

void select_kernel(Kernel k) {
    if (!kernel_supported(k)) {
        throw std::invalid_argument("kernel " + kernel_name(k) + " not supported on this CPU");
    }
    g_forced.store(k, std::memory_order_relaxed);
}

Kernel active_kernel() {
    Kernel forced = g_forced.load(std::memory_order_relaxed);
    if (forced != Kernel::Auto) return forced;
    static const Kernel best = detect_best();
    return best;
}

std::string kernel_name(Kernel k) {
    switch (k) {
        case Kernel::Auto: return "auto";
        case Kernel::Scalar: return "scalar";
        case Kernel::Avx2: return "avx2";
        case Kernel::Neon: return "neon";
    }
    return "unknown";
}

float dot(const float* a, const float* b, std::size_t n) {
    switch (active_kernel()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Kernel::Avx2: return dot_avx2(a, b, n);
#endif
#if defined(__aarch64__)
        case Kernel::Neon: return dot_neon(a, b, n);
#endif
        default: return dot_scalar(a, b, n);
    }
}

void matvec(const float* matrix, std::size_t rows, std::size_t dim,
            const float* vec, float* out) {
    switch (active_kernel()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Kernel::Avx2:
            for (std::size_t r = 0; r < rows; ++r) {
                out[r] = dot_avx2(matrix + r * dim, vec, dim);
            }
            return;
#endif
#if defined(__aarch64__)
        case Kernel::Neon:
            for (std::size_t r = 0; r < rows; ++r) {
                out[r] = dot_neon(matrix + r * dim, vec, dim);
            }
            return;
#endif
        default:
            for (std::size_t r = 0; r < rows; ++r) {
                out[r] = dot_scalar(matrix + r * dim, vec, dim);
            }
    }
}

}  // namespace rankfuse::simd
