// AVX2+FMA variants of the pointwise kernels. This file is the only
// translation unit built with -mavx2 -mfma; callers reach it through the
// dispatcher after a cpuid check, so nothing here runs on machines without
// the extensions. Complex numbers are processed two at a time in interleaved
// (re, im) layout with unaligned loads; odd tails fall back to scalar code.

#include <immintrin.h>

#include <complex>
#include <cstddef>

namespace lowreg::kernels::detail {

namespace {

using cplx = std::complex<double>;

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// [re0, im0, re1, im1] * [re0', im0', re1', im1'] complex-wise
inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d are = _mm256_movedup_pd(a);        // [re0, re0, re1, re1]
    const __m256d aim = _mm256_permute_pd(a, 0xF);   // [im0, im0, im1, im1]
    const __m256d bsw = _mm256_permute_pd(b, 0x5);   // [im0', re0', im1', re1']
    return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

}  // namespace

void cmul_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(dp(a) + 2 * i);
        const __m256d vb = _mm256_loadu_pd(dp(b) + 2 * i);
        _mm256_storeu_pd(dp(out) + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void cubic_avx2(const cplx* a, cplx* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(dp(a) + 2 * i);
        const __m256d sq = _mm256_mul_pd(va, va);
        const __m256d mag = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));  // [|z0|^2 x2, |z1|^2 x2]
        _mm256_storeu_pd(dp(out) + 2 * i, _mm256_mul_pd(mag, va));
    }
    for (; i < n; ++i) out[i] = std::norm(a[i]) * a[i];
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(dp(x) + 2 * i);
        const __m256d vy = _mm256_loadu_pd(dp(y) + 2 * i);
        const __m256d xsw = _mm256_permute_pd(vx, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(are, vx, _mm256_mul_pd(aim, xsw));
        _mm256_storeu_pd(dp(y) + 2 * i, _mm256_add_pd(vy, prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(dp(x) + 2 * i);
        const __m256d xsw = _mm256_permute_pd(vx, 0x5);
        _mm256_storeu_pd(dp(out) + 2 * i, _mm256_fmaddsub_pd(are, vx, _mm256_mul_pd(aim, xsw)));
    }
    for (; i < n; ++i) out[i] = alpha * x[i];
}

double norm2_weighted_avx2(const double* w, const cplx* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(dp(x) + 2 * i);
        const __m128d wpair = _mm_loadu_pd(w + i);
        // [w0, w0, w1, w1]
        const __m256d vw = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wpair), 0x50);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vx, vx), vw, acc);
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d half = _mm_add_pd(lo, hi);
    double tail = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; i < n; ++i) tail += w[i] * std::norm(x[i]);
    return tail;
}

}  // namespace lowreg::kernels::detail
