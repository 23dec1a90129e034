#include "lowreg/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace lowreg::kernels {

#if defined(LOWREG_HAVE_AVX2_TU)
namespace detail {
// defined in the translation unit compiled with -mavx2 -mfma
void cmul_avx2(const std::complex<double>*, const std::complex<double>*,
               std::complex<double>*, std::size_t);
void cubic_avx2(const std::complex<double>*, std::complex<double>*, std::size_t);
void axpy_avx2(std::complex<double>, const std::complex<double>*, std::complex<double>*,
               std::size_t);
void scale_avx2(std::complex<double>, const std::complex<double>*, std::complex<double>*,
                std::size_t);
double norm2_weighted_avx2(const double*, const std::complex<double>*, std::size_t);
}  // namespace detail
#endif

namespace {

using cplx = std::complex<double>;

void cmul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void cubic_scalar(const cplx* a, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(a[i]) * a[i];
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

double norm2_weighted_scalar(const double* w, const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::norm(x[i]);
    return acc;
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Variant& state() {
    static Variant v = select_variant(std::getenv("LOWREG_KERNEL"));
    return v;
}

}  // namespace

bool available(Variant v) {
    switch (v) {
        case Variant::scalar:
            return true;
        case Variant::avx2:
#if defined(LOWREG_HAVE_AVX2_TU)
            return cpu_has_avx2();
#else
            return false;
#endif
    }
    return false;
}

Variant select_variant(const char* env_value) {
    const Variant best = available(Variant::avx2) ? Variant::avx2 : Variant::scalar;
    if (!env_value) return best;
    const std::string_view s(env_value);
    if (s == "scalar") return Variant::scalar;
    if (s == "avx2" && available(Variant::avx2)) return Variant::avx2;
    return best;
}

Variant active() { return state(); }

void set_variant(Variant v) {
    if (!available(v)) throw std::invalid_argument("kernel variant not available on this build/machine");
    state() = v;
}

const char* name(Variant v) { return v == Variant::scalar ? "scalar" : "avx2"; }

void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
#if defined(LOWREG_HAVE_AVX2_TU)
    if (state() == Variant::avx2) return detail::cmul_avx2(a, b, out, n);
#endif
    cmul_scalar(a, b, out, n);
}

void cubic(const cplx* a, cplx* out, std::size_t n) {
#if defined(LOWREG_HAVE_AVX2_TU)
    if (state() == Variant::avx2) return detail::cubic_avx2(a, out, n);
#endif
    cubic_scalar(a, out, n);
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
#if defined(LOWREG_HAVE_AVX2_TU)
    if (state() == Variant::avx2) return detail::axpy_avx2(alpha, x, y, n);
#endif
    axpy_scalar(alpha, x, y, n);
}

void scale(cplx alpha, const cplx* x, cplx* out, std::size_t n) {
#if defined(LOWREG_HAVE_AVX2_TU)
    if (state() == Variant::avx2) return detail::scale_avx2(alpha, x, out, n);
#endif
    scale_scalar(alpha, x, out, n);
}

double norm2_weighted(const double* w, const cplx* x, std::size_t n) {
#if defined(LOWREG_HAVE_AVX2_TU)
    if (state() == Variant::avx2) return detail::norm2_weighted_avx2(w, x, n);
#endif
    return norm2_weighted_scalar(w, x, n);
}

}  // namespace lowreg::kernels
