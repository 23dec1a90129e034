#ifndef LOWREG_KERNELS_HPP
#define LOWREG_KERNELS_HPP

#include <complex>
#include <cstddef>

// Pointwise hot-loop kernels shared by the spectral transforms and the time
// steppers, in a scalar reference version and an AVX2+FMA version selected at
// runtime. The scalar version is the semantic definition; the vector version
// must agree with it to near machine precision on every input (the
// equivalence is tested, not assumed).
//
// Selection: the best available variant is picked at startup; the environment
// variable LOWREG_KERNEL ("scalar" or "avx2") overrides the choice when it
// names an available variant and is ignored otherwise. set_variant switches
// explicitly and throws on variants this build or machine cannot run.
//
// All kernels accept out == a (or out == x / out == y) exact aliasing;
// partially overlapping ranges are undefined.

namespace lowreg::kernels {

enum class Variant { scalar, avx2 };

bool available(Variant v);
Variant active();
void set_variant(Variant v);  // throws std::invalid_argument if !available(v)
const char* name(Variant v);

// Mapping applied to the LOWREG_KERNEL value: "scalar"/"avx2" when available,
// anything else (including nullptr) falls back to the automatic choice.
Variant select_variant(const char* env_value);

// out[i] = a[i] * b[i]
void cmul(const std::complex<double>* a, const std::complex<double>* b,
          std::complex<double>* out, std::size_t n);

// out[i] = |a[i]|^2 * a[i]
void cubic(const std::complex<double>* a, std::complex<double>* out, std::size_t n);

// y[i] += alpha * x[i]
void axpy(std::complex<double> alpha, const std::complex<double>* x,
          std::complex<double>* y, std::size_t n);

// out[i] = alpha * x[i]
void scale(std::complex<double> alpha, const std::complex<double>* x,
           std::complex<double>* out, std::size_t n);

// sum_i w[i] * |x[i]|^2
double norm2_weighted(const double* w, const std::complex<double>* x, std::size_t n);

}  // namespace lowreg::kernels

#endif
