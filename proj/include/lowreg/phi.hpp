#ifndef LOWREG_PHI_HPP
#define LOWREG_PHI_HPP

#include <cmath>
#include <complex>

// The entire-function coefficients phi1(z) = (e^z - 1)/z and
// phi2(z) = (e^z - 1 - z)/z^2 that weight the oscillatory integrals.
//
// Near the origin the closed forms cancel catastrophically, so below
// |z| = 1e-2 an 8-term Taylor expansion takes over; above it the closed form
// is evaluated through a cancellation-free complex expm1 so the two branches
// agree to ~1e-13 at the switch radius.

namespace lowreg {

// e^z - 1 without cancellation for small |z|:
// Re = expm1(x) cos y - 2 sin^2(y/2),  Im = e^x sin y.
inline std::complex<double> cexpm1(std::complex<double> z) {
    const double x = z.real(), y = z.imag();
    const double em = std::expm1(x);
    const double sh = std::sin(0.5 * y);
    return {em * std::cos(y) - 2.0 * sh * sh, (em + 1.0) * std::sin(y)};
}

inline std::complex<double> phi1(std::complex<double> z) {
    if (std::abs(z) < 1e-2) {
        // sum_{n=0}^{7} z^n / (n+1)!
        std::complex<double> acc{0.0, 0.0};
        for (int n = 7; n >= 0; --n) {
            double inv = 1.0;
            for (int j = 2; j <= n + 1; ++j) inv *= j;
            acc = acc * z + 1.0 / inv;
        }
        return acc;
    }
    return cexpm1(z) / z;
}

inline std::complex<double> phi2(std::complex<double> z) {
    if (std::abs(z) < 1e-2) {
        // sum_{n=0}^{7} z^n / (n+2)!
        std::complex<double> acc{0.0, 0.0};
        for (int n = 7; n >= 0; --n) {
            double inv = 1.0;
            for (int j = 2; j <= n + 2; ++j) inv *= j;
            acc = acc * z + 1.0 / inv;
        }
        return acc;
    }
    return (cexpm1(z) - z) / (z * z);
}

}  // namespace lowreg

#endif
