#ifndef LOWREG_SPECTRAL_HPP
#define LOWREG_SPECTRAL_HPP

#include "lowreg/phi.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Fourier pseudospectral infrastructure on the torus [0, 2π): grid and
// coefficient container, FFT bridge, multiplier operators, Sobolev norms,
// initial-data generators, and a binary snapshot format for caching
// reference solutions.
//
// Conventions (fixed across the project):
//   x_j = 2πj/M,  frequencies k ∈ {−M/2+1, …, M/2},
//   û_k = (1/M) Σ_j u_j e^{−ikx_j},   u_j = Σ_k û_k e^{ikx_j},
// so Parseval reads (1/M)Σ_j|u_j|² = Σ_k|û_k|², and the physical L² norm is
// ‖u‖_{L²}² = ∫|u|² dx = 2π Σ_k|û_k|². Coefficients are stored in FFT order:
// index n holds frequency n for n ≤ M/2 and n − M above.

namespace lowreg {

struct Grid {
    int M;  // collocation points; power of two, at least 8

    explicit Grid(int M_);

    double x(int j) const { return 2.0 * pi() * j / M; }
    int freq(int index) const { return index <= M / 2 ? index : index - M; }
    int index(int k) const { return k >= 0 ? k : k + M; }

    static double pi() { return 3.141592653589793238462643383279502884; }
    bool operator==(const Grid&) const = default;
};

struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs;  // length M, FFT order

    explicit SpectralField(Grid g) : grid(g), coeffs(static_cast<std::size_t>(g.M)) {}
};

// Unnormalized synthesis u_j = Σ_k û_k e^{ikx_j}.
std::vector<std::complex<double>> to_physical(const SpectralField& f);
// Analysis û_k = (1/M) Σ_j u_j e^{−ikx_j}; throws on length mismatch.
SpectralField to_spectral(const Grid& g, const std::vector<std::complex<double>>& samples);

// coeffs[k] ·= m(k) for every grid frequency k.
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<std::complex<double>(int)>& m);

// Antiderivative: coeffs[k] /= ik for k ≠ 0; the mean mode maps to 0.
SpectralField inv_dx(const SpectralField& f);

// ( Σ_k (1+k²)^s |û_k|² )^{1/2}
double h_norm(const SpectralField& f, double s);

// ‖u‖_{L²} = (2π Σ_k |û_k|²)^{1/2}, the norm the data generators normalize.
double l2_norm(const SpectralField& f);

// Samples of cos(x)/(2+sin(x)), rescaled to unit L² norm.
SpectralField smooth_data(const Grid& g);

// H^θ-rough random data: û_m = |m|^{−θ} U_m for m ≠ 0 and û₀ = U₀ with
// U_m uniform on [0,1)+i[0,1), rescaled to unit L² norm. The generator is
// mt19937_64 seeded with `seed`; each draw maps the raw 64-bit word to [0,1)
// as (word >> 11)·2⁻⁵³. Stream layout (part of the on-disk/reproducibility
// contract): real then imaginary part per mode, modes in increasing m
// skipping 0, then U₀ last. Deterministic for a fixed seed.
SpectralField rough_data(const Grid& g, double theta, std::uint64_t seed);

// Real-valued variant for the KdV experiments: the real part (on the grid) of
// the complex draw above, with the Nyquist mode dropped, rescaled to unit L²
// norm. Same seed ⇒ same field.
SpectralField real_rough_data(const Grid& g, double theta, std::uint64_t seed);

// Snapshot file: little-endian, 8-byte magic "LOWREGS1", u64 M, f64 domain
// length (2π), then M complex128 coefficients in FFT order.
void save_snapshot(const std::string& path, const SpectralField& f);
SpectralField load_snapshot(const std::string& path);  // throws std::runtime_error

}  // namespace lowreg

#endif
