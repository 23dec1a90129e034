#ifndef LOWREG_INTEGRATORS_HPP
#define LOWREG_INTEGRATORS_HPP

#include "lowreg/equation.hpp"
#include "lowreg/spectral.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// One-step time integrators for the two model equations, all built from the
// same ingredients: exact free-flow multipliers, φ-function filters, and
// pointwise products on the collocation grid (no dealiasing). The implicit
// schemes solve their update relation by fixed-point iteration with an
// explicit predictor as initial guess. A small driver applies a scheme over
// many steps and samples scalar observables along the trajectory.
//
// Products are always evaluated in physical space, multipliers always in
// Fourier space. KdV steps expect real-valued input (grid imaginary part
// below 1e-10 is tolerated and projected away) and return real-valued
// fields; the odd-symbol KdV multipliers (exp(∓τ∂ₓ³), ∂ₓ, ∂ₓ⁻¹) annihilate
// the unpaired Nyquist mode so that real data stays real.

namespace lowreg {

enum class Method {
    nls_os18,    // explicit first order, one φ₁ filter
    nls_bs22,    // explicit second order, φ₁/φ₂ filters and a |u|⁴u correction
    nls_sym1,    // implicit symmetric first order, endpoint-averaged pair
    nls_mid1,    // implicit symmetric first order, midpoint brackets, τ/16 weights
    nls_mid2,    // implicit symmetric second order, midpoint brackets, τ/8 weights
    nls_strang,  // Strang splitting with exact pointwise nonlinear flow
    kdv_sym1,    // implicit symmetric first order for KdV
    kdv_bs2,     // explicit second order for KdV with a filtered correction
    kdv_strang,  // Strang splitting: exact Airy flow + RK4 Burgers micro-steps
};

Equation method_equation(Method m);
bool method_is_implicit(Method m);  // true for nls_sym1, nls_mid1, nls_mid2, kdv_sym1
int method_order(Method m);         // claimed convergence order (1 or 2)
std::string method_name(Method m);  // canonical name, e.g. "NLS_OS18"
Method parse_method(const std::string& name);  // throws std::invalid_argument

struct FixedPointConfig {
    double tol = 1e-12;  // stopping threshold for the H¹ increment
    int max_iter = 50;
};

struct SchemeSpec {
    Equation equation = Equation::nls;
    Method method = Method::nls_os18;
    std::optional<FixedPointConfig> fp;  // present exactly for the implicit methods
    int strang_micro = 1000;             // Burgers micro-steps per step (kdv_strang only)
};

// Scheme with consistent equation tag and a default fixed-point configuration
// when the method is implicit.
SchemeSpec make_scheme(Method m);

// Throws std::invalid_argument on a broken invariant: equation/method
// mismatch, fp missing on an implicit method or present on an explicit one,
// fp.tol ≤ 0, fp.max_iter < 1, or strang_micro < 1 for kdv_strang.
void validate_scheme(const SchemeSpec& s);

// Thrown when a fixed-point iteration exhausts max_iter; carries the final
// H¹ increment. step_index is -1 from a bare step and the 1-based index of
// the failing step when thrown through evolve.
struct NoConvergence : std::runtime_error {
    NoConvergence(int iterations_, double last_increment_);
    int iterations;
    double last_increment;
    long step_index = -1;
};

// Thrown when a trajectory leaves the divergence guard (L² norm above 1e6,
// a non-finite field, or >10× norm growth inside one Strang KdV step).
struct Diverged : std::runtime_error {
    explicit Diverged(double norm_);
    double norm;
    long step_index = -1;
};

// Per-step solver statistics; fp_iterations stays 0 for explicit methods.
struct StepStats {
    int fp_iterations = 0;
};

// u^{n+1} = e^{iτΔ}u − iτ e^{iτΔ}(u² φ₁(−2iτΔ)ū)
SpectralField step_nls_os18(const SpectralField& u, double tau);

// u^{n+1} = e^{iτΔ}u − iτ e^{iτΔ}(u² (φ₁−φ₂)(−2iτΔ) ū)
//           − iτ (e^{iτΔ}u)² φ₂(−2iτΔ)(e^{iτΔ}ū) − (τ²/2) e^{iτΔ}(|u|⁴u)
SpectralField step_nls_bs22(const SpectralField& u, double tau);

// u^{n+1} = e^{iτΔ}u − i(τ/2) e^{iτΔ}(u² φ₁(−iτΔ)ū)
//           − i(τ/2)((u^{n+1})² φ₁(iτΔ) ū^{n+1})
SpectralField step_nls_sym1(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats = nullptr);

// With A = u + e^{−iτΔ}u^{n+1}:
// u^{n+1} = e^{iτΔ}u − i(τ/16) e^{iτΔ}(A² φ₁(−2iτΔ)Ā)
//           − i(τ/16)((e^{iτΔ}A)² φ₁(2iτΔ) conj(e^{iτΔ}A))
SpectralField step_nls_mid1(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats = nullptr);

// One evaluation of the update relation above at candidate endpoint w: the
// field F(u, w) whose fixed point w = F(u, w) is the step. Exposed so the
// relation can be compared term by term against its frequency-side form
// (which is alias-free only for band-limited u and w).
SpectralField nls_mid1_map(const SpectralField& u, const SpectralField& w, double tau);

// With A = u + e^{−iτΔ}u^{n+1}:
// u^{n+1} = e^{iτΔ}u − i(τ/8) e^{iτΔ}(A² (φ₁−φ₂)(−2iτΔ)Ā)
//           − i(τ/8)((e^{iτΔ}A)² φ₂(−2iτΔ)(e^{iτΔ}Ā))
SpectralField step_nls_mid2(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats = nullptr);

// e^{i(τ/2)Δ}, then v ↦ v e^{−iτ|v|²} pointwise, then e^{i(τ/2)Δ}.
SpectralField step_nls_strang(const SpectralField& u, double tau);

// u^{n+1} = e^{−τ∂ₓ³}u + (1/24)(e^{−τ∂ₓ³}∂ₓ⁻¹u + ∂ₓ⁻¹u^{n+1})²
//           − (1/24) e^{−τ∂ₓ³}(∂ₓ⁻¹u + e^{τ∂ₓ³}∂ₓ⁻¹u^{n+1})²
SpectralField step_kdv_sym1(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats = nullptr);

// u^{n+1} = e^{−τ∂ₓ³}u + (1/6)(e^{−τ∂ₓ³}∂ₓ⁻¹u)² − (1/6) e^{−τ∂ₓ³}(∂ₓ⁻¹u)²
//           + (τ²/4) e^{−τ∂ₓ³} Ψ(iτ∂ₓ²) ∂ₓ(u ∂ₓ(u·u))
SpectralField step_kdv_bs2(const SpectralField& u, double tau);

// Filter of the correction term above: Ψ(iy) = sin(y)/y, Ψ(0) = 1, so that
// |τ Ψ(iτk²) k²| = |sin(τk²)| ≤ 1 on every grid frequency.
double kdv_psi_filter(double y);

// Half Airy flow e^{−(τ/2)∂ₓ³}, Burgers flow ∂ₜv = ½∂ₓv² integrated with
// `micro` classical RK4 steps, half Airy flow. nonlinear_scale multiplies the
// Burgers vector field; 0 reduces the step to the exact dispersive flow
// (diagnostic knob). Throws Diverged on >10× norm growth within the step.
SpectralField step_kdv_strang(const SpectralField& u, double tau, int micro,
                              double nonlinear_scale = 1.0);

// Dispatch on s.method; validates s first. τ must be nonzero (negative is
// allowed: every scheme runs backwards, which the symmetry tests use).
SpectralField apply_step(const SchemeSpec& s, const SpectralField& u, double tau,
                         StepStats* stats = nullptr);

struct FixedPointResult {
    SpectralField value;
    int iterations;
};

// Iterates v ← map(v) from guess until the H¹ increment drops below cfg.tol;
// returns the last iterate and the number of map applications. Throws
// NoConvergence after cfg.max_iter iterations (or on a non-finite increment).
FixedPointResult fixed_point_solve(const std::function<SpectralField(const SpectralField&)>& map,
                                   SpectralField guess, const FixedPointConfig& cfg);

// Interpolation nodes (as fractions of the step) used by the symmetric
// schemes: r = 0 → {1/2}, r = 1 → {0, 1}; other degrees are not provided.
// The schemes realize the degree-0 choice as the endpoint average
// (f(0) + f(τ))/2, which obeys the same reflection identity as the node 1/2.
std::vector<double> lagrange_nodes(int r);

// Lagrange interpolant through (a_j τ, exp(i a_j τ L)) evaluated at s.
std::complex<double> interp_phase(std::complex<double> l_low, double tau, double s,
                                  const std::vector<double>& nodes);

// Reflection identity p̃(s−τ, −τ) = e^{−iτL}·p̃(s, τ) sampled at 10 points
// s ∈ [0, τ], tolerance 1e-12. Holds for node sets with a_j = 1 − a_{r−j}.
bool interp_symmetry_check(std::complex<double> l_low, double tau,
                           const std::vector<double>& nodes);
bool interp_symmetry_check(std::complex<double> l_low, double tau);  // nodes {0, 1}

using Observer = std::function<double(const SpectralField&)>;

struct TrajectorySample {
    long step;
    double t;  // step · τ
    std::vector<double> values;  // one entry per observer
};

struct EvolveResult {
    SpectralField u;  // field after the last step
    std::vector<TrajectorySample> samples;
    long fp_iterations_total = 0;
    int fp_iterations_max = 0;
};

// Applies `steps` steps of the scheme, sampling the observers at step 0 and
// every `stride`-th step (⌊steps/stride⌋ + 1 samples in total). Rethrows
// NoConvergence/Diverged with the 1-based failing step index filled in; a
// field whose L² norm leaves [0, 1e6] aborts with Diverged.
EvolveResult evolve(const SchemeSpec& s, const SpectralField& u0, double tau, long steps,
                    const std::vector<Observer>& observers = {}, long stride = 1);

}  // namespace lowreg

#endif
