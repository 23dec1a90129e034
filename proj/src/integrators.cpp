#include "lowreg/integrators.hpp"

#include "lowreg/kernels.hpp"
#include "lowreg/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace lowreg {

namespace {

using cplx = std::complex<double>;
using Table = std::vector<cplx>;

const cplx one{1.0, 0.0};

Table make_table(const Grid& g, const std::function<cplx(int)>& symbol) {
    Table t(static_cast<std::size_t>(g.M));
    for (int n = 0; n < g.M; ++n) t[static_cast<std::size_t>(n)] = symbol(g.freq(n));
    return t;
}

SpectralField apply_table(const SpectralField& f, const Table& t) {
    SpectralField out(f.grid);
    kernels::cmul(f.coeffs.data(), t.data(), out.coeffs.data(), t.size());
    return out;
}

void add_scaled(SpectralField& y, cplx alpha, const SpectralField& x) {
    kernels::axpy(alpha, x.coeffs.data(), y.coeffs.data(), y.coeffs.size());
}

// e^{iaΔ} multiplies mode k by e^{−iak²}.
Table nls_flow(const Grid& g, double a) {
    return make_table(g, [a](int k) {
        const double kd = k;
        return std::exp(cplx{0.0, -a * kd * kd});
    });
}

// φ₁ / φ₂ / φ₁−φ₂ evaluated at ick²; c = 2τ realizes the operator argument
// −2iτΔ, c = −2τ realizes +2iτΔ, and so on.
Table phi1_table(const Grid& g, double c) {
    return make_table(g, [c](int k) { return phi1(cplx{0.0, c * double(k) * double(k)}); });
}

Table phi2_table(const Grid& g, double c) {
    return make_table(g, [c](int k) { return phi2(cplx{0.0, c * double(k) * double(k)}); });
}

Table phi12_table(const Grid& g, double c) {
    return make_table(g, [c](int k) {
        const cplx z{0.0, c * double(k) * double(k)};
        return phi1(z) - phi2(z);
    });
}

// Fourier coefficients of the complex conjugate: out_k = conj(in_{−k}).
SpectralField conj_reflect(const SpectralField& f) {
    SpectralField out(f.grid);
    const int m = f.grid.M;
    for (int n = 0; n < m; ++n)
        out.coeffs[static_cast<std::size_t>(n)] =
            std::conj(f.coeffs[static_cast<std::size_t>((m - n) % m)]);
    return out;
}

// a²·y and a² with the products taken pointwise on the grid.
SpectralField cubic_bracket(const SpectralField& a, const SpectralField& y) {
    auto ap = to_physical(a);
    auto yp = to_physical(y);
    std::vector<cplx> prod(ap.size());
    kernels::cmul(ap.data(), ap.data(), prod.data(), ap.size());
    kernels::cmul(prod.data(), yp.data(), prod.data(), prod.size());
    return to_spectral(a.grid, prod);
}

SpectralField square_bracket(const SpectralField& a) {
    auto ap = to_physical(a);
    kernels::cmul(ap.data(), ap.data(), ap.data(), ap.size());
    return to_spectral(a.grid, ap);
}

// e^{−a∂ₓ³} multiplies mode k by e^{iak³}; the unpaired Nyquist mode is
// annihilated so the flow maps real grid data to real grid data.
Table airy_table(const Grid& g, double a) {
    const int nyquist = g.M / 2;
    return make_table(g, [a, nyquist](int k) {
        if (k == nyquist) return cplx{0.0, 0.0};
        const double kd = k;
        return std::exp(cplx{0.0, a * kd * kd * kd});
    });
}

Table invdx_table(const Grid& g) {
    const int nyquist = g.M / 2;
    return make_table(g, [nyquist](int k) {
        if (k == 0 || k == nyquist) return cplx{0.0, 0.0};
        return cplx{0.0, -1.0 / k};
    });
}

Table dx_table(const Grid& g) {
    const int nyquist = g.M / 2;
    return make_table(g, [nyquist](int k) {
        if (k == nyquist) return cplx{0.0, 0.0};
        return cplx{0.0, double(k)};
    });
}

Table psi_table(const Grid& g, double tau) {
    return make_table(g, [tau](int k) {
        return cplx{kdv_psi_filter(tau * double(k) * double(k)), 0.0};
    });
}

void require_step(double tau) {
    if (tau == 0.0) throw std::invalid_argument("time step must be nonzero");
}

double h1_increment(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    add_scaled(d, -one, b);
    return h_norm(d, 1.0);
}

// The KdV steps act on the Nyquist-free subspace: the grid squares deposit
// content into the unpaired mode M/2, which the non-invertible (annihilating)
// odd-symbol multipliers cannot transport back — zeroing it on every step
// output keeps the implicit scheme exactly time-symmetric.
SpectralField project_real(const SpectralField& u) {
    auto p = to_physical(u);
    for (auto& v : p) v = cplx{v.real(), 0.0};
    SpectralField out = to_spectral(u.grid, p);
    out.coeffs[static_cast<std::size_t>(u.grid.M / 2)] = 0.0;
    return out;
}

// KdV steps take real data: grid imaginary parts below 1e-10 are projected
// away, anything larger is a usage error. The Nyquist mode is dropped on the
// way in as well (see project_real).
SpectralField expect_real(const SpectralField& u) {
    auto p = to_physical(u);
    double worst = 0.0;
    for (const auto& v : p) worst = std::max(worst, std::abs(v.imag()));
    if (!(worst < 1e-10)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "KdV step requires real data (max imaginary part %.3e)",
                      worst);
        throw std::invalid_argument(msg);
    }
    for (auto& v : p) v = cplx{v.real(), 0.0};
    SpectralField out = to_spectral(u.grid, p);
    out.coeffs[static_cast<std::size_t>(u.grid.M / 2)] = 0.0;
    return out;
}

std::string no_convergence_message(int iterations, double increment) {
    char buf[112];
    std::snprintf(buf, sizeof buf,
                  "fixed-point iteration stalled after %d iterations (last H1 increment %.3e)",
                  iterations, increment);
    return buf;
}

std::string diverged_message(double norm) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "trajectory diverged (L2 norm %.3e)", norm);
    return buf;
}

struct MethodName {
    Method method;
    const char* name;
};

constexpr MethodName method_names[] = {
    {Method::nls_os18, "NLS_OS18"},     {Method::nls_bs22, "NLS_BS22"},
    {Method::nls_sym1, "NLS_SYM1"},     {Method::nls_mid1, "NLS_MID1"},
    {Method::nls_mid2, "NLS_MID2"},     {Method::nls_strang, "NLS_STRANG"},
    {Method::kdv_sym1, "KDV_SYM1"},     {Method::kdv_bs2, "KDV_BS2"},
    {Method::kdv_strang, "KDV_STRANG"},
};

}  // namespace

Equation method_equation(Method m) {
    switch (m) {
        case Method::nls_os18:
        case Method::nls_bs22:
        case Method::nls_sym1:
        case Method::nls_mid1:
        case Method::nls_mid2:
        case Method::nls_strang:
            return Equation::nls;
        case Method::kdv_sym1:
        case Method::kdv_bs2:
        case Method::kdv_strang:
            return Equation::kdv;
    }
    throw std::invalid_argument("unknown method");
}

bool method_is_implicit(Method m) {
    return m == Method::nls_sym1 || m == Method::nls_mid1 || m == Method::nls_mid2 ||
           m == Method::kdv_sym1;
}

int method_order(Method m) {
    switch (m) {
        case Method::nls_os18:
        case Method::nls_sym1:
        case Method::nls_mid1:
        case Method::kdv_sym1:
            return 1;
        default:
            return 2;
    }
}

std::string method_name(Method m) {
    for (const auto& e : method_names)
        if (e.method == m) return e.name;
    throw std::invalid_argument("unknown method");
}

Method parse_method(const std::string& name) {
    for (const auto& e : method_names)
        if (name == e.name) return e.method;
    throw std::invalid_argument("unknown scheme name: " + name);
}

SchemeSpec make_scheme(Method m) {
    SchemeSpec s;
    s.method = m;
    s.equation = method_equation(m);
    if (method_is_implicit(m)) s.fp = FixedPointConfig{};
    return s;
}

void validate_scheme(const SchemeSpec& s) {
    if (s.equation != method_equation(s.method))
        throw std::invalid_argument("scheme equation does not match its method");
    if (method_is_implicit(s.method)) {
        if (!s.fp)
            throw std::invalid_argument("implicit method requires a fixed-point configuration");
        if (!(s.fp->tol > 0.0))
            throw std::invalid_argument("fixed-point tolerance must be positive");
        if (s.fp->max_iter < 1)
            throw std::invalid_argument("fixed-point max_iter must be at least 1");
    } else if (s.fp) {
        throw std::invalid_argument("explicit method must not carry a fixed-point configuration");
    }
    if (s.method == Method::kdv_strang && s.strang_micro < 1)
        throw std::invalid_argument("micro-step count must be at least 1");
}

NoConvergence::NoConvergence(int iterations_, double last_increment_)
    : std::runtime_error(no_convergence_message(iterations_, last_increment_)),
      iterations(iterations_),
      last_increment(last_increment_) {}

Diverged::Diverged(double norm_) : std::runtime_error(diverged_message(norm_)), norm(norm_) {}

FixedPointResult fixed_point_solve(const std::function<SpectralField(const SpectralField&)>& map,
                                   SpectralField guess, const FixedPointConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("fixed-point tolerance must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("fixed-point max_iter must be at least 1");
    SpectralField v = std::move(guess);
    double inc = 0.0;
    for (int m = 1; m <= cfg.max_iter; ++m) {
        SpectralField next = map(v);
        inc = h1_increment(next, v);
        v = std::move(next);
        if (inc < cfg.tol) return {std::move(v), m};
        if (!std::isfinite(inc)) throw NoConvergence(m, inc);
    }
    throw NoConvergence(cfg.max_iter, inc);
}

SpectralField step_nls_os18(const SpectralField& u, double tau) {
    require_step(tau);
    const Grid& g = u.grid;
    const Table p = nls_flow(g, tau);
    const Table f1 = phi1_table(g, 2.0 * tau);  // φ₁(−2iτΔ)

    SpectralField inner = u;
    add_scaled(inner, cplx{0.0, -tau}, cubic_bracket(u, apply_table(conj_reflect(u), f1)));
    return apply_table(inner, p);
}

SpectralField step_nls_bs22(const SpectralField& u, double tau) {
    require_step(tau);
    const Grid& g = u.grid;
    const Table p = nls_flow(g, tau);
    const Table f12 = phi12_table(g, 2.0 * tau);  // (φ₁−φ₂)(−2iτΔ)
    const Table f2 = phi2_table(g, 2.0 * tau);    // φ₂(−2iτΔ)
    const SpectralField ubar = conj_reflect(u);

    auto up = to_physical(u);
    std::vector<cplx> quintic(up.size());
    for (std::size_t j = 0; j < up.size(); ++j) {
        const double r2 = std::norm(up[j]);
        quintic[j] = r2 * r2 * up[j];
    }

    SpectralField inner = u;  // u − iτ u²(φ₁−φ₂)ū − (τ²/2)|u|⁴u, then one flow
    add_scaled(inner, cplx{0.0, -tau}, cubic_bracket(u, apply_table(ubar, f12)));
    add_scaled(inner, cplx{-0.5 * tau * tau, 0.0}, to_spectral(g, quintic));
    SpectralField out = apply_table(inner, p);

    add_scaled(out, cplx{0.0, -tau},
               cubic_bracket(apply_table(u, p), apply_table(apply_table(ubar, p), f2)));
    return out;
}

SpectralField step_nls_sym1(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats) {
    require_step(tau);
    const Grid& g = u.grid;
    const Table p = nls_flow(g, tau);
    const Table f1p = phi1_table(g, tau);   // φ₁(−iτΔ)
    const Table f1m = phi1_table(g, -tau);  // φ₁(+iτΔ)

    SpectralField fixed = u;
    add_scaled(fixed, cplx{0.0, -0.5 * tau},
               cubic_bracket(u, apply_table(conj_reflect(u), f1p)));
    fixed = apply_table(fixed, p);

    auto map = [&](const SpectralField& w) {
        SpectralField out = fixed;
        add_scaled(out, cplx{0.0, -0.5 * tau},
                   cubic_bracket(w, apply_table(conj_reflect(w), f1m)));
        return out;
    };
    FixedPointResult r = fixed_point_solve(map, step_nls_os18(u, tau), fp);
    if (stats) stats->fp_iterations = r.iterations;
    return std::move(r.value);
}

SpectralField nls_mid1_map(const SpectralField& u, const SpectralField& w, double tau) {
    require_step(tau);
    const Grid& g = u.grid;
    const Table p = nls_flow(g, tau);
    const Table pm = nls_flow(g, -tau);
    const Table f1p = phi1_table(g, 2.0 * tau);   // φ₁(−2iτΔ)
    const Table f1m = phi1_table(g, -2.0 * tau);  // φ₁(+2iτΔ)
    const cplx weight{0.0, -tau / 16.0};

    SpectralField a = u;  // A = u + e^{−iτΔ}w, so e^{iτΔ}A = e^{iτΔ}u + w
    add_scaled(a, one, apply_table(w, pm));
    const SpectralField abar = conj_reflect(a);
    SpectralField out = apply_table(u, p);
    add_scaled(out, weight, apply_table(cubic_bracket(a, apply_table(abar, f1p)), p));
    add_scaled(out, weight,
               cubic_bracket(apply_table(a, p), apply_table(apply_table(abar, pm), f1m)));
    return out;
}

SpectralField step_nls_mid1(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats) {
    require_step(tau);
    auto map = [&](const SpectralField& w) { return nls_mid1_map(u, w, tau); };
    FixedPointResult r = fixed_point_solve(map, step_nls_os18(u, tau), fp);
    if (stats) stats->fp_iterations = r.iterations;
    return std::move(r.value);
}

SpectralField step_nls_mid2(const SpectralField& u, double tau, const FixedPointConfig& fp,
                            StepStats* stats) {
    require_step(tau);
    const Grid& g = u.grid;
    const Table p = nls_flow(g, tau);
    const Table pm = nls_flow(g, -tau);
    const Table f12 = phi12_table(g, 2.0 * tau);  // (φ₁−φ₂)(−2iτΔ)
    const Table f2 = phi2_table(g, 2.0 * tau);    // φ₂(−2iτΔ)
    const SpectralField pu = apply_table(u, p);
    const cplx weight{0.0, -tau / 8.0};

    auto map = [&](const SpectralField& w) {
        SpectralField a = u;
        add_scaled(a, one, apply_table(w, pm));
        const SpectralField abar = conj_reflect(a);
        SpectralField out = pu;
        add_scaled(out, weight, apply_table(cubic_bracket(a, apply_table(abar, f12)), p));
        add_scaled(out, weight,
                   cubic_bracket(apply_table(a, p), apply_table(apply_table(abar, p), f2)));
        return out;
    };
    FixedPointResult r = fixed_point_solve(map, step_nls_os18(u, tau), fp);
    if (stats) stats->fp_iterations = r.iterations;
    return std::move(r.value);
}

SpectralField step_nls_strang(const SpectralField& u, double tau) {
    require_step(tau);
    const Table half = nls_flow(u.grid, 0.5 * tau);
    auto v = to_physical(apply_table(u, half));
    for (auto& z : v) z *= std::exp(cplx{0.0, -tau * std::norm(z)});
    return apply_table(to_spectral(u.grid, v), half);
}

SpectralField step_kdv_sym1(const SpectralField& u0, double tau, const FixedPointConfig& fp,
                            StepStats* stats) {
    require_step(tau);
    const SpectralField u = expect_real(u0);
    const Grid& g = u.grid;
    const Table flow = airy_table(g, tau);
    const Table back = airy_table(g, -tau);
    const Table inv = invdx_table(g);
    const SpectralField eu = apply_table(u, flow);
    const SpectralField iu = apply_table(u, inv);
    const SpectralField eiu = apply_table(iu, flow);
    const double w = 1.0 / 24.0;

    auto map = [&](const SpectralField& v) {
        const SpectralField iv = apply_table(v, inv);
        SpectralField a = eiu;  // e^{−τ∂ₓ³}∂ₓ⁻¹u + ∂ₓ⁻¹v
        add_scaled(a, one, iv);
        SpectralField b = iu;  // ∂ₓ⁻¹u + e^{τ∂ₓ³}∂ₓ⁻¹v
        add_scaled(b, one, apply_table(iv, back));
        SpectralField out = eu;
        add_scaled(out, cplx{w, 0.0}, square_bracket(a));
        add_scaled(out, cplx{-w, 0.0}, apply_table(square_bracket(b), flow));
        return out;
    };
    // predictor: evaluate the brackets with the free flow of u standing in
    // for the unknown endpoint
    FixedPointResult r = fixed_point_solve(map, map(eu), fp);
    if (stats) stats->fp_iterations = r.iterations;
    return project_real(r.value);
}

double kdv_psi_filter(double y) {
    if (y == 0.0) return 1.0;
    return std::sin(y) / y;
}

SpectralField step_kdv_bs2(const SpectralField& u0, double tau) {
    require_step(tau);
    const SpectralField u = expect_real(u0);
    const Grid& g = u.grid;
    const Table flow = airy_table(g, tau);
    const Table inv = invdx_table(g);
    const Table dx = dx_table(g);
    const Table psi = psi_table(g, tau);
    const SpectralField iu = apply_table(u, inv);

    SpectralField out = apply_table(u, flow);
    add_scaled(out, cplx{1.0 / 6.0, 0.0}, square_bracket(apply_table(iu, flow)));
    add_scaled(out, cplx{-1.0 / 6.0, 0.0}, apply_table(square_bracket(iu), flow));

    // (τ²/4) e^{−τ∂ₓ³} Ψ(iτ∂ₓ²) ∂ₓ(u ∂ₓ(u²))
    auto up = to_physical(u);
    std::vector<cplx> sq(up.size());
    kernels::cmul(up.data(), up.data(), sq.data(), up.size());
    auto du2 = to_physical(apply_table(to_spectral(g, sq), dx));
    kernels::cmul(du2.data(), up.data(), du2.data(), du2.size());
    const SpectralField corr =
        apply_table(apply_table(apply_table(to_spectral(g, du2), dx), psi), flow);
    add_scaled(out, cplx{0.25 * tau * tau, 0.0}, corr);
    return project_real(out);
}

SpectralField step_kdv_strang(const SpectralField& u0, double tau, int micro,
                              double nonlinear_scale) {
    require_step(tau);
    if (micro < 1) throw std::invalid_argument("micro-step count must be at least 1");
    const SpectralField u = expect_real(u0);
    const Grid& g = u.grid;
    const double norm_in = l2_norm(u);
    const Table half = airy_table(g, 0.5 * tau);
    const Table dx = dx_table(g);

    auto rhs = [&](const std::vector<cplx>& v) {  // ½ ∂ₓ v² on the grid
        std::vector<cplx> sq(v.size());
        kernels::cmul(v.data(), v.data(), sq.data(), v.size());
        auto d = to_physical(apply_table(to_spectral(g, sq), dx));
        kernels::scale(cplx{0.5 * nonlinear_scale, 0.0}, d.data(), d.data(), d.size());
        return d;
    };

    auto v = to_physical(apply_table(u, half));
    const std::size_t n = v.size();
    const double h = tau / micro;
    std::vector<cplx> stage(n);
    for (int m = 0; m < micro; ++m) {
        const auto k1 = rhs(v);
        for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + 0.5 * h * k1[j];
        const auto k2 = rhs(stage);
        for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + 0.5 * h * k2[j];
        const auto k3 = rhs(stage);
        for (std::size_t j = 0; j < n; ++j) stage[j] = v[j] + h * k3[j];
        const auto k4 = rhs(stage);
        for (std::size_t j = 0; j < n; ++j)
            v[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }

    const SpectralField out = project_real(apply_table(to_spectral(g, v), half));
    const double norm_out = l2_norm(out);
    if (!(norm_out <= 10.0 * norm_in)) throw Diverged(norm_out);
    return out;
}

SpectralField apply_step(const SchemeSpec& s, const SpectralField& u, double tau,
                         StepStats* stats) {
    validate_scheme(s);
    if (stats) stats->fp_iterations = 0;
    switch (s.method) {
        case Method::nls_os18:
            return step_nls_os18(u, tau);
        case Method::nls_bs22:
            return step_nls_bs22(u, tau);
        case Method::nls_sym1:
            return step_nls_sym1(u, tau, *s.fp, stats);
        case Method::nls_mid1:
            return step_nls_mid1(u, tau, *s.fp, stats);
        case Method::nls_mid2:
            return step_nls_mid2(u, tau, *s.fp, stats);
        case Method::nls_strang:
            return step_nls_strang(u, tau);
        case Method::kdv_sym1:
            return step_kdv_sym1(u, tau, *s.fp, stats);
        case Method::kdv_bs2:
            return step_kdv_bs2(u, tau);
        case Method::kdv_strang:
            return step_kdv_strang(u, tau, s.strang_micro);
    }
    throw std::invalid_argument("unknown method");
}

std::vector<double> lagrange_nodes(int r) {
    if (r == 0) return {0.5};
    if (r == 1) return {0.0, 1.0};
    throw std::invalid_argument("interpolation degree must be 0 or 1");
}

std::complex<double> interp_phase(std::complex<double> l_low, double tau, double s,
                                  const std::vector<double>& nodes) {
    require_step(tau);
    if (nodes.empty()) throw std::invalid_argument("node list must not be empty");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) < 1e-12)
                throw std::invalid_argument("interpolation nodes must be distinct");

    const double sigma = s / tau;
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        double basis = 1.0;
        for (std::size_t m = 0; m < nodes.size(); ++m)
            if (m != j) basis *= (sigma - nodes[m]) / (nodes[j] - nodes[m]);
        acc += std::exp(cplx{0.0, 1.0} * (nodes[j] * tau) * l_low) * basis;
    }
    return acc;
}

bool interp_symmetry_check(std::complex<double> l_low, double tau,
                           const std::vector<double>& nodes) {
    require_step(tau);
    const cplx shift = std::exp(cplx{0.0, -1.0} * tau * l_low);
    for (int i = 0; i < 10; ++i) {
        const double s = tau * i / 9.0;
        const cplx lhs = interp_phase(l_low, -tau, s - tau, nodes);
        const cplx rhs = shift * interp_phase(l_low, tau, s, nodes);
        if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) return false;
    }
    return true;
}

bool interp_symmetry_check(std::complex<double> l_low, double tau) {
    return interp_symmetry_check(l_low, tau, lagrange_nodes(1));
}

EvolveResult evolve(const SchemeSpec& s, const SpectralField& u0, double tau, long steps,
                    const std::vector<Observer>& observers, long stride) {
    validate_scheme(s);
    require_step(tau);
    if (steps < 1) throw std::invalid_argument("step count must be at least 1");
    if (stride < 1) throw std::invalid_argument("observer stride must be at least 1");

    EvolveResult r{u0, {}, 0, 0};
    auto record = [&](long n) {
        TrajectorySample sample{n, tau * static_cast<double>(n), {}};
        sample.values.reserve(observers.size());
        for (const auto& observe : observers) sample.values.push_back(observe(r.u));
        r.samples.push_back(std::move(sample));
    };

    record(0);
    for (long n = 1; n <= steps; ++n) {
        StepStats st;
        try {
            r.u = apply_step(s, r.u, tau, &st);
        } catch (NoConvergence& e) {
            e.step_index = n;
            throw;
        } catch (Diverged& e) {
            e.step_index = n;
            throw;
        }
        r.fp_iterations_total += st.fp_iterations;
        r.fp_iterations_max = std::max(r.fp_iterations_max, st.fp_iterations);
        const double nrm = l2_norm(r.u);
        if (!(nrm <= 1e6)) {
            Diverged d(nrm);
            d.step_index = n;
            throw d;
        }
        if (n % stride == 0) record(n);
    }
    return r;
}

}  // namespace lowreg
