#include "lowreg/spectral.hpp"

#include "lowreg/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>

namespace lowreg {

namespace {

using cplx = std::complex<double>;

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// One forward/backward plan pair per grid size, created once and reused.
// Plans are built with FFTW_UNALIGNED so they can execute on any caller
// buffer via the new-array interface, and FFTW_ESTIMATE keeps plan selection
// deterministic across runs.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair plans_for(int M) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    std::vector<cplx> a(static_cast<std::size_t>(M)), b(static_cast<std::size_t>(M));
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(M, ap, bp, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(M, ap, bp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(M, p);
    return p;
}

void run_plan(fftw_plan plan, const cplx* in, cplx* out) {
    // out-of-place c2c transforms leave the input intact
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

Grid::Grid(int M_) : M(M_) {
    if (M < 8 || !power_of_two(M))
        throw std::invalid_argument("grid size must be a power of two and at least 8");
}

std::vector<cplx> to_physical(const SpectralField& f) {
    std::vector<cplx> out(f.coeffs.size());
    run_plan(plans_for(f.grid.M).bwd, f.coeffs.data(), out.data());
    return out;
}

SpectralField to_spectral(const Grid& g, const std::vector<cplx>& samples) {
    if (samples.size() != static_cast<std::size_t>(g.M))
        throw std::invalid_argument("sample count does not match grid size");
    SpectralField f(g);
    run_plan(plans_for(g.M).fwd, samples.data(), f.coeffs.data());
    kernels::scale(cplx{1.0 / g.M, 0.0}, f.coeffs.data(), f.coeffs.data(), f.coeffs.size());
    return f;
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(int)>& m) {
    std::vector<cplx> table(f.coeffs.size());
    for (std::size_t n = 0; n < table.size(); ++n) table[n] = m(f.grid.freq(static_cast<int>(n)));
    SpectralField out(f.grid);
    kernels::cmul(f.coeffs.data(), table.data(), out.coeffs.data(), table.size());
    return out;
}

SpectralField inv_dx(const SpectralField& f) {
    return apply_multiplier(f, [](int k) -> cplx {
        if (k == 0) return {0.0, 0.0};
        return cplx{0.0, -1.0 / k};  // 1/(ik)
    });
}

double h_norm(const SpectralField& f, double s) {
    std::vector<double> w(f.coeffs.size());
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double k = f.grid.freq(static_cast<int>(n));
        w[n] = std::pow(1.0 + k * k, s);
    }
    return std::sqrt(kernels::norm2_weighted(w.data(), f.coeffs.data(), f.coeffs.size()));
}

double l2_norm(const SpectralField& f) {
    return std::sqrt(2.0 * Grid::pi()) * h_norm(f, 0.0);
}

SpectralField smooth_data(const Grid& g) {
    std::vector<cplx> samples(static_cast<std::size_t>(g.M));
    for (int j = 0; j < g.M; ++j) {
        const double x = g.x(j);
        samples[static_cast<std::size_t>(j)] = {std::cos(x) / (2.0 + std::sin(x)), 0.0};
    }
    SpectralField f = to_spectral(g, samples);
    const double nrm = l2_norm(f);
    kernels::scale(cplx{1.0 / nrm, 0.0}, f.coeffs.data(), f.coeffs.data(), f.coeffs.size());
    return f;
}

SpectralField rough_data(const Grid& g, double theta, std::uint64_t seed) {
    if (!(theta > 0.0)) throw std::invalid_argument("roughness exponent must be positive");
    std::mt19937_64 gen(seed);
    auto u01 = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    SpectralField f(g);
    for (int m = -g.M / 2 + 1; m <= g.M / 2; ++m) {
        if (m == 0) continue;
        const double re = u01(), im = u01();
        const double damp = std::pow(std::abs(static_cast<double>(m)), -theta);
        f.coeffs[static_cast<std::size_t>(g.index(m))] = damp * cplx{re, im};
    }
    f.coeffs[0] = {u01(), u01()};
    const double nrm = l2_norm(f);
    kernels::scale(cplx{1.0 / nrm, 0.0}, f.coeffs.data(), f.coeffs.data(), f.coeffs.size());
    return f;
}

SpectralField real_rough_data(const Grid& g, double theta, std::uint64_t seed) {
    auto samples = to_physical(rough_data(g, theta, seed));
    for (auto& v : samples) v = cplx{v.real(), 0.0};
    SpectralField f = to_spectral(g, samples);
    f.coeffs[static_cast<std::size_t>(g.M / 2)] = 0.0;
    const double nrm = l2_norm(f);
    kernels::scale(cplx{1.0 / nrm, 0.0}, f.coeffs.data(), f.coeffs.data(), f.coeffs.size());
    return f;
}

namespace {

constexpr char snapshot_magic[8] = {'L', 'O', 'W', 'R', 'E', 'G', 'S', '1'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void save_snapshot(const std::string& path, const SpectralField& f) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    const std::uint64_t m64 = static_cast<std::uint64_t>(f.grid.M);
    const double length = 2.0 * Grid::pi();
    bool ok = std::fwrite(snapshot_magic, 1, sizeof snapshot_magic, fp.get()) == sizeof snapshot_magic &&
              std::fwrite(&m64, sizeof m64, 1, fp.get()) == 1 &&
              std::fwrite(&length, sizeof length, 1, fp.get()) == 1 &&
              std::fwrite(f.coeffs.data(), sizeof(cplx), f.coeffs.size(), fp.get()) ==
                  f.coeffs.size();
    if (!ok) throw std::runtime_error("short write while saving snapshot: " + path);
}

SpectralField load_snapshot(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open snapshot file: " + path);
    char magic[8];
    std::uint64_t m64 = 0;
    double length = 0.0;
    if (std::fread(magic, 1, sizeof magic, fp.get()) != sizeof magic ||
        std::memcmp(magic, snapshot_magic, sizeof magic) != 0)
        throw std::runtime_error("not a field snapshot: " + path);
    if (std::fread(&m64, sizeof m64, 1, fp.get()) != 1 ||
        std::fread(&length, sizeof length, 1, fp.get()) != 1)
        throw std::runtime_error("truncated snapshot header: " + path);
    if (m64 < 8 || m64 > (1u << 24) || !power_of_two(static_cast<int>(m64)))
        throw std::runtime_error("snapshot grid size out of range: " + path);
    if (std::abs(length - 2.0 * Grid::pi()) > 1e-12)
        throw std::runtime_error("snapshot domain length mismatch: " + path);
    SpectralField f{Grid(static_cast<int>(m64))};
    if (std::fread(f.coeffs.data(), sizeof(cplx), f.coeffs.size(), fp.get()) != f.coeffs.size())
        throw std::runtime_error("truncated snapshot payload: " + path);
    return f;
}

}  // namespace lowreg
