#include "doctest.h"
#include "lowreg/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace lowreg;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = {d(rng), d(rng)};
    return v;
}

struct VariantGuard {
    kernels::Variant saved = kernels::active();
    ~VariantGuard() { kernels::set_variant(saved); }
};

double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(want), 1.0);
    return std::abs(got - want) / scale;
}

}  // namespace

TEST_CASE("scalar kernel semantics on hand-checked values") {
    VariantGuard guard;
    kernels::set_variant(kernels::Variant::scalar);

    const cplx a[2] = {{1.0, 2.0}, {0.0, 1.0}};
    const cplx b[2] = {{3.0, 4.0}, {0.0, 1.0}};
    cplx out[2];

    kernels::cmul(a, b, out, 2);
    CHECK(out[0] == cplx{-5.0, 10.0});
    CHECK(out[1] == cplx{-1.0, 0.0});

    kernels::cubic(a, out, 2);  // |1+2i|^2 = 5, |i|^2 = 1
    CHECK(out[0] == cplx{5.0, 10.0});
    CHECK(out[1] == cplx{0.0, 1.0});

    cplx y[2] = {{1.0, 0.0}, {0.0, 0.0}};
    kernels::axpy(cplx{0.0, 2.0}, a, y, 2);  // y += 2i * a
    CHECK(y[0] == cplx{-3.0, 2.0});
    CHECK(y[1] == cplx{-2.0, 0.0});

    kernels::scale(cplx{2.0, 0.0}, a, out, 2);
    CHECK(out[0] == cplx{2.0, 4.0});
    CHECK(out[1] == cplx{0.0, 2.0});

    const double w[2] = {1.0, 2.0};
    const cplx x[2] = {{1.0, 1.0}, {0.0, 2.0}};
    CHECK(kernels::norm2_weighted(w, x, 2) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("kernels allow exact in-place aliasing") {
    VariantGuard guard;
    for (auto v : {kernels::Variant::scalar, kernels::Variant::avx2}) {
        if (!kernels::available(v)) continue;
        kernels::set_variant(v);
        std::mt19937_64 rng(13131313);
        auto a = random_vec(rng, 33);
        auto b = random_vec(rng, 33);

        auto expect = a;
        kernels::cmul(a.data(), b.data(), expect.data(), 33);
        auto inplace = a;
        kernels::cmul(inplace.data(), b.data(), inplace.data(), 33);
        for (std::size_t i = 0; i < 33; ++i) CHECK(inplace[i] == expect[i]);

        kernels::cubic(a.data(), expect.data(), 33);
        inplace = a;
        kernels::cubic(inplace.data(), inplace.data(), 33);
        for (std::size_t i = 0; i < 33; ++i) CHECK(inplace[i] == expect[i]);

        expect = a;
        kernels::scale(cplx{0.5, -1.5}, a.data(), expect.data(), 33);
        inplace = a;
        kernels::scale(cplx{0.5, -1.5}, inplace.data(), inplace.data(), 33);
        for (std::size_t i = 0; i < 33; ++i) CHECK(inplace[i] == expect[i]);
    }
}

TEST_CASE("vector variant agrees with the scalar reference") {
    if (!kernels::available(kernels::Variant::avx2)) {
        MESSAGE("avx2 not available on this build/machine; equivalence not exercised");
        return;
    }
    VariantGuard guard;
    std::mt19937_64 rng(20240818);

    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7},
                          std::size_t{8}, std::size_t{15}, std::size_t{64}, std::size_t{129}}) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        std::vector<double> w(n);
        for (auto& x : w) x = std::uniform_real_distribution<double>(0.0, 9.0)(rng);
        const cplx alpha{-0.7, 1.3};

        std::vector<cplx> s1(n), s2(n), v1(n), v2(n);
        std::vector<cplx> ys = a, yv = a;

        kernels::set_variant(kernels::Variant::scalar);
        kernels::cmul(a.data(), b.data(), s1.data(), n);
        kernels::cubic(a.data(), s2.data(), n);
        kernels::axpy(alpha, b.data(), ys.data(), n);
        const double ns = kernels::norm2_weighted(w.data(), a.data(), n);

        kernels::set_variant(kernels::Variant::avx2);
        kernels::cmul(a.data(), b.data(), v1.data(), n);
        kernels::cubic(a.data(), v2.data(), n);
        kernels::axpy(alpha, b.data(), yv.data(), n);
        const double nv = kernels::norm2_weighted(w.data(), a.data(), n);

        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rel_err(v1[i], s1[i]) <= 1e-14);
            CHECK(rel_err(v2[i], s2[i]) <= 1e-14);
            CHECK(rel_err(yv[i], ys[i]) <= 1e-14);
        }
        CHECK(std::abs(nv - ns) <= 1e-13 * std::max(1.0, std::abs(ns)));

        std::vector<cplx> ss(n), sv(n);
        kernels::set_variant(kernels::Variant::scalar);
        kernels::scale(alpha, a.data(), ss.data(), n);
        kernels::set_variant(kernels::Variant::avx2);
        kernels::scale(alpha, a.data(), sv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(rel_err(sv[i], ss[i]) <= 1e-14);
    }
}

TEST_CASE("variant selection") {
    CHECK(kernels::available(kernels::Variant::scalar));
    CHECK(std::string(kernels::name(kernels::Variant::scalar)) == "scalar");
    CHECK(std::string(kernels::name(kernels::Variant::avx2)) == "avx2");

    const auto best = kernels::available(kernels::Variant::avx2) ? kernels::Variant::avx2
                                                                 : kernels::Variant::scalar;
    CHECK(kernels::select_variant(nullptr) == best);
    CHECK(kernels::select_variant("scalar") == kernels::Variant::scalar);
    CHECK(kernels::select_variant("nonsense") == best);
    if (kernels::available(kernels::Variant::avx2))
        CHECK(kernels::select_variant("avx2") == kernels::Variant::avx2);
    else
        CHECK_THROWS_AS(kernels::set_variant(kernels::Variant::avx2), std::invalid_argument);

    VariantGuard guard;
    kernels::set_variant(kernels::Variant::scalar);
    CHECK(kernels::active() == kernels::Variant::scalar);
}
