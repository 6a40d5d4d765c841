#include "doctest.h"

#include <cmath>

#include "rdlab/operators.hpp"
#include "rdlab/oracles.hpp"
#include "rdlab/pde_reduction.hpp"

using namespace rdlab;

TEST_CASE("quadratic-form reduction oracle: int z_i z_j kernel = delta_ij c~/d") {
    // the 1/d isotropy factor behind the r^2 prediction, by brute force at d=2
    for (double qexp : {5.0, 6.0}) { // the two kernels at (n,d,alpha) = (8,2,3)
        const double diag = oracles::quadratic_form_moment(0, 0, qexp);
        const double diag2 = oracles::quadratic_form_moment(1, 1, qexp);
        const double off = oracles::quadratic_form_moment(0, 1, qexp);
        const double expect = second_moment_const(2.0, qexp) / 2.0;
        CHECK(diag == doctest::Approx(expect).epsilon(1e-8));
        CHECK(diag2 == doctest::Approx(expect).epsilon(1e-8));
        CHECK(std::abs(off) < 1e-10 * expect);
    }
}

TEST_CASE("smooth density handles match central differences") {
    auto hb = smooth_gauss_bump(2, 0.5, 1.2);
    auto hp = smooth_harmonic_power(2, 4.0 / 3.0, 1.0, 1.5);
    for (const SmoothDensity* h : {&hb, &hp}) {
        for (auto [a, b] : {std::pair{0.2, -0.1}, {0.5, 0.4}, {-0.3, 0.2}}) {
            Vec y{a, b};
            const double fd = 1e-5;
            const Vec g = h->grad(y);
            const HessMat H = h->hess(y);
            for (int i = 0; i < 2; ++i) {
                Vec yp = y, ym = y;
                yp[i] += fd;
                ym[i] -= fd;
                CHECK(g[i] ==
                      doctest::Approx((h->base(yp) - h->base(ym)) / (2 * fd)).epsilon(1e-6));
                CHECK(H[i * 3 + i] ==
                      doctest::Approx((h->base(yp) - 2 * h->base(y) + h->base(ym)) / (fd * fd))
                          .epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("fsolution sides coincide for constant density") {
    GeometryParams p(8, 2.0, 3.0);
    auto h = smooth_const(1.7, 2);
    const double c1 = ledger(p).c1;
    for (double r : {0.05, 0.3, 1.0}) {
        auto s = fsolution_sides(h, p, Vec(2), r);
        CHECK(s.lhs == doctest::Approx(c1 * 1.7).epsilon(1e-9));
        CHECK(s.rhs == doctest::Approx(c1 * 1.7).epsilon(1e-9));
    }
    // hypothesis guards
    CHECK_THROWS_AS(fsolution_sides(h, GeometryParams(6, 2.0, 3.0), Vec(2), 0.1),
                    std::invalid_argument); // n-d = 4
    CHECK_THROWS_AS(fsolution_sides(h, GeometryParams(8, 2.0, 2.1), Vec(2), 0.1),
                    std::invalid_argument); // alpha <= 2 + eps
}

TEST_CASE("pde_residual pinned constant and closed-form families") {
    GeometryParams p(8, 2.0, 3.0);
    CHECK(ledger(p).C_pde == doctest::Approx(-0.25).epsilon(1e-14));
    // constant density
    auto hc = smooth_const(2.0, 2);
    CHECK(pde_residual(hc, p, Vec(2)) == doctest::Approx(0.0));
    // h = (2+y1)^(1/(C+1)) built from the ledger constant: residual 0 exactly
    auto hp = smooth_harmonic_power(2, 1.0 / (1.0 + ledger(p).C_pde), 1.0, 1.5);
    for (auto [a, b] : {std::pair{0.0, 0.0}, {0.3, -0.2}, {-0.4, 0.1}}) {
        Vec y{a, b};
        CHECK(std::abs(pde_residual(hp, p, y)) < 1e-12);
    }
}

TEST_CASE("r2 coefficient: numeric matches the Taylor prediction for a bump") {
    GeometryParams p(8, 2.0, 3.0);
    auto hb = smooth_gauss_bump(2, 0.5, 1.0);
    Vec y0{0.3, 0.0};
    std::vector<double> radii{0.02, 0.028, 0.04, 0.057, 0.08, 0.11, 0.16};
    auto rc = r2_coefficient(hb, p, y0, radii);
    CHECK(rc.well_conditioned);
    CHECK(rc.rel_err < 0.02);
    // and with zero gradient, Hessian = diag: predicted = (1/2)[c1~ - (c1/c2)c2~] lap/d... 
    // at the bump center the gradient vanishes
    Vec center(2);
    auto rc0 = r2_coefficient(hb, p, center, radii);
    const ConstantsLedger L = ledger(p);
    const double expect0 = 0.5 / p.d * (*L.c1_tilde - (L.c1 / L.c2) * *L.c2_tilde) *
                           hb.laplacian(center);
    CHECK(rc0.predicted == doctest::Approx(expect0).epsilon(1e-12));
    CHECK(rc0.rel_err < 0.02);
}

TEST_CASE("consistency chain on the harmonic-power family") {
    // the r^2 coefficient vanishes exactly for the exponent the reduction
    // forces (lap h = -C_red h^{-1}|grad h|^2), and does not vanish for
    // other exponents of the same harmonic base
    GeometryParams p(8, 2.0, 3.0);
    const double C_red = reduction_constant(p);
    CHECK(C_red == doctest::Approx(-0.5).epsilon(1e-14));
    auto h_match = smooth_harmonic_power(2, 1.0 / (1.0 + C_red), 1.0, 1.5);
    // residual with the reduction constant is zero on the matched family
    {
        Vec y{0.1, 0.05};
        const Vec g = h_match.grad(y);
        const double res = h_match.laplacian(y) + C_red * g.norm2() / h_match(y);
        CHECK(std::abs(res) < 1e-12);
    }
    std::vector<double> radii{0.02, 0.028, 0.04, 0.057, 0.08, 0.11, 0.16};
    auto rc_match = r2_coefficient(h_match, p, Vec(2), radii);
    CHECK(rc_match.predicted == doctest::Approx(0.0));
    // numeric coefficient is zero against the natural scale
    const ConstantsLedger L = ledger(p);
    const double scale = std::abs(0.5 / p.d * *L.c1_tilde * h_match.laplacian(Vec(2)));
    CHECK(std::abs(rc_match.numeric) < 0.05 * scale);

    // a mismatched exponent leaves a visible r^2 coefficient
    auto h_off = smooth_harmonic_power(2, 4.0 / 3.0, 1.0, 1.5);
    auto rc_off = r2_coefficient(h_off, p, Vec(2), radii);
    CHECK(std::abs(rc_off.numeric) > 5.0 * std::abs(rc_match.numeric));
    CHECK(std::abs(rc_off.numeric - rc_off.predicted) < 0.02 * std::abs(rc_off.predicted));
}

TEST_CASE("harmonize: log branch, round trip, and sign contract") {
    GeometryParams p(8, 2.0, 3.0);
    // C = -1: g = log h, h = exp(2+y1) gives g = 2+y1
    {
        SmoothDensity h;
        h.base.eval = [](const Vec& y) { return std::exp(2.0 + y[0]); };
        h.base.feature_radius = 0.0;
        auto g = harmonize(h, -1.0);
        CHECK(g.log_branch);
        Vec y{0.2, -0.3};
        CHECK(g.eval(y) == doctest::Approx(2.0 + y[0]).epsilon(1e-13));
        auto f = [&](const Vec& z) { return g.eval(z); };
        auto lap = fd_laplacian(f, y, 1.0);
        CHECK(std::abs(lap.value) < 1e-9);
    }
    // C = -1/4: h = g0^(4/3) with g0 = 2+y1 returns g0 up to 1e-12
    {
        auto h = smooth_harmonic_power(2, 4.0 / 3.0, 1.0, 1.5);
        auto g = harmonize(h, -0.25);
        for (auto [a, b] : {std::pair{0.0, 0.0}, {0.3, -0.2}, {-0.4, 0.1}}) {
            Vec y{a, b};
            CHECK(g.eval(y) == doctest::Approx(2.0 + y[0]).epsilon(1e-12));
        }
        Vec y{0.1, 0.2};
        auto f = [&](const Vec& z) { return g.eval(z); };
        auto lap = fd_laplacian(f, y, 1.0);
        CHECK(std::abs(lap.value) < 1e-8);
    }
    // sign contract: FD lap(g) matches the sign of the residual through the
    // positive multiplier
    {
        auto h = smooth_gauss_bump(2, 0.5, 1.0);
        const double C = ledger(p).C_pde;
        auto g = harmonize(h, C);
        for (auto [a, b] : {std::pair{0.0, 0.0}, {0.8, 0.3}, {1.4, -0.2}}) {
            Vec y{a, b};
            const double res = pde_residual(h, p, y);
            auto f = [&](const Vec& z) { return g.eval(z); };
            auto lap = fd_laplacian(f, y, 0.5);
            CHECK(g.multiplier(y) > 0.0);
            if (std::abs(res) > 1e-6) {
                CHECK(lap.value * res > 0.0);
                CHECK(lap.value == doctest::Approx(g.multiplier(y) * res).epsilon(1e-5));
            }
        }
    }
    // boundedness barrier: harmonized field bounded and away from zero on the box
    {
        auto h = smooth_harmonic_power(2, 4.0 / 3.0, 1.0, 1.5);
        auto g = harmonize(h, -0.25);
        double lo = 1e300, hi = 0;
        for (double a = -2.0; a <= 2.0; a += 0.25)
            for (double b = -2.0; b <= 2.0; b += 0.25) {
                Vec y{a, b};
                lo = std::min(lo, g.eval(y));
                hi = std::max(hi, g.eval(y));
            }
        CHECK(lo > 0.2);
        CHECK(hi < 4.0);
    }
    CHECK_THROWS_AS(harmonize(smooth_const(1.0, 2), -2.0), std::invalid_argument);
}
