#include "doctest.h"

#include <cmath>

#include "rdlab/operators.hpp"
#include "rdlab/potentials.hpp"

using namespace rdlab;

namespace {
Vec off_plane_point(int n, double x0_first, double delta) {
    Vec x(n);
    x[0] = x0_first;
    x[n - 1] = delta;
    return x;
}
} // namespace

TEST_CASE("riesz potential on the flat line: pinned pi and closed forms") {
    GeometryParams p(4, 1.0, 1.0);
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 10.0, 0.01);
    // w = 1, p = 2, delta = 1: int dy/(1+y^2) = pi
    Vec x = off_plane_point(4, 0.0, 1.0);
    auto v = riesz_potential(mu, riesz_request(2.0), x);
    CHECK(v.value == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(v.usable);

    // p = d + alpha gives c2 delta^(-alpha) at several heights and offsets
    for (double delta : {0.05, 0.4, 1.0, 3.0, 9.0}) {
        for (double off : {0.0, 1.7, 6.0}) {
            Vec y = off_plane_point(4, off, delta);
            auto w = riesz_potential(mu, riesz_request(1.0 + p.alpha), y);
            CHECK(w.value ==
                  doctest::Approx(radial_const(1.0, p.alpha) / delta).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(riesz_potential(mu, riesz_request(0.5), x), std::invalid_argument);
}

TEST_CASE("zero weight gives zero potential") {
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 6.0, 0.02);
    Vec x = off_plane_point(4, 0.0, 0.7);
    auto v = riesz_potential(mu, riesz_request(2.0, density_const(0.0, 1)), x);
    CHECK(v.value == doctest::Approx(0.0));
}

TEST_CASE("smooth distance on the constant-density plane") {
    GeometryParams p(4, 1.0, 1.0);
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 10.0, 0.01);
    // pinned: d=1, alpha=1, n=4, delta=1, density 1 -> 1/pi
    auto v = smooth_distance(mu, p, off_plane_point(4, 0.0, 1.0));
    CHECK(v.value == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
    // D = c2^(-1/alpha) delta across two decades
    for (double delta : {0.05, 0.2, 1.0, 2.5, 5.0}) {
        auto w = smooth_distance(mu, p, off_plane_point(4, 1.3, delta));
        CHECK(w.value ==
              doctest::Approx(flat_distance_closed_form(p, 1.0, delta)).epsilon(1e-8));
    }
    // translation symmetry: equal delta, different x0
    auto a = smooth_distance(mu, p, off_plane_point(4, -2.0, 0.8));
    auto b = smooth_distance(mu, p, off_plane_point(4, 4.0, 0.8));
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
}

TEST_CASE("smooth distance homogeneity and density monotonicity") {
    GeometryParams p(5, 1.0, 1.5);
    auto mu = flat_measure(1.0, 5, density_const(1.0, 1), 12.0, 0.01);
    // homogeneity D(lambda x) = lambda D(x) for the flat measure
    Vec x = off_plane_point(5, 0.6, 0.5);
    Vec x2 = x;
    x2 *= 3.0;
    const double D1 = smooth_distance(mu, p, x).value;
    const double D2 = smooth_distance(mu, p, x2).value;
    CHECK(D2 == doctest::Approx(3.0 * D1).epsilon(1e-8));

    // pointwise larger density -> pointwise smaller D
    auto dens_hi = density_gauss_bump(1, 0.8, 1.0);
    auto mu_hi = flat_measure(1.0, 5, dens_hi, 12.0, 0.01);
    const double Dlo = smooth_distance(mu, p, off_plane_point(5, 0.0, 0.7)).value;
    const double Dhi = smooth_distance(mu_hi, p, off_plane_point(5, 0.0, 0.7)).value;
    CHECK(Dhi < Dlo);
}

TEST_CASE("newton potential closed form and Lemma-style bound") {
    GeometryParams p(5, 1.0, 1.0);
    auto mu = flat_measure(1.0, 5, density_const(1.0, 1), 12.0, 0.01);
    auto one = density_const(1.0, 1);
    for (double delta : {0.1, 0.5, 2.0, 8.0}) {
        Vec x = off_plane_point(5, 0.0, delta);
        auto v = newton_potential(mu, one, p, x);
        CHECK(v.value ==
              doctest::Approx(flat_newton_closed_form(p, 1.0, delta)).epsilon(1e-8));
    }
    // |u_f| <= c delta^(-(n-d-2)) ||f||_inf with one empirical constant over
    // two decades of delta
    double cmax = 0, cmin = 1e300;
    for (double delta = 0.08; delta < 8.0; delta *= 1.7) {
        Vec x = off_plane_point(5, 0.9, delta);
        auto v = newton_potential(mu, one, p, x);
        const double ratio = v.value * std::pow(delta, p.codim2());
        cmax = std::max(cmax, ratio);
        cmin = std::min(cmin, ratio);
    }
    CHECK(cmax / cmin < 1.001); // flat case: the constant is exactly c1
}

TEST_CASE("newton potential far field of a Cantor cloud matches the multipole oracle") {
    GeometryParams p(4, 0.5, 1.5); // n - 2 = 2 kernel
    auto mu = cantor_measure(4, 0.25, 2, 7, 1);
    Vec far{9.0, 6.0, 3.0, 2.0};
    auto v = riesz_potential(mu, riesz_request(p.n - 2.0), far);
    const Vec c = mu.centroid();
    const double mono = mu.total_weight * std::pow(dist2(far, c), -0.5 * (p.n - 2.0));
    CHECK(v.value == doctest::Approx(mono).epsilon(0.01));
}

TEST_CASE("distributional laplacian identity via Monte Carlo") {
    GeometryParams p(4, 1.0, 1.0);
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 60.0, 0.02);
    RadialBump phi;
    phi.center = Vec(4);
    phi.R = 1.0;
    auto chk = distributional_laplacian_check(mu, p, 1.0, phi, 1000000, 42);
    CHECK(chk.rel_err < 0.02);
    CHECK(chk.enough_samples);

    // f = 0: both sides vanish
    auto zero = distributional_laplacian_check(mu, p, 0.0, phi, 10000, 42);
    CHECK(zero.lhs == doctest::Approx(0.0));
    CHECK(zero.rhs == doctest::Approx(0.0));

    // bump supported off the plane: both sides ~ 0 against the on-plane scale
    RadialBump off;
    off.center = Vec(4);
    off.center[3] = 3.0;
    off.R = 1.0;
    auto harm = distributional_laplacian_check(mu, p, 1.0, off, 400000, 42);
    RadialBump on;
    on.center = Vec(4);
    on.R = 1.0;
    auto ref = distributional_laplacian_check(mu, p, 1.0, on, 1000, 42);
    CHECK(std::abs(harm.rhs) == doctest::Approx(0.0));
    CHECK(std::abs(harm.lhs) < 0.02 * std::abs(ref.rhs));
}

TEST_CASE("distance equivalence bands") {
    GeometryParams p(4, 1.0, 1.0);
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 10.0, 0.01);
    std::vector<Vec> pts;
    for (double delta : {0.2, 0.7, 2.0})
        for (double off : {-1.0, 0.5, 3.0}) pts.push_back(off_plane_point(4, off, delta));
    auto band = equivalence_dist_check(mu, p, pts);
    const double expect = std::pow(radial_const(1.0, 1.0), -1.0);
    CHECK(band.ratio_min == doctest::Approx(expect).epsilon(1e-8));
    CHECK(band.ratio_max == doctest::Approx(expect).epsilon(1e-8));

    // density in [1/2, 2] pins the band inside the monotone envelope
    Density half_two = density_wiggle(1, 0.5, 1.0, 2.0);
    half_two.inf_bound = 0.5;
    half_two.sup_bound = 1.5;
    auto mu2 = flat_measure(1.0, 4, half_two, 10.0, 0.01);
    auto band2 = equivalence_dist_check(mu2, p, pts);
    CHECK(band2.ratio_min >= std::pow(2.0 * radial_const(1.0, 1.0), -1.0) * 0.999);
    CHECK(band2.ratio_max <= std::pow(0.5 * radial_const(1.0, 1.0), -1.0) * 1.001);

    // Cantor: finite positive band, stable under depth refinement
    GeometryParams pc(3, 0.5, 0.75);
    auto c1m = cantor_measure(3, 0.25, 2, 8, 1);
    auto c2m = cantor_measure(3, 0.25, 2, 10, 1);
    std::vector<Vec> cpts;
    for (double delta : {0.05, 0.2, 0.6}) {
        cpts.push_back(Vec{0.5, delta, 0.0});
        cpts.push_back(Vec{0.1, -delta, delta});
    }
    auto cb1 = equivalence_dist_check(c1m, pc, cpts);
    auto cb2 = equivalence_dist_check(c2m, pc, cpts);
    CHECK(cb1.ratio_min > 0);
    CHECK(std::isfinite(cb1.ratio_max));
    CHECK(cb2.ratio_min == doctest::Approx(cb1.ratio_min).epsilon(0.05));
    CHECK(cb2.ratio_max == doctest::Approx(cb1.ratio_max).epsilon(0.05));
}

TEST_CASE("flat quadrature closed form at d = 2") {
    // plane of dimension 2 in R^7: kernel |x-y|^(-(2+alpha)) integrates to
    // c2 delta^(-alpha)
    GeometryParams p(7, 2.0, 1.0);
    auto mu = flat_measure(2.0, 7, density_const(1.0, 2), 8.0, 0.05);
    for (double delta : {0.3, 1.0, 2.5}) {
        Vec x(7);
        x[0] = 0.7;
        x[6] = delta;
        auto v = riesz_potential(mu, riesz_request(2.0 + p.alpha), x);
        CHECK(v.value ==
              doctest::Approx(radial_const(2.0, p.alpha) / delta).epsilon(1e-8));
    }
}

TEST_CASE("newton potential superposition is harmonic off the support") {
    GeometryParams p(5, 1.0, 1.0);
    auto mu = flat_measure(1.0, 5, density_gauss_bump(1, 0.5, 1.0), 10.0, 0.01);
    Vec x(5);
    x[0] = 0.4;
    x[4] = 0.6;
    PotentialField field(mu, riesz_request(p.n - 2.0), x);
    auto u = [&](const Vec& y) { return field.value(y); };
    // raw FD Laplacian decays at second order under step halving
    const double delta = 0.6;
    double prev = 0;
    std::vector<double> resid;
    for (double h : {delta / 16.0, delta / 32.0, delta / 64.0}) {
        FDStencil st;
        st.h = h;
        st.richardson_levels = 0;
        resid.push_back(std::abs(fd_laplacian(u, x, delta, st).value));
        (void)prev;
    }
    const double order = std::log2(resid[0] / resid[2]) / 2.0;
    CHECK(order > 1.8);
    // and the extrapolated value is consistent with zero
    auto lap = fd_laplacian(u, x, delta);
    CHECK(std::abs(lap.value) < 10.0 * lap.err_estimate + 1e-10 * field.value(x) / (delta * delta));
}

TEST_CASE("graph with zero map reproduces the flat closed form off-center") {
    // node sums plus the asymptotic-plane tail must match c2^(-1/alpha) delta
    // even when the evaluation point is away from the truncation center
    GeometryParams p(4, 1.0, 1.0);
    auto psi0 = [](const Vec&) { return Vec(3); };
    auto mu = graph_measure(1, 4, psi0, density_const(0.0, 1), 8.0, 0.005);
    for (double off : {0.0, 1.5, 4.0}) {
        for (double delta : {0.3, 0.8}) {
            Vec x(4);
            x[0] = off;
            x[3] = delta;
            const double D = smooth_distance(mu, p, x).value;
            const double want = flat_distance_closed_form(p, 1.0, delta);
            CHECK(D == doctest::Approx(want).epsilon(2e-4));
        }
    }
}

TEST_CASE("newton bound holds with one constant across delta decades on a Cantor cloud") {
    GeometryParams p(4, 0.5, 1.5); // kernel exponent n-2, decay n-d-2 = 1.5
    auto mu = cantor_measure(4, 0.25, 2, 8, 1);
    Rng rng(5, 21);
    double cmax = 0, cmin = 1e300;
    int used = 0;
    for (int i = 0; i < 400 && used < 24; ++i) {
        Vec x(4);
        for (int k = 0; k < 4; ++k) x[k] = rng.uniform(-0.5, 1.5);
        const double delta = distance_to_support(mu, x);
        if (delta < 10.0 * mu.resolution || delta > 1.0) continue;
        ++used;
        auto v = riesz_potential(mu, riesz_request(p.n - 2.0), x);
        const double ratio = v.value * std::pow(delta, p.codim2());
        cmax = std::max(cmax, ratio);
        cmin = std::min(cmin, ratio);
    }
    REQUIRE(used >= 20);
    CHECK(cmax / cmin < 50.0); // a single empirical constant spans the range
    CHECK(cmin > 0.0);
}
