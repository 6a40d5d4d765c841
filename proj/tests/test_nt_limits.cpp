#include "doctest.h"

#include <cmath>

#include "rdlab/nt_limits.hpp"
#include "rdlab/quadrature.hpp"

using namespace rdlab;

namespace {

// High-precision small-height oracle: with u = (y - x0)/delta,
//   delta^beta int f(y)|x-y|^(-(d+beta)) dy = int f(x0 + delta u)(1+|u|^2)^(-(d+beta)/2) du,
// stable at tiny delta (d = 1).
double recovery_oracle_1d(const std::function<double(double)>& f, double x0, double delta,
                          double beta) {
    auto g = [&](double u) {
        return (f(x0 + delta * u) + f(x0 - delta * u)) * std::pow(1.0 + u * u, -0.5 * (1.0 + beta));
    };
    std::vector<double> breaks = geometric_breaks(1e-6, 1e7, 2.0);
    const double head = g(0.0) * 1e-6;
    return head + gauss_panels(g, breaks, 16);
}

} // namespace

TEST_CASE("cone samples respect the aperture") {
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 10.0, 0.01);
    Vec y0(4);
    // eta = 1: points on the exact normal ray
    ConeSpec spec = default_cone(mu, y0, 1.0);
    auto pts = cone_samples(mu, spec);
    for (const auto& p : pts) {
        CHECK(p.x[0] == doctest::Approx(0.0));
        CHECK(p.delta == doctest::Approx(p.x[3]).epsilon(1e-12));
    }
    // eta = 0.5 tilts by 30 degrees of elevation and still verifies membership
    ConeSpec half = default_cone(mu, y0, 0.5);
    auto pts2 = cone_samples(mu, half);
    for (const auto& p : pts2) {
        const double reach = std::sqrt(dist2(p.x, y0));
        CHECK(p.delta >= 0.5 * reach * (1.0 - 1e-9));
    }
    // a direction inside the plane violates every aperture
    ConeSpec bad = default_cone(mu, y0, 0.3);
    bad.normal = unit_axis(4, 0); // lies in the plane
    bad.tangent = unit_axis(4, 0);
    CHECK_THROWS_AS(cone_samples(mu, bad), std::invalid_argument);
}

TEST_CASE("nt_extrapolate on synthetic data") {
    std::vector<std::pair<double, double>> flat, lin;
    for (int k = 4; k <= 10; ++k) {
        const double r = std::pow(2.0, -k);
        flat.emplace_back(r, 3.0);
        lin.emplace_back(r, 1.0 + r);
    }
    auto a = nt_extrapolate(flat);
    CHECK(a.limit == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(a.slope) < 1e-9);
    auto b = nt_extrapolate(lin);
    CHECK(b.limit == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.slope == doctest::Approx(1.0).epsilon(1e-6));

    // F(r) = c1 (1 + r log r): quadratic fit recovers c1 within 1e-3 at radii <= 1e-2
    const double c1v = radial_const(1.0, 2.0);
    std::vector<std::pair<double, double>> hard;
    for (int k = 7; k <= 13; ++k) {
        const double r = std::pow(2.0, -k);
        hard.emplace_back(r, c1v * (1.0 + r * std::log(r)));
    }
    auto c = nt_extrapolate(hard);
    CHECK(std::abs(c.limit - c1v) / c1v < 1e-3);

    CHECK_THROWS_AS(nt_extrapolate({{0.1, 1.0}, {0.05, 1.0}, {0.025, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("nt_constant identities") {
    CHECK(nt_constant(1.0, 1.0) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(nt_constant(2.0, 2.0) == doctest::Approx(M_PI).epsilon(1e-12));
    // matches the Newton boundary constant at beta = n-d-2
    for (auto [n, d] : {std::pair{5, 1.0}, {7, 2.0}, {9, 3.0}}) {
        GeometryParams p(n, d, 1.0);
        CHECK(nt_constant(d, p.codim2()) == doctest::Approx(ledger(p).c1).epsilon(1e-12));
    }
}

TEST_CASE("density recovery: constant density is exact at every radius") {
    auto mu = flat_measure(1.0, 4, density_const(1.0, 1), 12.0, 0.01);
    GeometryParams p(4, 1.0, 1.0);
    Vec y0(4);
    ConeSpec spec = default_cone(mu, y0, 1.0);
    spec.radii = geometric_radii(1.0, 4, 8);
    // every sampled value is already the limit
    for (const auto& q : cone_samples(mu, spec)) {
        auto v = riesz_potential(mu, riesz_request(1.0 + 1.0), q.x);
        CHECK(std::pow(q.delta, 1.0) * v.value ==
              doctest::Approx(nt_constant(1.0, 1.0)).epsilon(1e-9));
    }
    auto rec = density_recovery(mu, p, y0, 1.0, spec);
    CHECK(rec.rel_err < 1e-8);
}

TEST_CASE("density recovery at a Gaussian bump, aperture independence") {
    // f = 1 + 0.5 exp(-|y|^2), d=1, n=4, recovered at y0 = 0 is 1.5 within 1%
    auto dens = density_gauss_bump(1, 0.5, 1.0);
    auto mu = flat_measure(1.0, 4, dens, 12.0, 0.01);
    GeometryParams p(4, 1.0, 1.0);
    Vec y0(4);
    const double beta = p.codim2(); // Newton exponent n-d-2 = 1
    double recovered[3];
    int i = 0;
    for (double eta : {0.3, 0.6, 1.0}) {
        ConeSpec spec = default_cone(mu, y0, eta);
        spec.radii = geometric_radii(1.0, 4, 10);
        auto rec = density_recovery(mu, p, y0, beta, spec);
        CHECK(rec.reference == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(rec.rel_err < 0.01);
        recovered[i++] = rec.recovered;
    }
    CHECK(std::abs(recovered[0] - recovered[2]) < 0.01 * 1.5);
    CHECK(std::abs(recovered[1] - recovered[2]) < 0.01 * 1.5);

    // far from the bump the recovered value returns to 1
    Vec yfar(4);
    yfar[0] = 8.0;
    ConeSpec far_spec = default_cone(mu, yfar, 0.6);
    far_spec.radii = geometric_radii(1.0, 4, 10);
    auto rec_far = density_recovery(mu, p, yfar, beta, far_spec);
    CHECK(rec_far.recovered == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("recovered limit matches the independent small-height oracle") {
    auto dens = density_gauss_bump(1, 0.5, 1.0);
    auto mu = flat_measure(1.0, 4, dens, 12.0, 0.01);
    GeometryParams p(4, 1.0, 1.0);
    auto f = [](double y) { return 1.0 + 0.5 * std::exp(-y * y); };
    // oracle at tiny delta straight above the bump
    const double tiny = recovery_oracle_1d(f, 0.0, 1e-5, 1.0);
    CHECK(tiny == doctest::Approx(nt_constant(1.0, 1.0) * 1.5).epsilon(1e-4));
    Vec y0(4);
    ConeSpec spec = default_cone(mu, y0, 1.0);
    spec.radii = geometric_radii(1.0, 4, 10);
    auto rec = density_recovery(mu, p, y0, 1.0, spec);
    CHECK(rec.recovered * nt_constant(1.0, 1.0) == doctest::Approx(tiny).epsilon(0.01));
}

TEST_CASE("two-exponent recovery satisfies the density relation") {
    // h and f linked by c1 h = (c2 f)^((n-d-2)/alpha): recover both sides
    // independently and check the relation pointwise.
    GeometryParams p(5, 1.0, 1.0); // n-d-2 = 2
    ConstantsLedger L = ledger(p);
    auto f_dens = density_gauss_bump(1, 0.5, 1.0);
    const double q = p.codim2() / p.alpha;
    Density h_dens;
    auto f_eval = f_dens.eval;
    const double c1v = L.c1, c2v = L.c2;
    h_dens.eval = [f_eval, q, c1v, c2v](const Vec& y) {
        return std::pow(c2v * f_eval(y), q) / c1v;
    };
    h_dens.limit_at_infinity = std::pow(c2v, q) / c1v;
    h_dens.inf_bound = std::min(std::pow(c2v * 1.0, q), std::pow(c2v * 1.5, q)) / c1v;
    h_dens.sup_bound = std::max(std::pow(c2v * 1.0, q), std::pow(c2v * 1.5, q)) / c1v;
    h_dens.feature_center = Vec(1);
    h_dens.feature_radius = 8.0;
    h_dens.feature_scale = 1.0;

    auto mu_f = flat_measure(1.0, 5, f_dens, 12.0, 0.01);
    auto mu_h = flat_measure(1.0, 5, h_dens, 12.0, 0.01);
    Vec y0(5);
    y0[0] = 0.4;
    ConeSpec sf = default_cone(mu_f, y0, 0.8);
    sf.radii = geometric_radii(1.0, 4, 10);
    auto rec_f = density_recovery(mu_f, p, y0, p.alpha, sf);       // exponent alpha
    auto rec_h = density_recovery(mu_h, p, y0, p.codim2(), sf);    // exponent n-d-2
    const double lhs = c1v * rec_h.recovered;
    const double rhs = std::pow(c2v * rec_f.recovered, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(0.02));
}

TEST_CASE("density recovery on a graph with horizontal tangent at y0") {
    // psi(y) = eps (1 - cos y) e1 has psi'(0) = 0: tangent plane at y0 = 0 is
    // horizontal and the recovered density is (1+phi)/sqrt(det) = 1.
    const double eps = 0.1;
    auto psi = [eps](const Vec& y) {
        Vec v(3);
        v[0] = eps * (1.0 - std::cos(y[0]));
        return v;
    };
    auto mu = graph_measure(1, 4, psi, density_const(0.0, 1), 10.0, 0.002);
    GeometryParams p(4, 1.0, 1.0);
    Vec y0(4); // graph passes through the origin
    ConeSpec spec = default_cone(mu, y0, 1.0);
    spec.radii = {0.4, 0.2, 0.1, 0.05, 0.025}; // above the node-sum floor
    auto rec = density_recovery(mu, p, y0, p.codim2(), spec);
    CHECK(rec.reference == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.rel_err < 0.02);
}
