#include "doctest.h"

#include <cmath>

#include "rdlab/quadrature.hpp"

using namespace rdlab;

TEST_CASE("gauss panels integrate polynomials and smooth functions") {
    auto cube = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    const double exact = (16.0 / 4.0 - 4.0 + 2.0) - (1.0 / 4.0 - 1.0 - 1.0);
    CHECK(gauss_panel(cube, -1.0, 2.0, 8) == doctest::Approx(exact).epsilon(1e-13));
    auto g = [](double x) { return std::exp(-x * x); };
    CHECK(gauss_panels(g, {-8.0, -2.0, 0.0, 2.0, 8.0}, 32) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("radial power integral matches Beta closed form") {
    // int_0^inf x^(d-1) (1+x^2)^(-m/2) dx = Gamma(d/2) Gamma((m-d)/2) / (2 Gamma(m/2))
    auto closed = [](double d, double m) {
        return std::tgamma(0.5 * d) * std::tgamma(0.5 * (m - d)) / (2.0 * std::tgamma(0.5 * m));
    };
    for (auto [d, m] : {std::pair{1.0, 3.0}, {2.0, 5.0}, {0.5, 2.5}, {3.0, 9.0}}) {
        CHECK(radial_power_integral(d - 1.0, m) == doctest::Approx(closed(d, m)).epsilon(1e-10));
    }
    // moment variant used for the second-moment constants
    CHECK(radial_power_integral(3.0, 6.0) ==
          doctest::Approx(std::tgamma(2.0) * std::tgamma(1.0) / (2.0 * std::tgamma(3.0)))
              .epsilon(1e-10));
}

TEST_CASE("oscillatory integral reproduces known cosine transforms") {
    // int_0^inf cos(wt)/(1+t^2) dt = (pi/2) e^(-w)
    auto f = [](double t) { return 1.0 / (1.0 + t * t); };
    for (double w : {0.3, 1.0, 2.5}) {
        CHECK(oscillatory_integral(f, w, 0.0) ==
              doctest::Approx(0.5 * M_PI * std::exp(-w)).epsilon(1e-9));
    }
    // int_0^inf t sin(wt)/(1+t^2) dt = (pi/2) e^(-w)
    auto g = [](double t) { return t / (1.0 + t * t); };
    CHECK(oscillatory_integral(g, 1.0, -0.5 * M_PI) ==
          doctest::Approx(0.5 * M_PI * std::exp(-1.0)).epsilon(1e-7));
}

TEST_CASE("least squares fit recovers quadratic coefficients") {
    std::vector<double> xs, ys;
    for (int i = 1; i <= 12; ++i) {
        const double x = 0.01 * i;
        xs.push_back(x);
        ys.push_back(3.0 - 2.0 * x + 5.0 * x * x);
    }
    auto fit = lsq_fit(xs, ys,
                       {[](double) { return 1.0; }, [](double x) { return x; },
                        [](double x) { return x * x; }});
    CHECK(fit[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit[1] == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(fit[2] == doctest::Approx(5.0).epsilon(1e-6));
}
