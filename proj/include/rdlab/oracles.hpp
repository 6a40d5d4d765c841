#pragma once

// Independent quadrature oracles used by the test and acceptance suites.
// Nothing here is on any hot path; each routine recomputes a quantity the
// library produces in closed form, through a different route.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rdlab/bessel.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/special_constants.hpp"

namespace rdlab::oracles {

// Gamma(x) = int_0^inf t^(x-1) e^(-t) dt, via t = e^u.
inline double gamma_integral(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_integral: x > 0");
    auto f = [&](double u) { return std::exp(x * u - std::exp(u)); };
    const double lo = std::min(-40.0, -40.0 / x);
    const double hi = 6.0 + 2.0 * std::log1p(x);
    std::vector<double> breaks;
    for (double t = lo; t < hi; t += 1.0) breaks.push_back(t);
    breaks.push_back(hi);
    return gauss_panels(f, breaks, 20);
}

// Basset's integral for K_b:
//   K_b(z) = Gamma(b+1/2) (2z)^b / sqrt(pi) * int_0^inf cos(t) (t^2+z^2)^(-b-1/2) dt.
inline double basset_k(double b, double z) {
    if (!(z > 0.0) || !(b >= 0.0)) throw std::invalid_argument("basset_k: b >= 0, z > 0");
    auto f = [&](double t) { return std::pow(t * t + z * z, -(b + 0.5)); };
    const double integral = oscillatory_integral(f, 1.0, 0.0, 160, 16);
    return gamma_fn(b + 0.5) * std::pow(2.0 * z, b) / std::sqrt(M_PI) * integral;
}

// c(d, beta) by direct radial integration.
inline double radial_const_numeric(double d, double beta) {
    return sphere_area_real(d) * radial_power_integral(d - 1.0, d + beta);
}

// Second-moment constant by direct radial integration.
inline double second_moment_numeric(double d, double q) {
    return sphere_area_real(d) * radial_power_integral(d + 1.0, q);
}

// d-dimensional radial Fourier transform of (1+r^2)^(-a/2) at frequency k,
// with the plain e^{-i k y} convention:
//   d = 1: 2 int f(r) cos(kr) dr
//   d = 2: 2 pi int f(r) J0(kr) r dr
//   d = 3: (4 pi / k) int f(r) sin(kr) r dr
inline double radial_fourier_transform(double a, int d, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("radial_fourier_transform: k > 0");
    auto prof = [&](double r) { return std::pow(1.0 + r * r, -0.5 * a); };
    if (d == 1) {
        return 2.0 * oscillatory_integral(prof, k, 0.0, 128, 16);
    }
    if (d == 3) {
        auto f = [&](double r) { return prof(r) * r; };
        return 4.0 * M_PI / k * oscillatory_integral(f, k, -0.5 * M_PI, 192, 16);
    }
    if (d == 2) {
        // panels between consecutive approximate zeros of J0, then averaging
        auto g = [&](double r) { return prof(r) * std::cyl_bessel_j(0.0, k * r) * r; };
        const double z1 = 2.404825557695773 / k;
        double head = gauss_panel(g, 0.0, z1, 24);
        std::vector<double> terms;
        double lo = z1;
        for (int m = 1; m <= 256; ++m) {
            const double hi = (2.404825557695773 + m * M_PI) / k;
            terms.push_back(gauss_panel(g, lo, hi, 16));
            lo = hi;
        }
        return 2.0 * M_PI * (head + euler_accelerate(terms));
    }
    throw std::invalid_argument("radial_fourier_transform: d in {1,2,3}");
}

// int_{R^d} z_i z_j (1+|z|^2)^(-q/2) dz by brute-force Cartesian tensor
// quadrature with geometric panels (d = 2 only; that is where it is needed).
inline double quadratic_form_moment(int i, int j, double q) {
    if (i < 0 || i > 1 || j < 0 || j > 1)
        throw std::invalid_argument("quadratic_form_moment: indices in {0,1}");
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (double t = 1.0 / 64.0; t < 1.2e12; t *= 2.0) breaks.push_back(t);
    std::vector<double> full;
    for (auto it = breaks.rbegin(); it != breaks.rend(); ++it) full.push_back(-*it);
    for (std::size_t m = 1; m < breaks.size(); ++m) full.push_back(breaks[m]);
    const GaussRule& r = gauss_rule(12);
    double total = 0;
    for (std::size_t px = 0; px + 1 < full.size(); ++px) {
        const double ax = full[px], bx = full[px + 1];
        const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
        for (int ix = 0; ix < 12; ++ix) {
            const double zx = mx + hx * r.x[ix];
            double row = 0;
            for (std::size_t py = 0; py + 1 < full.size(); ++py) {
                const double ay = full[py], by = full[py + 1];
                const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
                double s = 0;
                for (int iy = 0; iy < 12; ++iy) {
                    const double zy = my + hy * r.x[iy];
                    const double zi = (i == 0) ? zx : zy;
                    const double zj = (j == 0) ? zx : zy;
                    s += r.w[iy] * zi * zj * std::pow(1.0 + zx * zx + zy * zy, -0.5 * q);
                }
                row += s * hy;
            }
            total += r.w[ix] * row * hx;
        }
    }
    return total;
}

} // namespace rdlab::oracles
