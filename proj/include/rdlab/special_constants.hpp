#pragma once

// Gamma function, sphere areas and the ledger of Gamma-expressed constants
// used throughout: the radial kernel constants c1, c2, c3, the second-moment
// constants c1~, c2~, the PDE constant, and the small-scale transform
// constants Cf, Cg, Cf', Cg'.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "rdlab/geometry.hpp"
#include "rdlab/quadrature.hpp"

namespace rdlab {

// Lanczos approximation (g = 7, 9 terms); ~1e-14 relative on x > 0.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: requires x > 0");
    static const double lanczos[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // one recurrence step keeps the approximation in its sweet spot
        return gamma_fn(x + 1.0) / x;
    }
    const double z = x - 1.0;
    double a = lanczos[0];
    for (int i = 1; i < 9; ++i) a += lanczos[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("log_gamma: requires x > 0");
    if (x < 10.0) return std::log(gamma_fn(x));
    static const double lanczos[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double z = x - 1.0;
    double a = lanczos[0];
    for (int i = 1; i < 9; ++i) a += lanczos[i] / (z + i);
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

// Area of the unit sphere S^(k-1) in R^k; k = 1 gives the two-point "sphere".
inline double sphere_area(int k) {
    if (k < 1) throw std::invalid_argument("sphere_area: k >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * k) / gamma_fn(0.5 * k);
}

// Same formula continued to real dimension; this is what the closed forms
// for fractional d actually use.
inline double sphere_area_real(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("sphere_area_real: k > 0");
    return 2.0 * std::pow(M_PI, 0.5 * k) / gamma_fn(0.5 * k);
}

// Volume of the unit ball in R^d (real d).
inline double ball_volume(double d) { return sphere_area_real(d) / d; }

// c(d, beta) = int_{R^d} (1+|y|^2)^(-(d+beta)/2) dy
//            = V(S^{d-1}) * (1/2) * Gamma(d/2) Gamma(beta/2) / Gamma((d+beta)/2).
// Equivalently: int |x-y|^(-(d+beta)) dy over the d-plane equals c(d,beta) * delta^(-beta).
inline double radial_const(double d, double beta) {
    if (!(d > 0.0) || !(beta > 0.0)) throw std::invalid_argument("radial_const: d, beta > 0");
    return sphere_area_real(d) * 0.5 * gamma_fn(0.5 * d) * gamma_fn(0.5 * beta) /
           gamma_fn(0.5 * (d + beta));
}

// int_{R^d} |y|^2 (1+|y|^2)^(-q/2) dy; finite for q > d + 2.
inline double second_moment_const(double d, double q) {
    if (!(q > d + 2.0)) throw std::invalid_argument("second_moment_const: q > d + 2 required");
    return sphere_area_real(d) * 0.5 * gamma_fn(0.5 * (d + 2.0)) * gamma_fn(0.5 * (q - d - 2.0)) /
           gamma_fn(0.5 * q);
}

// Constants governing the small-scale asymptotics of the linearized kernels.
// Cf and Cg vanish identically on the d = 1 slice and on alpha = n - d - 2;
// the primed constants carry the next expansion order.
struct AsymptoticConstants {
    std::optional<double> Cf, Cg, Cf_prime, Cg_prime;
};

inline AsymptoticConstants asymptotic_constants(const GeometryParams& p) {
    AsymptoticConstants out;
    const double n = p.n, d = p.d, a = p.alpha;
    out.Cf = gamma_fn(0.5 * (n - 1.0)) * gamma_fn(0.5 * (a + 2.0)) -
             gamma_fn(0.5 * (n - d)) * gamma_fn(0.5 * (d + a + 1.0));
    if (n > 3.0 && d + a > 1.0)
        out.Cg = gamma_fn(0.5 * (n - 3.0)) * gamma_fn(0.5 * a) -
                 gamma_fn(0.5 * (n - d - 2.0)) * gamma_fn(0.5 * (d + a - 1.0));
    out.Cf_prime = gamma_fn(0.5 * (n - 1.0)) / (2.0 - n) +
                   gamma_fn(0.5 * (n - d)) * gamma_fn(0.5 * (d + a + 1.0)) /
                       ((d + a) * gamma_fn(0.5 * (a + 2.0)));
    if (n > 3.0 && n != 4.0 && d + a > 1.0 && d + a != 2.0)
        out.Cg_prime = gamma_fn(0.5 * (n - 3.0)) / (4.0 - n) -
                       gamma_fn(0.5 * (d + a - 1.0)) * gamma_fn(0.5 * (n - d - 2.0)) /
                           ((2.0 - d - a) * gamma_fn(0.5 * a));
    return out;
}

// All named constants for one parameter triple.  Fields outside their
// validity region stay empty rather than zero.
struct ConstantsLedger {
    GeometryParams params;
    double c1 = 0;       // int (1+|y|^2)^(-(n-2)/2) dy over R^d
    double c2 = 0;       // int (1+|y|^2)^(-(d+alpha)/2) dy over R^d
    double c3 = 0;       // c2^(-(n-d-2)/alpha) * c1
    std::optional<double> c1_tilde; // second moment against the (n-2)-kernel, needs n - d > 4
    std::optional<double> c2_tilde; // second moment against the (d+alpha)-kernel, needs alpha > 2
    double C_pde = 0;    // -(1/2 - 1/(n-d-2))
    std::optional<double> Cf, Cg, Cf_prime, Cg_prime;
    double S1_area = 0;      // area of S^(n-1) in R^n
    double VS_dminus1 = 0;   // area of S^(d-1), real-d continuation
};

inline ConstantsLedger ledger(const GeometryParams& p) {
    ConstantsLedger L;
    L.params = p;
    const double nd2 = p.codim2();
    L.c1 = radial_const(p.d, nd2);
    L.c2 = radial_const(p.d, p.alpha);
    L.c3 = std::pow(L.c2, -nd2 / p.alpha) * L.c1;
    if (p.n - p.d > 4.0) L.c1_tilde = second_moment_const(p.d, p.n - 2.0);
    if (p.alpha > 2.0) L.c2_tilde = second_moment_const(p.d, p.d + p.alpha);
    L.C_pde = -(0.5 - 1.0 / nd2);
    const AsymptoticConstants ac = asymptotic_constants(p);
    L.Cf = ac.Cf;
    L.Cg = ac.Cg;
    L.Cf_prime = ac.Cf_prime;
    L.Cg_prime = ac.Cg_prime;
    L.S1_area = sphere_area(p.n);
    L.VS_dminus1 = sphere_area_real(p.d);
    return L;
}

} // namespace rdlab
