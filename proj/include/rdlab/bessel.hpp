#pragma once

// Modified Bessel function of the second kind K_nu for real order, and the
// Bessel-form radial Fourier transform of (1+|y|^2)^(-a/2).
//
// K_nu uses Temme's series for x <= 2 and a Steed continued fraction for
// x > 2, with upward recurrence in the order.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdlab/special_constants.hpp"

namespace rdlab {
namespace detail {

// Coefficients of 1/Gamma(1+t) = sum b_k t^k (Abramowitz & Stegun 6.1.34,
// shifted by one index).
inline constexpr double kInvGammaSeries[17] = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
};

inline double inv_gamma_1p(double t) {
    // valid and fully accurate for |t| <= 0.5
    double s = 0, p = 1;
    for (double b : kInvGammaSeries) {
        s += b * p;
        p *= t;
    }
    return s;
}

// gam1 = [1/Gamma(1-nu) - 1/Gamma(1+nu)] / (2 nu)   (odd part; no cancellation)
// gam2 = [1/Gamma(1-nu) + 1/Gamma(1+nu)] / 2
inline void temme_gammas(double nu, double& gam1, double& gam2) {
    double s1 = 0, s2 = 0, p = 1; // p = nu^(2k)
    const double nu2 = nu * nu;
    for (int k = 0; 2 * k + 1 < 17; ++k) {
        s2 += kInvGammaSeries[2 * k] * p;
        s1 += kInvGammaSeries[2 * k + 1] * p;
        p *= nu2;
    }
    gam1 = -s1;
    gam2 = s2;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x <= 2 (Temme's series).
inline void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
    const double eps = std::numeric_limits<double>::epsilon();
    double gam1, gam2;
    temme_gammas(mu, gam1, gam2);
    const double pimu = M_PI * mu;
    const double fact = (std::abs(pimu) < 1e-12) ? 1.0 : pimu / std::sin(pimu);
    const double dlx = -std::log(0.5 * x);
    const double e = mu * dlx;
    const double fact2 = (std::abs(e) < 1e-12) ? 1.0 : std::sinh(e) / e;
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * dlx);
    double sum = ff;
    const double e2 = std::exp(e); // (2/x)^mu
    // p = (1/2)(2/x)^mu Gamma(1+mu), q = (1/2)(x/2)^mu Gamma(1-mu)
    const double gampl = gam2 - mu * gam1; // = 1/Gamma(1+mu)
    const double gammi = gam2 + mu * gam1; // = 1/Gamma(1-mu)
    double p = 0.5 * e2 / gampl;
    double q = 0.5 / (e2 * gammi);
    double c = 1.0;
    const double d2 = 0.25 * x * x;
    double sum1 = p;
    for (int i = 1; i <= 500; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d2 / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * eps) break;
    }
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// Same pair for x > 2 via Steed's continued fraction CF2.
inline void bessel_k_cf2(double mu, double x, double& kmu, double& kmu1) {
    const double eps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 5000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

} // namespace detail

// K_b(z) for real b (even in b), z > 0.
inline double bessel_k(double b, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("bessel_k: requires z > 0");
    const double nu = std::abs(b);
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl; // in [-1/2, 1/2)
    double kmu, kmu1;
    if (z <= 2.0)
        detail::bessel_k_temme(mu, z, kmu, kmu1);
    else
        detail::bessel_k_cf2(mu, z, kmu, kmu1);
    if (nl == 0) return kmu;
    double kp = kmu, kc = kmu1;
    for (int i = 1; i < nl; ++i) {
        const double knext = 2.0 * (mu + i) / z * kc + kp;
        kp = kc;
        kc = knext;
    }
    return kc;
}

// Small-z expansion of K_b: one term (Gamma(b)/2)(2/z)^b, or two terms adding
// (Gamma(b)/(2(1-b)))(2/z)^(b-2).  The two-term form is meaningless at b = 1.
inline double bessel_k_small_z(double b, double z, int terms) {
    if (!(b > 0.0)) throw std::invalid_argument("bessel_k_small_z: requires b > 0");
    if (terms != 1 && terms != 2) throw std::invalid_argument("bessel_k_small_z: terms in {1,2}");
    if (terms == 2 && b == 1.0)
        throw std::invalid_argument("bessel_k_small_z: two-term expansion undefined at b = 1");
    const double lead = 0.5 * gamma_fn(b) * std::pow(2.0 / z, b);
    if (terms == 1) return lead;
    return lead + gamma_fn(b) / (2.0 * (1.0 - b)) * std::pow(2.0 / z, b - 2.0);
}

// Radial Fourier transform of (1+|y|^2)^(-a/2) on R^d, up to one global
// convention constant depending only on d:
//     bft(a, d, z) = 2^(1-a/2) z^((a-d)/2) K_((a-d)/2)(z) / Gamma(a/2).
// At d = 1 this is the classical cosine-transform formula; general d replaces
// the order (a-1)/2 by (a-d)/2.  z <= 0 falls back to the z -> 0 limit.
inline double bessel_ft(double a, double d, double z) {
    if (!(a > d)) throw std::invalid_argument("bessel_ft: requires a > d");
    const double nu = 0.5 * (a - d);
    if (!(z > 0.0)) return std::pow(2.0, -0.5 * d) * gamma_fn(nu) / gamma_fn(0.5 * a);
    return std::pow(2.0, 1.0 - 0.5 * a) * std::pow(z, nu) * bessel_k(nu, z) / gamma_fn(0.5 * a);
}

// z -> 0 limit of bessel_ft (the integral of the profile, up to the same
// convention constant).
inline double bessel_ft_zero_limit(double a, double d) {
    if (!(a > d)) throw std::invalid_argument("bessel_ft_zero_limit: requires a > d");
    return std::pow(2.0, -0.5 * d) * gamma_fn(0.5 * (a - d)) / gamma_fn(0.5 * a);
}

} // namespace rdlab
