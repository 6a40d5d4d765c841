#pragma once

// Panel-based Gauss-Legendre quadrature, radial integrals with certified
// power-law tails, and an accelerated oscillatory integrator.  Everything is
// deterministic: node layouts depend only on the arguments.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rdlab {

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Nodes by Newton iteration on the Legendre recurrence; cached per order.
inline const GaussRule& gauss_rule(int q) {
    static thread_local std::vector<GaussRule> cache(65);
    if (q < 2 || q > 64) throw std::invalid_argument("gauss_rule: order out of range");
    GaussRule& r = cache[static_cast<std::size_t>(q)];
    if (!r.x.empty()) return r;
    r.x.resize(q);
    r.w.resize(q);
    const int m = (q + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < q; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = q * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[q - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[q - 1 - i] = r.w[i];
    }
    return r;
}

// Integral over [a, b] with a single Gauss panel.
template <class F>
double gauss_panel(F&& f, double a, double b, int q = 16) {
    const GaussRule& r = gauss_rule(q);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < q; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

// Composite rule over explicit breakpoints.
template <class F>
double gauss_panels(F&& f, const std::vector<double>& breaks, int q = 16) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += gauss_panel(f, breaks[i], breaks[i + 1], q);
    return s;
}

// Geometric breakpoints {a, a*g, ...} up to b (a > 0, g > 1).
inline std::vector<double> geometric_breaks(double a, double b, double g = 2.0) {
    std::vector<double> v;
    v.push_back(a);
    double t = a;
    while (t < b) {
        t = std::min(t * g, b);
        v.push_back(t);
    }
    return v;
}

// Tail of int_R^inf rho^q (1+rho^2)^(-m/2) drho by a three-term expansion in
// rho^(-2); relative truncation is O(R^-6).  Requires m - q > 1.
inline double radial_tail(double R, double q, double m) {
    if (!(m - q > 1.0)) throw std::invalid_argument("radial_tail: divergent tail");
    const double e0 = m - q - 1.0;
    const double t0 = std::pow(R, -e0) / e0;
    const double t1 = -(m / 2.0) * std::pow(R, -(e0 + 2.0)) / (e0 + 2.0);
    const double t2 = (m * (m + 2.0) / 8.0) * std::pow(R, -(e0 + 4.0)) / (e0 + 4.0);
    return t0 + t1 + t2;
}

// int_0^inf rho^q (1+rho^2)^(-m/2) drho, with analytic expansions at both
// ends: the head handles the rho^q endpoint singularity for q in (-1, 0),
// the tail the algebraic decay.  Workhorse oracle for every Gamma-expressed
// constant.
inline double radial_power_integral(double q, double m, double R = 400.0) {
    if (!(m - q > 1.0)) throw std::invalid_argument("radial_power_integral: divergent");
    if (!(q > -1.0)) throw std::invalid_argument("radial_power_integral: divergent at 0");
    auto f = [&](double r) { return std::pow(r, q) * std::pow(1.0 + r * r, -0.5 * m); };
    const double eps = 1e-6;
    // int_0^eps rho^q (1 - (m/2) rho^2 + O(rho^4)) drho
    const double head = std::pow(eps, q + 1.0) / (q + 1.0) -
                        0.5 * m * std::pow(eps, q + 3.0) / (q + 3.0);
    std::vector<double> breaks = geometric_breaks(eps, R, 2.0);
    return head + gauss_panels(f, breaks, 24) + radial_tail(R, q, m);
}

// Repeated averaging of partial sums; the standard trick for alternating
// series coming from half-period splits of oscillatory integrals.
inline double euler_accelerate(const std::vector<double>& terms) {
    std::vector<double> s(terms.size());
    double acc = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += terms[i];
        s[i] = acc;
    }
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
    }
    return s.front();
}

// int_0^inf f(t) cos(w t + phase) dt for smooth f with algebraic decay.
// Head panels up to the first zero, then half-period panels accelerated.
template <class F>
double oscillatory_integral(F&& f, double w, double phase, int periods = 96, int q = 16) {
    if (!(w > 0)) throw std::invalid_argument("oscillatory_integral: need w > 0");
    auto g = [&](double t) { return f(t) * std::cos(w * t + phase); };
    // first stationary-free segment [0, t0] where w t0 + phase = pi/2
    double t0 = (0.5 * M_PI - phase) / w;
    double head = 0;
    if (t0 > 0) {
        head = gauss_panels(g, geometric_breaks(std::min(t0, 1e-3 / w), t0, 2.0), q);
        head += gauss_panel(g, 0.0, std::min(t0, 1e-3 / w), q);
    } else {
        t0 = 0;
    }
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(periods) * 2);
    const double half = M_PI / w;
    for (int k = 0; k < 2 * periods; ++k)
        terms.push_back(gauss_panel(g, t0 + k * half, t0 + (k + 1) * half, q));
    return head + euler_accelerate(terms);
}

// Least-squares fit of y ~ sum_j a_j * basis_j(x) via normal equations with
// column scaling; fine for the tiny systems used here.
inline std::vector<double> lsq_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                                   const std::vector<std::function<double(double)>>& basis) {
    const std::size_t m = basis.size(), npts = xs.size();
    if (npts < m) throw std::invalid_argument("lsq_fit: underdetermined");
    std::vector<std::vector<double>> A(npts, std::vector<double>(m));
    std::vector<double> scale(m, 0.0);
    for (std::size_t i = 0; i < npts; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            A[i][j] = basis[j](xs[i]);
            scale[j] = std::max(scale[j], std::abs(A[i][j]));
        }
    for (auto& s : scale)
        if (s == 0) s = 1;
    std::vector<std::vector<double>> G(m, std::vector<double>(m, 0.0));
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < npts; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double aij = A[i][j] / scale[j];
            rhs[j] += aij * ys[i];
            for (std::size_t k = 0; k <= j; ++k) G[j][k] += aij * A[i][k] / scale[k];
        }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) G[j][k] = G[k][j];
    // Cholesky
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < j; ++k)
            for (std::size_t i = j; i < m; ++i) G[i][j] -= G[i][k] * G[j][k];
        if (!(G[j][j] > 0)) throw std::runtime_error("lsq_fit: singular normal equations");
        const double r = std::sqrt(G[j][j]);
        for (std::size_t i = j; i < m; ++i) G[i][j] /= r;
    }
    // solve G G^T a = rhs
    std::vector<double> y(m), a(m);
    for (std::size_t i = 0; i < m; ++i) {
        double t = rhs[i];
        for (std::size_t k = 0; k < i; ++k) t -= G[i][k] * y[k];
        y[i] = t / G[i][i];
    }
    for (std::size_t ii = m; ii-- > 0;) {
        double t = y[ii];
        for (std::size_t k = ii + 1; k < m; ++k) t -= G[k][ii] * a[k];
        a[ii] = t / G[ii][ii];
    }
    for (std::size_t j = 0; j < m; ++j) a[j] /= scale[j];
    return a;
}

} // namespace rdlab
