#pragma once

// Certified quadrature for integrals over a d-plane,
//     I(x) = int_{R^d} w(y) |x - y|^{-p} dy,   p > d,
// built as a radial-angular panel rule centered at the projection of the
// evaluation point.  The rule is an explicit atomic measure (nodes and
// weights), so any field evaluated through a frozen rule is an exact
// superposition of kernels: smooth in x, and harmonic when p = n - 2.
//
// Panels are geometric around the evaluation height delta and refined across
// the density's feature region; the radial extent grows until the analytic
// power-law remainder is below the requested tolerance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rdlab/density.hpp"
#include "rdlab/geometry.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/special_constants.hpp"

namespace rdlab {

// A frozen rule: plane nodes with fully baked weights (angular weight times
// radial weight times density times optional extra weight function).
struct PlaneRule {
    int plane_dim = 0;
    int ambient_dim = 0;
    std::vector<double> nodes;   // k * plane_dim coordinates
    std::vector<double> weights; // baked
    double tail_bound = 0;       // absolute bound on the truncated remainder

    std::size_t size() const { return weights.size(); }

    // sum of w_k |x - y_k|^{-p}; x lives in the ambient space, the plane is
    // spanned by the first plane_dim axes.
    double eval_kernel_sum(const Vec& x, double p) const {
        const int d = plane_dim;
        double height2 = 0;
        for (int i = d; i < x.n; ++i) height2 += x[i] * x[i];
        double s = 0;
        const std::size_t k = size();
        for (std::size_t j = 0; j < k; ++j) {
            double r2 = height2;
            for (int i = 0; i < d; ++i) {
                const double t = x[i] - nodes[j * d + i];
                r2 += t * t;
            }
            s += weights[j] * std::pow(r2, -0.5 * p);
        }
        return s;
    }
};

namespace flatdetail {

struct RadialPanel {
    double lo = 0, hi = 0;
    int n_theta = 32; // angular resolution (d >= 2)
};

inline std::vector<RadialPanel> radial_panels(double d, double p, const Vec& x0, double delta,
                                              const Density& w, double rel_tol, double& tail_bound,
                                              double rho_min = 0.0) {
    const double A = std::max({std::abs(w.sup_bound), std::abs(w.inf_bound), 1e-12});
    const double B = w.growth_coeff, s = w.growth_pow;
    if (!(p - d - s > 0)) throw std::invalid_argument("flat rule: divergent tail");
    const double Vs = sphere_area_real(d);
    // envelope magnitude of the full integral, used only to stop the panel ladder
    const double I_floor = A * radial_const(d, p - d) * std::pow(delta, -(p - d));
    auto remainder = [&](double R) {
        double t = A * Vs * std::pow(R, -(p - d)) / (p - d);
        if (B > 0) t += B * Vs * std::pow(R, -(p - d - s)) / (p - d - s);
        return t;
    };
    std::vector<double> breaks;
    breaks.push_back(rho_min);
    double rho = std::max(delta / 64.0, rho_min);
    if (rho > rho_min) breaks.push_back(rho);
    int guard = 0;
    while ((remainder(rho) > rel_tol * I_floor || rho < 4.0 * delta) && ++guard < 400) {
        rho *= 2.0;
        breaks.push_back(rho);
    }
    tail_bound = remainder(rho);

    // refine panels crossing the feature annulus so the density is resolved
    const double Df = std::sqrt(dist2(x0, w.feature_center));
    const double flo = std::max(0.0, Df - w.feature_radius);
    const double fhi = Df + w.feature_radius;
    const double max_w = 0.5 * w.feature_scale;
    std::vector<double> refined;
    refined.push_back(breaks[0]);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (w.feature_radius > 0 && b > flo && a < fhi && (b - a) > max_w) {
            const double lo = std::max(a, flo), hi = std::min(b, fhi);
            if (lo > a) refined.push_back(lo);
            const int parts = static_cast<int>(std::ceil((hi - lo) / max_w));
            for (int q = 1; q <= parts; ++q) refined.push_back(lo + (hi - lo) * q / parts);
            if (b > hi) refined.push_back(b);
        } else {
            refined.push_back(b);
        }
    }
    std::vector<RadialPanel> out;
    for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
        RadialPanel pan;
        pan.lo = refined[i];
        pan.hi = refined[i + 1];
        if (d >= 2) {
            // annulus rules see the kernel off-center, so they carry more
            // angular nodes
            pan.n_theta = (rho_min > 0) ? 64 : 32;
            if (w.feature_radius > 0 && pan.hi > flo && pan.lo < fhi) {
                int nt = static_cast<int>(std::ceil(4.0 * M_PI * pan.hi / w.feature_scale));
                nt = ((nt + 7) / 8) * 8;
                pan.n_theta = std::clamp(nt, 32, 512);
            }
        }
        out.push_back(pan);
    }
    return out;
}

} // namespace flatdetail

// Build the frozen rule for evaluation near a point with plane projection x0
// and height delta.  `extra` multiplies the density inside the integrand
// (the f or h^s weights); it must share the density's envelope metadata.
inline PlaneRule build_plane_rule(int plane_dim, int ambient_dim, double p, const Vec& x0,
                                  double delta, const Density& dens,
                                  const std::function<double(const Vec&)>& extra = nullptr,
                                  double rel_tol = 1e-12, double rho_min = 0.0) {
    if (!(p > plane_dim)) throw std::invalid_argument("build_plane_rule: need p > d");
    if (!(delta > 0)) throw std::invalid_argument("build_plane_rule: need delta > 0");
    PlaneRule rule;
    rule.plane_dim = plane_dim;
    rule.ambient_dim = ambient_dim;
    const auto panels =
        flatdetail::radial_panels(plane_dim, p, x0, delta, dens, rel_tol, rule.tail_bound, rho_min);
    const GaussRule& gr = gauss_rule(12);
    auto push_node = [&](const Vec& y, double wt) {
        const double f = dens(y) * (extra ? extra(y) : 1.0);
        for (int i = 0; i < plane_dim; ++i) rule.nodes.push_back(y[i]);
        rule.weights.push_back(wt * f);
    };
    for (const auto& pan : panels) {
        const double mid = 0.5 * (pan.lo + pan.hi), half = 0.5 * (pan.hi - pan.lo);
        for (int i = 0; i < 12; ++i) {
            const double rho = mid + half * gr.x[i];
            const double wr = gr.w[i] * half * std::pow(rho, plane_dim - 1.0);
            if (plane_dim == 1) {
                Vec yp = x0, ym = x0;
                yp[0] += rho;
                ym[0] -= rho;
                push_node(yp, wr);
                push_node(ym, wr);
            } else if (plane_dim == 2) {
                const int nt = pan.n_theta;
                const double wt = wr * 2.0 * M_PI / nt;
                for (int j = 0; j < nt; ++j) {
                    const double th = 2.0 * M_PI * (j + 0.5) / nt;
                    Vec y = x0;
                    y[0] += rho * std::cos(th);
                    y[1] += rho * std::sin(th);
                    push_node(y, wt);
                }
            } else {
                // product rule on S^2: Gauss in cos(phi) x trapezoid in theta
                const GaussRule& gu = gauss_rule(12);
                const int nt = pan.n_theta;
                for (int iu = 0; iu < 12; ++iu) {
                    const double u = gu.x[iu]; // cos(phi)
                    const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
                    const double wu = gu.w[iu] * 2.0 * M_PI / nt;
                    for (int j = 0; j < nt; ++j) {
                        const double th = 2.0 * M_PI * (j + 0.5) / nt;
                        Vec y = x0;
                        y[0] += rho * su * std::cos(th);
                        y[1] += rho * su * std::sin(th);
                        y[2] += rho * u;
                        push_node(y, wr * wu);
                    }
                }
            }
        }
    }
    return rule;
}

} // namespace rdlab
