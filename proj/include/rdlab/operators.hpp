#pragma once

// Finite-difference machinery and the degenerate operator L = -div(D^(g-1) grad .)
// applied to the regularized distance D itself (g-1 = -n+d+1).  The algebraic
// backbone: for gamma = -n+d+2 and any smooth positive D,
//     lap(D^gamma) = gamma D^(gamma-1) lap(D) + gamma (gamma-1) D^(gamma-2) |grad D|^2
//                  = -gamma * (L D),
// so the normalized residual of lap(D^gamma) + gamma L D measures pure
// discretization error, while at the magic exponent alpha = n-d-2 the field
// D^gamma itself is a superposition of Newtonian kernels and lap(D^gamma) -> 0.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rdlab/potentials.hpp"

namespace rdlab {

struct FDStencil {
    double h = 0;             // 0 = auto: delta/20 at each point
    int order = 2;            // 2 or 4
    int richardson_levels = 2; // extrapolation levels; 0 = raw central difference
};

struct FDValue {
    double value = 0;        // Richardson-extrapolated (raw when levels = 0)
    double err_estimate = 0; // magnitude of the last extrapolation correction
    double order_estimate = 0; // observed order of the raw ladder
    std::vector<double> raw; // central differences at h, h/2, ...
};

using ScalarField = std::function<double(const Vec&)>;

namespace fddetail {

inline double laplacian_once(const ScalarField& f, const Vec& x, double h, int order) {
    const int n = x.n;
    double s = 0;
    const double f0 = f(x);
    if (order == 2) {
        for (int i = 0; i < n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            s += (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
        }
    } else if (order == 4) {
        for (int i = 0; i < n; ++i) {
            Vec xp = x, xm = x, xpp = x, xmm = x;
            xp[i] += h;
            xm[i] -= h;
            xpp[i] += 2.0 * h;
            xmm[i] -= 2.0 * h;
            s += (-f(xpp) + 16.0 * f(xp) - 30.0 * f0 + 16.0 * f(xm) - f(xmm)) / (12.0 * h * h);
        }
    } else {
        throw std::invalid_argument("fd_laplacian: order must be 2 or 4");
    }
    return s;
}

// Richardson table over a step-halving ladder with base order p0.
inline FDValue richardson_extrapolate(const std::vector<double>& raw, int p0) {
    FDValue out;
    out.raw = raw;
    std::vector<double> prev = raw, cur;
    double last_corr = 0;
    for (std::size_t k = 1; k < raw.size(); ++k) {
        cur.assign(prev.size() - 1, 0.0);
        const double f = std::pow(2.0, p0 + 2.0 * (k - 1)); // error orders p0, p0+2, ...
        for (std::size_t l = 0; l < cur.size(); ++l) cur[l] = (f * prev[l + 1] - prev[l]) / (f - 1.0);
        last_corr = std::abs(cur.back() - prev.back());
        prev = cur;
    }
    out.value = prev.back();
    out.err_estimate = (raw.size() > 1) ? last_corr : std::abs(prev.back()) * 1e-6;
    if (raw.size() >= 3) {
        const double d1 = std::abs(raw[raw.size() - 2] - raw[raw.size() - 3]);
        const double d2 = std::abs(raw[raw.size() - 1] - raw[raw.size() - 2]);
        if (d1 > 0 && d2 > 0) out.order_estimate = std::log2(d1 / d2);
    }
    return out;
}

} // namespace fddetail

// Central-difference Laplacian with Richardson extrapolation over a
// step-halving ladder; the whole stencil must stay inside the validity zone,
// so h <= delta/10 is enforced.
inline FDValue fd_laplacian(const ScalarField& f, const Vec& x, double delta,
                            const FDStencil& st = {}) {
    double h = (st.h > 0) ? st.h : delta / 20.0;
    if (h > delta / 10.0)
        throw std::invalid_argument("fd_laplacian: stencil step exceeds delta/10");
    std::vector<double> raw;
    for (int l = 0; l <= st.richardson_levels; ++l)
        raw.push_back(fddetail::laplacian_once(f, x, h / (1 << l), st.order));
    return fddetail::richardson_extrapolate(raw, st.order);
}

inline Vec fd_gradient(const ScalarField& f, const Vec& x, double delta, const FDStencil& st = {}) {
    double h = (st.h > 0) ? st.h : delta / 20.0;
    if (h > delta / 10.0)
        throw std::invalid_argument("fd_gradient: stencil step exceeds delta/10");
    Vec g(x.n);
    for (int i = 0; i < x.n; ++i) {
        std::vector<double> raw;
        for (int l = 0; l <= st.richardson_levels; ++l) {
            const double hh = h / (1 << l);
            Vec xp = x, xm = x;
            xp[i] += hh;
            xm[i] -= hh;
            raw.push_back((f(xp) - f(xm)) / (2.0 * hh));
        }
        g[i] = fddetail::richardson_extrapolate(raw, 2).value;
    }
    return g;
}

// Frozen fields for one evaluation cluster: V = int |x-y|^(-(d+alpha)) dmu,
// D = V^(-1/alpha), Dgamma = V^(-gamma/alpha).
struct DistanceFields {
    GeometryParams params;
    std::shared_ptr<PotentialField> pot;

    DistanceFields(const DiscreteMeasure& mu, const GeometryParams& p, const Vec& center)
        : params(p),
          pot(std::make_shared<PotentialField>(mu, riesz_request(mu.d + p.alpha), center)) {}

    ScalarField D() const {
        auto f = pot;
        const double a = params.alpha;
        return [f, a](const Vec& x) { return std::pow(f->value(x), -1.0 / a); };
    }
    ScalarField D_gamma() const {
        auto f = pot;
        const double e = -params.gamma() / params.alpha;
        return [f, e](const Vec& x) { return std::pow(f->value(x), e); };
    }
};

struct OperatorValue {
    double L_D = 0;          // value of L applied to D
    double lap_D_gamma = 0;  // FD Laplacian of D^gamma
    double D = 0;
    double grad_norm2 = 0;
    double local_scale = 0;  // |D^(gamma-2)| |grad D|^2
    double err_estimate = 0;
    double order_estimate = 0;
    double identity_residual = 0;
};

// L D = -D^(gamma-1) [ lap D + (gamma-1) D^(-1) |grad D|^2 ], gradients and
// Laplacian by finite differences on the frozen field.
inline OperatorValue apply_L(const DiscreteMeasure& mu, const GeometryParams& params, const Vec& x,
                             const FDStencil& st = {}) {
    const double delta = distance_to_support(mu, x);
    if (!(delta >= mu.validity_floor()))
        throw std::invalid_argument("apply_L: point inside validity margin");
    DistanceFields fields(mu, params, x);
    const ScalarField D = fields.D();
    const double g = params.gamma();
    OperatorValue out;
    out.D = D(x);
    const Vec grad = fd_gradient(D, x, delta, st);
    out.grad_norm2 = grad.norm2();
    const FDValue lap = fd_laplacian(D, x, delta, st);
    out.L_D = -std::pow(out.D, g - 1.0) * (lap.value + (g - 1.0) * out.grad_norm2 / out.D);
    out.local_scale = std::pow(out.D, g - 2.0) * out.grad_norm2;
    const FDValue lg = fd_laplacian(fields.D_gamma(), x, delta, st);
    out.lap_D_gamma = lg.value;
    out.err_estimate = lg.err_estimate + std::abs(g) * std::pow(out.D, g - 1.0) * lap.err_estimate;
    out.order_estimate = lg.order_estimate;
    const double floor = 1e-12 * std::abs(g * (g - 1.0)) * out.local_scale;
    out.identity_residual = std::abs(out.lap_D_gamma + g * out.L_D) /
                            (std::abs(out.lap_D_gamma) + std::abs(g * out.L_D) + floor);
    return out;
}

// Direct divergence-form discretization -div(D^(gamma-1) grad D) with a
// staggered conservative flux; independent cross-check for apply_L.
inline double apply_L_divergence_form(const DiscreteMeasure& mu, const GeometryParams& params,
                                      const Vec& x, const FDStencil& st = {}) {
    const double delta = distance_to_support(mu, x);
    DistanceFields fields(mu, params, x);
    const ScalarField D = fields.D();
    double h = (st.h > 0) ? st.h : delta / 20.0;
    if (h > delta / 10.0)
        throw std::invalid_argument("apply_L_divergence_form: stencil step exceeds delta/10");
    const double g1 = params.gamma() - 1.0;
    const double f0 = D(x);
    double div = 0;
    for (int i = 0; i < x.n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fp = D(xp), fm = D(xm);
        const double flux_p = std::pow(0.5 * (fp + f0), g1) * (fp - f0) / h;
        const double flux_m = std::pow(0.5 * (f0 + fm), g1) * (f0 - fm) / h;
        div += (flux_p - flux_m) / h;
    }
    return -div;
}

// Max normalized residual of lap(D^gamma) + gamma L D over sample points.
inline double identity_check(const DiscreteMeasure& mu, const GeometryParams& params,
                             const std::vector<Vec>& points, const FDStencil& st = {}) {
    double worst = 0;
    for (const Vec& x : points) {
        const OperatorValue v = apply_L(mu, params, x, st);
        worst = std::max(worst, v.identity_residual);
    }
    return worst;
}

// Ellipticity band: delta^(n-d-1) D^(-n+d+1) = (delta/D)^(n-d-1).
inline RatioBand ellipticity_check(const DiscreteMeasure& mu, const GeometryParams& params,
                                   const std::vector<Vec>& points) {
    RatioBand band;
    band.ratio_min = std::numeric_limits<double>::infinity();
    for (const Vec& x : points) {
        const PotentialValue v = smooth_distance(mu, params, x);
        const double r = std::pow(v.delta / v.value, params.n - params.d - 1.0);
        band.ratio_min = std::min(band.ratio_min, r);
        band.ratio_max = std::max(band.ratio_max, r);
    }
    return band;
}

struct RefinementStudy {
    std::vector<double> residuals; // |lap D^gamma| per level, normalized by local scale
    double observed_order = 0;     // from the last two halvings
    double final_ratio = 0;        // residuals.back()
};

// Residual decay of |lap(D^gamma)| under step halving, normalized by the
// local scale D^(gamma-2)|grad D|^2; the magic-exponent anomaly shows up as
// clean second-order decay to zero.
inline RefinementStudy magic_refinement_study(const DiscreteMeasure& mu,
                                              const GeometryParams& params, const Vec& x,
                                              int levels = 4) {
    const double delta = distance_to_support(mu, x);
    DistanceFields fields(mu, params, x);
    const ScalarField Dg = fields.D_gamma();
    const ScalarField D = fields.D();
    const double g = params.gamma();
    FDStencil st;
    st.richardson_levels = 1;
    const Vec grad = fd_gradient(D, x, delta);
    const double scale =
        std::abs(g * (g - 1.0)) * std::pow(D(x), g - 2.0) * grad.norm2();
    RefinementStudy out;
    for (int l = 0; l < levels; ++l) {
        const double h = delta / (20.0 * (1 << l));
        out.residuals.push_back(std::abs(fddetail::laplacian_once(Dg, x, h, 2)) / scale);
    }
    const std::size_t m = out.residuals.size();
    if (m >= 2 && out.residuals[m - 1] > 0)
        out.observed_order = std::log2(out.residuals[m - 2] / out.residuals[m - 1]);
    out.final_ratio = out.residuals.back();
    return out;
}

} // namespace rdlab
