#pragma once

// Non-tangential cones, boundary extrapolation and density recovery: samples
// a potential along a cone over a support point, fits the approach and
// extrapolates the boundary limit, then divides by the radial constant to
// recover the density value.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rdlab/potentials.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/special_constants.hpp"

namespace rdlab {

struct ConeSpec {
    Vec y0;              // support point (ambient)
    Vec normal;          // unit vector transverse to the support at y0
    Vec tangent;         // unit tangential direction for tilted rays
    double eta = 1.0;    // aperture in (0, 1]
    double R = 1.0;      // cone radius
    std::vector<double> radii; // decreasing sampling radii in (0, R)
};

inline std::vector<double> geometric_radii(double r0, int k_lo = 4, int k_hi = 10) {
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(r0 * std::pow(2.0, -k));
    return out;
}

inline ConeSpec default_cone(const DiscreteMeasure& mu, const Vec& y0, double eta,
                             int tangent_axis = 0) {
    ConeSpec spec;
    spec.y0 = y0;
    spec.normal = Vec(mu.n);
    spec.normal[mu.n - 1] = 1.0; // last axis is transverse for plane-based supports
    spec.tangent = unit_axis(mu.n, tangent_axis);
    spec.eta = eta;
    spec.R = 1.0;
    // geometric radii 2^-k, clipped to the measure's resolution floor; coarse
    // node sets get coarser (but at least four) sampling radii
    const double floor = mu.validity_floor() / std::max(eta, 1e-3);
    spec.radii = geometric_radii(1.0);
    std::erase_if(spec.radii, [&](double r) { return r < floor; });
    if (spec.radii.size() < 4) {
        spec.radii.clear();
        for (int k = 0; k <= 10; ++k) {
            const double r = std::pow(2.0, -k);
            if (r >= floor && r <= spec.R) spec.radii.push_back(r);
        }
        if (spec.radii.size() < 4)
            throw std::invalid_argument("default_cone: measure resolution too coarse for a cone");
    }
    return spec;
}

// Points y0 + r v with sin(angle of v to the support) = eta, membership
// re-verified against the actual support; violating directions are rejected.
inline std::vector<EvalPoint> cone_samples(const DiscreteMeasure& mu, const ConeSpec& spec) {
    if (!(spec.eta > 0.0) || spec.eta > 1.0)
        throw std::invalid_argument("cone_samples: aperture in (0, 1]");
    if (spec.radii.size() < 1) throw std::invalid_argument("cone_samples: no radii");
    const double s = spec.eta;
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    std::vector<EvalPoint> out;
    for (double r : spec.radii) {
        if (!(r > 0.0) || r > spec.R) throw std::invalid_argument("cone_samples: radius outside (0, R)");
        Vec v = spec.normal;
        v *= s;
        Vec t = spec.tangent;
        t *= c;
        v += t;
        Vec x = spec.y0;
        Vec step = v;
        step *= r;
        x += step;
        EvalPoint p;
        p.x = x;
        p.delta = distance_to_support(mu, x);
        const double reach = std::sqrt(dist2(x, spec.y0));
        if (p.delta < spec.eta * reach * (1.0 - 1e-9))
            throw std::invalid_argument("cone_samples: direction violates the aperture");
        p.usable = p.delta >= mu.validity_floor();
        out.push_back(p);
    }
    return out;
}

struct NtLimit {
    double limit = 0;
    double slope = 0;
    double fit_residual = 0;
    bool low_confidence = false;
};

// Least-squares fit F(r) = L + a r + b r^2 over the smallest radii.
inline NtLimit nt_extrapolate(const std::vector<std::pair<double, double>>& values) {
    if (values.size() < 4) throw std::invalid_argument("nt_extrapolate: need at least 4 radii");
    std::vector<double> rs, fs;
    for (auto& [r, f] : values) {
        rs.push_back(r);
        fs.push_back(f);
    }
    auto coef = lsq_fit(rs, fs,
                        {[](double) { return 1.0; }, [](double r) { return r; },
                         [](double r) { return r * r; }});
    NtLimit out;
    out.limit = coef[0];
    out.slope = coef[1];
    double ss = 0, scale = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double fit = coef[0] + coef[1] * rs[i] + coef[2] * rs[i] * rs[i];
        ss += (fs[i] - fit) * (fs[i] - fit);
        scale = std::max(scale, std::abs(fs[i]));
    }
    out.fit_residual = std::sqrt(ss / rs.size());
    out.low_confidence = out.fit_residual > 1e-2 * (scale + 1e-300);
    return out;
}

// C(d, beta) = V(S^(d-1)) (1/2) Gamma(d/2) Gamma(beta/2) / Gamma((d+beta)/2);
// at beta = n-d-2 this is the Newton-kernel boundary constant.
inline double nt_constant(double d, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("nt_constant: beta > 0");
    return radial_const(d, beta);
}

struct DensityRecovery {
    double recovered = 0;
    double reference = 0;
    double rel_err = 0;
    double fit_residual = 0;
    bool low_confidence = false;
};

// Extrapolates delta(x)^beta * int w |x-y|^(-(d+beta)) dmu along the cone and
// divides by nt_constant; compares with the density at y0.
inline DensityRecovery density_recovery(const DiscreteMeasure& mu, const GeometryParams& params,
                                        const Vec& y0, double beta, const ConeSpec& spec) {
    if (mu.kind != SupportKind::FlatPlane && mu.kind != SupportKind::Graph)
        throw std::invalid_argument("density_recovery: flat or graph measures only");
    (void)params;
    auto samples = cone_samples(mu, spec);
    std::vector<std::pair<double, double>> values;
    for (const EvalPoint& p : samples) {
        if (!p.usable) continue;
        auto v = riesz_potential(mu, riesz_request(mu.d + beta), p.x);
        values.emplace_back(std::sqrt(dist2(p.x, spec.y0)),
                            std::pow(p.delta, beta) * v.value);
    }
    NtLimit fit = nt_extrapolate(values);
    DensityRecovery out;
    out.recovered = fit.limit / nt_constant(mu.d, beta);
    Vec y0_plane(static_cast<int>(mu.d));
    for (int i = 0; i < y0_plane.n; ++i) y0_plane[i] = y0[i];
    // reference density of mu with respect to H^d on the support
    double base;
    if (mu.kind == SupportKind::Graph) {
        const int di = static_cast<int>(mu.d);
        const double fd = mu.resolution;
        double G[3][3] = {};
        std::vector<Vec> dpsi(di);
        for (int i = 0; i < di; ++i) {
            Vec yp = y0_plane, ym = y0_plane;
            yp[i] += fd;
            ym[i] -= fd;
            const Vec a = mu.graph_psi(yp), b = mu.graph_psi(ym);
            Vec der(a.n);
            for (int j = 0; j < a.n; ++j) der[j] = (a[j] - b[j]) / (2.0 * fd);
            dpsi[i] = der;
        }
        for (int i = 0; i < di; ++i)
            for (int j = 0; j < di; ++j) G[i][j] = (i == j ? 1.0 : 0.0) + dot(dpsi[i], dpsi[j]);
        double det = 1;
        if (di == 1) det = G[0][0];
        else if (di == 2) det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
        base = (1.0 + mu.density(y0_plane)) / std::sqrt(det);
    } else {
        base = mu.density(y0_plane);
    }
    out.reference = base;
    out.rel_err = std::abs(out.recovered - out.reference) / std::abs(out.reference);
    out.fit_residual = fit.fit_residual;
    out.low_confidence = fit.low_confidence;
    return out;
}

} // namespace rdlab
