#pragma once

// Riesz-type potentials against a DiscreteMeasure: the regularized distance,
// the Newton potential, the distributional-Laplacian Monte Carlo check and
// the distance-equivalence scan.
//
// Flat measures evaluate through a certified plane rule adapted to the
// evaluation point; point clouds and graphs are plain node sums, graphs with
// an asymptotic-plane annulus for the truncated far field.  A frozen
// PotentialField reuses one rule for a whole finite-difference cluster, so
// differentiated fields are exact kernel superpositions.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rdlab/flatquad.hpp"
#include "rdlab/measures.hpp"
#include "rdlab/rng.hpp"
#include "rdlab/special_constants.hpp"

namespace rdlab {

struct PotentialRequest {
    double p = 0;          // kernel exponent |x-y|^(-p), requires p > d
    Density weight;        // extra weight on the parameterization; empty = 1
    bool has_weight = false;
    double rel_tol = 1e-12;
};

inline PotentialRequest riesz_request(double p) {
    PotentialRequest r;
    r.p = p;
    return r;
}

inline PotentialRequest riesz_request(double p, const Density& w) {
    PotentialRequest r;
    r.p = p;
    r.weight = w;
    r.has_weight = true;
    return r;
}

// Frozen evaluator for x near a chosen center.
class PotentialField {
public:
    PotentialField(const DiscreteMeasure& mu, const PotentialRequest& req, const Vec& center)
        : mu_(&mu), p_(req.p) {
        if (!(req.p > mu.d)) throw std::invalid_argument("potential: requires p > d");
        const int di = static_cast<int>(mu.d);
        Vec x0(di);
        for (int i = 0; i < di && i < center.n; ++i) x0[i] = center[i];
        const double delta = distance_to_support(mu, center);
        if (!(delta > 0)) throw std::invalid_argument("potential: center on the support");
        if (mu.kind == SupportKind::FlatPlane) {
            const Density integrand =
                req.has_weight ? density_product(mu.density, req.weight) : mu.density;
            rule_ = build_plane_rule(di, mu.n, req.p, x0, delta, integrand, nullptr, req.rel_tol);
            use_rule_ = true;
        } else {
            node_w_ = mu.weights;
            if (req.has_weight) {
                Vec y(di);
                for (std::size_t k = 0; k < mu.node_count(); ++k) {
                    for (int i = 0; i < di; ++i) y[i] = mu.node_coords[k * mu.n + i];
                    node_w_[k] *= req.weight(y);
                }
            }
            if (mu.kind == SupportKind::Graph && mu.tail == TailModel::FlatPlane &&
                x0.norm() < 0.75 * mu.truncation_radius) {
                // truncated far field, reused from the asymptotic plane.  The
                // node grid covers the plane ball |y| <= T, so the tail rule
                // is centered at the origin with rho_min = T: no overlap, no
                // gap.  Only meaningful well inside the truncation.
                double wlim = mu.tail_density_limit;
                if (req.has_weight) wlim *= req.weight.limit_at_infinity;
                if (wlim != 0.0) {
                    Density tail_dens = density_const(wlim, di);
                    rule_ = build_plane_rule(di, mu.n, req.p, Vec(di),
                                             std::max(delta, 0.25 * mu.truncation_radius),
                                             tail_dens, nullptr, req.rel_tol,
                                             mu.truncation_radius);
                    use_rule_ = true;
                }
            }
        }
    }

    double value(const Vec& x) const {
        double s = 0;
        if (!node_w_.empty()) {
            const std::size_t k = mu_->node_count();
            const int n = mu_->n;
            for (std::size_t j = 0; j < k; ++j) {
                double r2 = 0;
                for (int i = 0; i < n; ++i) {
                    const double t = x[i] - mu_->node_coords[j * n + i];
                    r2 += t * t;
                }
                s += node_w_[j] * std::pow(r2, -0.5 * p_);
            }
        }
        if (use_rule_) s += rule_.eval_kernel_sum(x, p_);
        return s;
    }

    double tail_bound() const { return use_rule_ ? rule_.tail_bound : 0.0; }

private:
    const DiscreteMeasure* mu_;
    double p_ = 0;
    bool use_rule_ = false;
    PlaneRule rule_;
    std::vector<double> node_w_;
};

struct PotentialValue {
    double value = 0;
    double delta = 0;
    double tail_bound = 0;
    bool usable = true;
};

inline PotentialValue riesz_potential(const DiscreteMeasure& mu, const PotentialRequest& req,
                                      const Vec& x) {
    PotentialValue out;
    out.delta = distance_to_support(mu, x);
    if (!(out.delta > 0)) throw std::invalid_argument("riesz_potential: x on the support");
    out.usable = out.delta >= mu.validity_floor();
    PotentialField f(mu, req, x);
    out.value = f.value(x);
    out.tail_bound = f.tail_bound();
    return out;
}

// D(x) = (int |x-y|^(-d-alpha) dmu)^(-1/alpha)
inline PotentialValue smooth_distance(const DiscreteMeasure& mu, const GeometryParams& params,
                                      const Vec& x) {
    PotentialValue v = riesz_potential(mu, riesz_request(mu.d + params.alpha), x);
    v.value = std::pow(v.value, -1.0 / params.alpha);
    return v;
}

// u_f(x) = int f(y) |x-y|^(2-n) dsigma(y)
inline PotentialValue newton_potential(const DiscreteMeasure& mu, const Density& f,
                                       const GeometryParams& params, const Vec& x) {
    return riesz_potential(mu, riesz_request(params.n - 2.0, f), x);
}

// Closed forms on the constant-density plane.
inline double flat_distance_closed_form(const GeometryParams& p, double density_value,
                                        double delta) {
    return std::pow(density_value * radial_const(p.d, p.alpha), -1.0 / p.alpha) * delta;
}

inline double flat_newton_closed_form(const GeometryParams& p, double density_value,
                                      double delta) {
    return density_value * radial_const(p.d, p.codim2()) * std::pow(delta, -p.codim2());
}

// C^3 radial test bump (1 - |x-c|^2/R^2)^4 with closed-form Laplacian.
struct RadialBump {
    Vec center;
    double R = 1.0;

    double operator()(const Vec& x) const {
        const double s = dist2(x, center) / (R * R);
        if (s >= 1.0) return 0.0;
        const double t = 1.0 - s;
        return t * t * t * t;
    }
    double laplacian(const Vec& x) const {
        const double s = dist2(x, center) / (R * R);
        if (s >= 1.0) return 0.0;
        const double t = 1.0 - s;
        return -8.0 * x.n * t * t * t / (R * R) + 48.0 * s * t * t / (R * R);
    }
};

struct DistributionalCheck {
    double lhs = 0;       // MC estimate of int u_f * lap(phi) dx
    double rhs = 0;       // -|S_1| (n-2) int phi f dmu
    double rel_err = 0;
    double mc_std_error = 0;
    bool enough_samples = true;
};

// Monte Carlo check of the distributional identity for the Newton potential
// over a constant-density flat measure with constant weight f.
inline DistributionalCheck distributional_laplacian_check(const DiscreteMeasure& mu,
                                                          const GeometryParams& params,
                                                          double f_const, const RadialBump& phi,
                                                          long mc_samples,
                                                          std::uint64_t seed = 1) {
    if (mu.kind != SupportKind::FlatPlane || !mu.density.is_constant())
        throw std::invalid_argument("distributional check: constant-density flat measure only");
    if (params.n > 5)
        throw std::invalid_argument("distributional check: n <= 5 for tractable Monte Carlo");
    const int n = params.n;
    const int di = static_cast<int>(mu.d);
    DistributionalCheck out;

    // Radial profile of u_f in delta, tabulated from the certified rule and
    // interpolated in log-log (the profile is an exact power law).
    const int table_size = 48;
    const double dmin = 1e-4 * phi.R, dmax = 4.0 * (phi.center.norm() + phi.R) + 1.0;
    std::vector<double> logd(table_size), logu(table_size);
    for (int i = 0; i < table_size; ++i) {
        const double dl = dmin * std::pow(dmax / dmin, i / (table_size - 1.0));
        Vec x(n);
        x[n - 1] = dl;
        const double u = riesz_potential(mu, riesz_request(n - 2.0), x).value;
        logd[i] = std::log(dl);
        logu[i] = std::log(u);
    }
    auto u_profile = [&](double delta) {
        const double ld = std::log(delta);
        int i = static_cast<int>((ld - logd[0]) / (logd[1] - logd[0]));
        i = std::max(0, std::min(table_size - 2, i));
        const double t = (ld - logd[i]) / (logd[i + 1] - logd[i]);
        return f_const * std::exp(logu[i] * (1.0 - t) + logu[i + 1] * t);
    };

    // Importance sampling in the normal coordinates: the integrand carries a
    // delta^(-(n-d-2)) factor, so the normal radius is drawn with a density
    // tilted by the same power and the weight cancels the near-plane blowup.
    Rng rng(seed, 11);
    const int codim = n - di;
    if (codim > 4) throw std::invalid_argument("distributional check: codimension too large");
    const double q_pow = codim - params.codim2(); // r ~ R_w u^(1/q_pow)
    if (!(q_pow > 0)) throw std::invalid_argument("distributional check: bad tilt");
    // normal reach: the bump may sit off the plane
    double coff2 = 0;
    for (int i = di; i < n; ++i) coff2 += phi.center[i] * phi.center[i];
    const double R_w = std::sqrt(coff2) + phi.R;
    double acc = 0, acc2 = 0;
    // tangential block is uniform; normal block is radial with the tilt
    double tan_vol = 1.0;
    for (int i = 0; i < di; ++i) tan_vol *= 2.0 * phi.R;
    const double sphere = sphere_area(codim);
    for (long s = 0; s < mc_samples; ++s) {
        Vec x(n);
        for (int i = 0; i < di; ++i) x[i] = phi.center[i] + rng.uniform(-phi.R, phi.R);
        // radius with density q_pow r^(q_pow-1)/R_w^q_pow on [0, R_w]
        const double r = R_w * std::pow(rng.next_double(), 1.0 / q_pow);
        // direction uniform on S^(codim-1) by normalized Gaussians
        double g[4], norm2 = 0;
        for (int i = 0; i < codim; ++i) {
            const double u1 = std::max(rng.next_double(), 1e-300);
            const double u2 = rng.next_double();
            g[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            norm2 += g[i] * g[i];
        }
        const double inv = 1.0 / std::sqrt(std::max(norm2, 1e-300));
        for (int i = 0; i < codim; ++i) x[di + i] = r * g[i] * inv;
        const double lap = phi.laplacian(x);
        double term = 0;
        if (lap != 0.0 && r > dmin) {
            // Lebesgue density of the normal block under this sampling is
            // q_pow r^(q_pow-1) / (R_w^q_pow |S^(codim-1)| r^(codim-1))
            const double weight =
                sphere * std::pow(r, codim - q_pow) * std::pow(R_w, q_pow) / q_pow;
            term = u_profile(r) * lap * weight;
        }
        acc += term;
        acc2 += term * term;
    }
    const double mean = acc / mc_samples;
    const double var = std::max(0.0, acc2 / mc_samples - mean * mean);
    out.lhs = tan_vol * mean;
    out.mc_std_error = tan_vol * std::sqrt(var / mc_samples);

    // right-hand side by certified radial quadrature over the plane
    const double c = mu.density(Vec(di)); // constant density value
    Vec cproj(di);
    for (int i = 0; i < di; ++i) cproj[i] = phi.center[i];
    double off2 = 0;
    for (int i = di; i < n; ++i) off2 += phi.center[i] * phi.center[i];
    double plane_int = 0;
    if (off2 < phi.R * phi.R) {
        const double span = std::sqrt(phi.R * phi.R - off2);
        auto g = [&](double rho) {
            const double s = (rho * rho + off2) / (phi.R * phi.R);
            const double t = 1.0 - s;
            return std::pow(rho, di - 1.0) * t * t * t * t;
        };
        plane_int = sphere_area_real(di) *
                    gauss_panels(g, {0.0, 0.25 * span, 0.5 * span, 0.75 * span, span}, 24);
    }
    out.rhs = -sphere_area(n) * (n - 2.0) * f_const * c * plane_int;

    const double scale = std::max(std::abs(out.rhs), std::abs(out.lhs));
    out.rel_err = (scale > 0) ? std::abs(out.lhs - out.rhs) / scale : 0.0;
    out.enough_samples = out.mc_std_error < 0.05 * std::max(scale, 1e-300);
    return out;
}

struct RatioBand {
    double ratio_min = 0;
    double ratio_max = 0;
};

// min/max of D(x)/delta(x) over sample points.
inline RatioBand equivalence_dist_check(const DiscreteMeasure& mu, const GeometryParams& params,
                                        const std::vector<Vec>& points) {
    RatioBand band;
    band.ratio_min = std::numeric_limits<double>::infinity();
    for (const Vec& x : points) {
        const PotentialValue v = smooth_distance(mu, params, x);
        const double r = v.value / v.delta;
        band.ratio_min = std::min(band.ratio_min, r);
        band.ratio_max = std::max(band.ratio_max, r);
    }
    return band;
}

} // namespace rdlab
