#pragma once

// Ahlfors-regular model measures: flat planes, Lipschitz graphs, self-similar
// Cantor clouds and generic point clouds.  Measures are immutable once built;
// all queries are read-only.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdlab/density.hpp"
#include "rdlab/geometry.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

enum class SupportKind { FlatPlane, Graph, Cantor, PointCloud };

enum class TailModel { None, FlatPlane };

struct DiscreteMeasure {
    SupportKind kind = SupportKind::PointCloud;
    int n = 0;    // ambient dimension
    double d = 0; // support dimension
    std::vector<double> node_coords; // flattened, node k at [k*n, (k+1)*n)
    std::vector<double> weights;
    Density density;         // density handle on the parameter plane (flat/graph)
    TailModel tail = TailModel::None;
    double truncation_radius = 0;
    double resolution = 0;   // smallest inter-node scale
    double total_weight = 0;
    double tail_density_limit = 0; // density seen by the asymptotic-plane tail
    std::function<Vec(const Vec&)> graph_psi; // graph kind only
    std::string map_expr;                     // graph map expression when known
    double cantor_ratio = 0;                  // cantor construction parameters
    int cantor_branches = 0;
    int cantor_depth = 0;
    int plane_dim = 0;

    std::size_t node_count() const { return weights.size(); }

    Vec node(std::size_t k) const {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = node_coords[k * n + i];
        return v;
    }

    // smallest delta at which kernel sums against this measure are trusted
    double validity_floor() const {
        return (kind == SupportKind::FlatPlane) ? 1e-9 : 10.0 * resolution;
    }

    Vec centroid() const {
        Vec c(n);
        for (std::size_t k = 0; k < node_count(); ++k) {
            for (int i = 0; i < n; ++i) c[i] += weights[k] * node_coords[k * n + i];
        }
        c *= 1.0 / total_weight;
        return c;
    }
};

namespace detail {

// Cell centers of a uniform grid on the ball |y| <= T in R^d.
inline std::vector<Vec> ball_grid(int d, double T, double cell) {
    std::vector<Vec> pts;
    const int m = static_cast<int>(std::floor(T / cell));
    std::vector<int> idx(d, -m);
    while (true) {
        Vec y(d);
        for (int i = 0; i < d; ++i) y[i] = (idx[i] + 0.5) * cell;
        if (y.norm() <= T) pts.push_back(y);
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < m) break;
            idx[i] = -m;
        }
        if (i == d) break;
    }
    return pts;
}

inline double default_flat_cell(int d, double T) {
    switch (d) {
        case 1: return T / 4096.0;
        case 2: return T / 192.0;
        default: return T / 48.0;
    }
}

} // namespace detail

// Constant-or-variable density on the d-plane spanned by the first d axes,
// truncated to |y| <= truncation_radius, with the flat closed-form tail.
inline DiscreteMeasure flat_measure(double d, int n, const Density& density,
                                    double truncation_radius, double cell = 0) {
    const int di = static_cast<int>(d);
    if (di != d || di < 1 || di > 3) throw std::invalid_argument("flat_measure: d must be 1, 2 or 3");
    if (di >= n) throw std::invalid_argument("flat_measure: d < n required");
    if (!(density.inf_bound > 0.0))
        throw std::invalid_argument("flat_measure: density must be bounded away from zero");
    if (std::isnan(density.limit_at_infinity))
        throw std::invalid_argument("flat_measure: tail limit at infinity required");
    if (!(truncation_radius > 0)) throw std::invalid_argument("flat_measure: truncation > 0");

    DiscreteMeasure mu;
    mu.kind = SupportKind::FlatPlane;
    mu.n = n;
    mu.d = d;
    mu.density = density;
    mu.tail = TailModel::FlatPlane;
    mu.truncation_radius = truncation_radius;
    mu.tail_density_limit = density.limit_at_infinity;
    if (cell <= 0) cell = detail::default_flat_cell(di, truncation_radius);
    mu.resolution = cell;
    const double cellvol = std::pow(cell, di);
    for (const Vec& y : detail::ball_grid(di, truncation_radius, cell)) {
        const double w = density(y);
        if (!(w > 0.0)) throw std::invalid_argument("flat_measure: density not strictly positive");
        for (int i = 0; i < n; ++i) mu.node_coords.push_back(i < di ? y[i] : 0.0);
        mu.weights.push_back(cellvol * w);
        mu.total_weight += mu.weights.back();
    }
    return mu;
}

// Graph of a Lipschitz map psi: R^d -> R^(n-d) carrying (1+phi) dH^d pushed
// forward; weights use the metric determinant of eta = (id, psi), with
// differentials by central differences on the parameter grid.
inline DiscreteMeasure graph_measure(int d, int n,
                                     const std::function<Vec(const Vec&)>& psi,
                                     const Density& phi, double truncation_radius,
                                     double cell = 0, const std::string& map_expr = "") {
    if (d < 1 || d > 3 || d >= n) throw std::invalid_argument("graph_measure: bad dimensions");
    if (!(truncation_radius > 0)) throw std::invalid_argument("graph_measure: truncation > 0");
    DiscreteMeasure mu;
    mu.kind = SupportKind::Graph;
    mu.n = n;
    mu.d = d;
    mu.density = phi;
    mu.tail = TailModel::FlatPlane;
    mu.truncation_radius = truncation_radius;
    mu.tail_density_limit = 1.0 + phi.limit_at_infinity;
    mu.graph_psi = psi;
    mu.map_expr = map_expr;
    if (cell <= 0) cell = detail::default_flat_cell(d, truncation_radius);
    mu.resolution = cell;
    const double cellvol = std::pow(cell, d);
    const double fd = cell; // differentiation step matches the grid
    const int codim = n - d;
    for (const Vec& y : detail::ball_grid(d, truncation_radius, cell)) {
        const Vec py = psi(y);
        if (py.n != codim) throw std::invalid_argument("graph_measure: psi has wrong codomain");
        for (int j = 0; j < codim; ++j)
            if (!std::isfinite(py[j])) throw std::invalid_argument("graph_measure: psi not finite");
        // metric tensor G = I + Dpsi^T Dpsi
        double G[3][3] = {};
        std::vector<Vec> dpsi(d);
        for (int i = 0; i < d; ++i) {
            Vec yp = y, ym = y;
            yp[i] += fd;
            ym[i] -= fd;
            const Vec f = psi(yp), b = psi(ym);
            Vec der(codim);
            for (int j = 0; j < codim; ++j) der[j] = (f[j] - b[j]) / (2.0 * fd);
            dpsi[i] = der;
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G[i][j] = (i == j ? 1.0 : 0.0) + dot(dpsi[i], dpsi[j]);
        double det = 0;
        if (d == 1) det = G[0][0];
        else if (d == 2) det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
        else
            det = G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) -
                  G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
                  G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
        const double w = cellvol * (1.0 + phi(y)) * std::sqrt(std::abs(det));
        if (!(w > 0.0)) throw std::invalid_argument("graph_measure: nonpositive weight");
        for (int i = 0; i < d; ++i) mu.node_coords.push_back(y[i]);
        for (int j = 0; j < codim; ++j) mu.node_coords.push_back(py[j]);
        mu.weights.push_back(w);
        mu.total_weight += w;
    }
    return mu;
}

// Self-similar Cantor measure: 2^m corner maps of ratio `ratio` on the unit
// cube of an m-plane, iterated to `depth`, equal weights.  The similarity
// dimension log(branches)/log(1/ratio) is the measure's d.
inline DiscreteMeasure cantor_measure(int n, double ratio, int branches, int depth,
                                      int plane_dim = 1) {
    if (depth < 1) throw std::invalid_argument("cantor_measure: depth >= 1");
    if (!(ratio > 0.0) || ratio >= 0.5)
        throw std::invalid_argument("cantor_measure: ratio >= 1/2 gives overlapping pieces");
    if (plane_dim < 1 || plane_dim > 3 || plane_dim >= n)
        throw std::invalid_argument("cantor_measure: bad embedding plane");
    if (branches != (1 << plane_dim))
        throw std::invalid_argument("cantor_measure: branches must be 2^plane_dim");
    DiscreteMeasure mu;
    mu.kind = SupportKind::Cantor;
    mu.n = n;
    mu.d = std::log(static_cast<double>(branches)) / std::log(1.0 / ratio);
    mu.tail = TailModel::None;
    mu.resolution = std::pow(ratio, depth);
    mu.density = density_const(1.0, plane_dim);
    mu.cantor_ratio = ratio;
    mu.cantor_branches = branches;
    mu.cantor_depth = depth;
    mu.plane_dim = plane_dim;

    // corner offsets of [0,1]^m
    std::vector<Vec> corners;
    for (int b = 0; b < branches; ++b) {
        Vec c(plane_dim);
        for (int i = 0; i < plane_dim; ++i) c[i] = (b >> i) & 1 ? 1.0 : 0.0;
        corners.push_back(c);
    }
    std::vector<Vec> pts;
    Vec center(plane_dim);
    for (int i = 0; i < plane_dim; ++i) center[i] = 0.5;
    pts.push_back(center);
    for (int level = 0; level < depth; ++level) {
        std::vector<Vec> next;
        next.reserve(pts.size() * corners.size());
        for (const Vec& c : corners)
            for (const Vec& p : pts) {
                Vec q(plane_dim);
                for (int i = 0; i < plane_dim; ++i) q[i] = ratio * p[i] + (1.0 - ratio) * c[i];
                next.push_back(q);
            }
        pts.swap(next);
    }
    const double w = std::pow(static_cast<double>(branches), -depth);
    for (const Vec& p : pts) {
        for (int i = 0; i < n; ++i) mu.node_coords.push_back(i < plane_dim ? p[i] : 0.0);
        mu.weights.push_back(w);
        mu.total_weight += w;
    }
    return mu;
}

// Generic weighted point cloud (no tail model).
inline DiscreteMeasure point_cloud_measure(int n, double d, const std::vector<Vec>& points,
                                           const std::vector<double>& weights) {
    if (points.size() != weights.size() || points.empty())
        throw std::invalid_argument("point_cloud_measure: bad sizes");
    DiscreteMeasure mu;
    mu.kind = SupportKind::PointCloud;
    mu.n = n;
    mu.d = d;
    mu.tail = TailModel::None;
    mu.density = density_const(1.0, 1);
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(weights[k] > 0)) throw std::invalid_argument("point_cloud_measure: weights > 0");
        for (int i = 0; i < n; ++i) mu.node_coords.push_back(points[k][i]);
        mu.weights.push_back(weights[k]);
        mu.total_weight += weights[k];
        for (std::size_t j = 0; j < k; ++j)
            min_sep = std::min(min_sep, std::sqrt(dist2(points[k], points[j])));
    }
    mu.resolution = (points.size() > 1) ? min_sep : 0.0;
    return mu;
}

// Distance to the support: exact orthogonal distance for flat planes,
// nearest-node distance otherwise (error at most the resolution).
inline double distance_to_support(const DiscreteMeasure& mu, const Vec& x) {
    if (mu.kind == SupportKind::FlatPlane) {
        double s = 0;
        const int di = static_cast<int>(mu.d);
        for (int i = di; i < mu.n; ++i) s += x[i] * x[i];
        return std::sqrt(s);
    }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t k = mu.node_count();
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0;
        for (int i = 0; i < mu.n; ++i) {
            const double t = x[i] - mu.node_coords[j * mu.n + i];
            s += t * t;
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

inline EvalPoint make_eval_point(const DiscreteMeasure& mu, const Vec& x) {
    EvalPoint p;
    p.x = x;
    p.delta = distance_to_support(mu, x);
    if (p.delta <= 0.0) throw std::invalid_argument("eval point lies on the support");
    p.usable = p.delta >= mu.validity_floor();
    return p;
}

struct AhlforsBand {
    double C_lower = 0; // min of mu(B(x,r)) / r^d
    double C_upper = 0; // max
};

// Empirical Ahlfors ratios over random support centers and log-spaced radii.
inline AhlforsBand ahlfors_check(const DiscreteMeasure& mu, int sample_count, double r_lo,
                                 double r_hi, std::uint64_t seed = 7) {
    if (!(r_lo > 0) || !(r_hi > r_lo)) throw std::invalid_argument("ahlfors_check: bad radii");
    Rng rng(seed, 101);
    AhlforsBand band;
    band.C_lower = std::numeric_limits<double>::infinity();
    band.C_upper = 0;
    const std::size_t k = mu.node_count();
    const int radii = 9;
    // truncated plane/graph representations: keep B(x, r_hi) inside the model
    const bool truncated =
        (mu.kind == SupportKind::FlatPlane || mu.kind == SupportKind::Graph);
    auto interior = [&](std::size_t c) {
        if (!truncated) return true;
        double s2 = 0;
        const int di = static_cast<int>(mu.d);
        for (int i = 0; i < di; ++i) s2 += mu.node_coords[c * mu.n + i] * mu.node_coords[c * mu.n + i];
        return std::sqrt(s2) + r_hi <= mu.truncation_radius;
    };
    for (int s = 0; s < sample_count; ++s) {
        std::size_t c = static_cast<std::size_t>(rng.next_index(static_cast<int>(k)));
        for (int tries = 0; tries < 64 && !interior(c); ++tries)
            c = static_cast<std::size_t>(rng.next_index(static_cast<int>(k)));
        if (!interior(c)) continue;
        for (int j = 0; j < radii; ++j) {
            const double r = r_lo * std::pow(r_hi / r_lo, j / (radii - 1.0));
            double mass = 0;
            const double r2 = r * r;
            for (std::size_t q = 0; q < k; ++q) {
                double s2 = 0;
                for (int i = 0; i < mu.n; ++i) {
                    const double t = mu.node_coords[q * mu.n + i] - mu.node_coords[c * mu.n + i];
                    s2 += t * t;
                }
                if (s2 <= r2) mass += mu.weights[q];
            }
            const double ratio = mass / std::pow(r, mu.d);
            band.C_lower = std::min(band.C_lower, ratio);
            band.C_upper = std::max(band.C_upper, ratio);
        }
    }
    return band;
}

} // namespace rdlab
