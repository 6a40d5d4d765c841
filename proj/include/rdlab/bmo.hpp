#pragma once

// Empirical BMO machinery on the line: dyadic mean-oscillation norm
// estimation, the nested-average inequality, and the kernel-moment bounds
// with their sup-ratio studies.  The inequalities assert existence of a
// constant, so the tests report boundedness and drift, never a fixed C.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdlab/quadrature.hpp"

namespace rdlab {

// Test function on R with optional closed-form interval average.
struct BmoFunction {
    std::function<double(double)> eval;
    // exact integral over [a, b] when available (constants, log)
    std::function<double(double, double)> integral;
    std::string name;
};

inline BmoFunction bmo_constant(double c) {
    BmoFunction f;
    f.eval = [c](double) { return c; };
    f.integral = [c](double a, double b) { return c * (b - a); };
    f.name = "const:" + std::to_string(c);
    return f;
}

// log|y|, the textbook unbounded BMO function; the antiderivative
// y log|y| - y gives exact ball averages.
inline BmoFunction bmo_log() {
    BmoFunction f;
    f.eval = [](double y) { return (y == 0.0) ? -745.0 : std::log(std::abs(y)); };
    f.integral = [](double a, double b) {
        auto anti = [](double t) { return (t == 0.0) ? 0.0 : t * std::log(std::abs(t)) - t; };
        return anti(b) - anti(a);
    };
    f.name = "log|y|";
    return f;
}

// log truncated below: max(log|y|, -M); still BMO, bounded
inline BmoFunction bmo_truncated_log(double M = 12.0) {
    BmoFunction f;
    f.eval = [M](double y) {
        const double t = (y == 0.0) ? -M : std::log(std::abs(y));
        return std::max(t, -M);
    };
    f.integral = nullptr;
    f.name = "tlog";
    return f;
}

inline BmoFunction bmo_affine() {
    BmoFunction f;
    f.eval = [](double y) { return y; };
    f.integral = [](double a, double b) { return 0.5 * (b * b - a * a); };
    f.name = "y1";
    return f;
}

inline BmoFunction bmo_bump() {
    BmoFunction f;
    f.eval = [](double y) { return std::exp(-y * y); };
    f.integral = nullptr;
    f.name = "bump";
    return f;
}

// sum_k cos(2^k pi y)/k over a few octaves: near-extremal oscillation
inline BmoFunction bmo_lacunary(int octaves = 6) {
    BmoFunction f;
    f.eval = [octaves](double y) {
        double s = 0;
        double freq = M_PI;
        for (int k = 1; k <= octaves; ++k) {
            freq *= 2.0;
            s += std::cos(freq * y) / k;
        }
        return s;
    };
    f.integral = nullptr;
    f.name = "lacunary";
    return f;
}

namespace bmodetail {

inline double interval_integral(const BmoFunction& f, double a, double b) {
    if (f.integral) return f.integral(a, b);
    // composite rule with a breakpoint at 0 where log-type kinks live
    std::vector<double> breaks{a};
    if (a < 0.0 && b > 0.0) breaks.push_back(0.0);
    breaks.push_back(b);
    double s = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        const int parts = 16;
        for (int j = 0; j < parts; ++j)
            s += gauss_panel(f.eval, lo + (hi - lo) * j / parts, lo + (hi - lo) * (j + 1) / parts,
                             12);
    }
    return s;
}

} // namespace bmodetail

inline double ball_average(const BmoFunction& f, double center, double radius) {
    return bmodetail::interval_integral(f, center - radius, center + radius) / (2.0 * radius);
}

// mean oscillation (1/|B|) int_B |f - m_B f| by quadrature with breakpoints
// at the kink set of |.|
inline double mean_oscillation(const BmoFunction& f, double center, double radius) {
    const double m = ball_average(f, center, radius);
    auto g = [&](double y) { return std::abs(f.eval(y) - m); };
    const double a = center - radius, b = center + radius;
    double s = 0;
    const int parts = 64;
    for (int j = 0; j < parts; ++j)
        s += gauss_panel(g, a + (b - a) * j / parts, a + (b - a) * (j + 1) / parts, 8);
    return s / (2.0 * radius);
}

struct BmoEstimate {
    double norm_estimate = 0;
    int dyadic_depth = 0;
    double domain_radius = 0;
    std::vector<std::pair<double, double>> worst_ball; // (center, radius), size 1
};

// sup of mean oscillation over the dyadic family: levels l = 0..depth, ball
// radius R 2^-l, centers on half-radius grids.
inline BmoEstimate bmo_norm(const BmoFunction& f, int depth, double domain_radius) {
    if (depth < 0 || !(domain_radius > 0)) throw std::invalid_argument("bmo_norm: bad arguments");
    BmoEstimate out;
    out.dyadic_depth = depth;
    out.domain_radius = domain_radius;
    double best = 0, bc = 0, br = domain_radius;
    for (int l = 0; l <= depth; ++l) {
        const double r = domain_radius * std::pow(2.0, -l);
        const int m = 1 << l;
        for (int j = -m; j < m; ++j) {
            const double c = (j + 0.5) * r;
            const double osc = mean_oscillation(f, c, r);
            if (osc > best) {
                best = osc;
                bc = c;
                br = r;
            }
        }
    }
    out.norm_estimate = best;
    out.worst_ball = {{bc, br}};
    return out;
}

struct BallPair {
    double x = 0, r = 0;   // larger ball
    double x0 = 0, r0 = 0; // smaller ball
};

// Deterministic nested pair family on log grids; raising the level doubles
// the center and radius grids, so "sample doubling" is grid refinement, not
// luck.  All pairs satisfy r > r0 and |x - x0| >= r0.
inline std::vector<BallPair> ball_pair_grid(int level) {
    const int nx = 4 << level, nr = 3 << level;
    std::vector<double> centers{0.0};
    for (int i = 0; i < nx; ++i) {
        // log-spaced toward the origin, where log-type oscillation peaks;
        // refinement densifies the same span instead of extending it
        const double mag = 0.01 * std::pow(500.0, (i + 0.5) / nx);
        centers.push_back(mag);
        centers.push_back(-mag);
    }
    std::vector<BallPair> pairs;
    for (double x0 : centers) {
        for (int j = 0; j < nr; ++j) {
            const double r0 = 0.01 * std::pow(100.0, (j + 0.5) / nr);
            for (double rho : {2.0, 6.3, 20.0, 63.0}) {
                for (double sep : {2.0, 8.0, 32.0}) {
                    BallPair b;
                    b.x0 = x0;
                    b.r0 = r0;
                    b.r = rho * r0;
                    b.x = x0 + sep * r0;
                    pairs.push_back(b);
                }
            }
        }
    }
    return pairs;
}

// Companion family of kernel-moment evaluation points (x0, delta).
inline std::vector<std::pair<double, double>> kernel_eval_grid(int level) {
    const int nx = 4 << level, nd = 4 << level;
    std::vector<std::pair<double, double>> xs;
    for (int i = 0; i < nx; ++i) {
        const double x0 = (i == 0) ? 0.0 : std::pow(1000.0, (i + 0.5) / nx);
        for (int j = 0; j < nd; ++j) {
            const double delta = 0.01 * std::pow(100.0, (j + 0.5) / nd);
            xs.emplace_back(x0, delta);
        }
    }
    return xs;
}

// sup over pairs of |m_B f - m_B0 f| / (||f|| (ln(r/r0) + ln(|x-x0|/r0)));
// pairs must satisfy r > r0 and |x - x0| >= r0.
inline double averages_inequality_ratio(const BmoFunction& f, const std::vector<BallPair>& pairs,
                                        double bmo_norm_estimate) {
    double worst = 0;
    for (const auto& p : pairs) {
        if (!(p.r > p.r0) || !(p.r0 > 0)) throw std::invalid_argument("ball pair: need r > r0 > 0");
        const double sep = std::abs(p.x - p.x0);
        if (sep < p.r0) throw std::invalid_argument("ball pair: need |x - x0| >= r0");
        const double lhs = std::abs(ball_average(f, p.x, p.r) - ball_average(f, p.x0, p.r0));
        const double denom = bmo_norm_estimate * (std::log(p.r / p.r0) + std::log(sep / p.r0));
        if (denom <= 0) {
            if (lhs == 0.0) continue;
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, lhs / denom);
    }
    return worst;
}

// int_R |f|^m / |x-y|^(1+beta) dy for x at height delta over x0, by graded
// panels; the integrand is regular since delta > 0.
inline double kernel_moment_integral(const BmoFunction& f, int m, double beta, double x0,
                                     double delta) {
    auto g = [&](double y) {
        const double fv = std::pow(std::abs(f.eval(y)), m);
        const double dy = y - x0;
        return fv * std::pow(delta * delta + dy * dy, -0.5 * (1.0 + beta));
    };
    // graded around x0 plus far field; log-type functions grow too slowly to
    // disturb the power tail
    std::vector<double> offs = geometric_breaks(delta / 32.0, 1e6 * (1.0 + std::abs(x0)), 2.0);
    double s = gauss_panel(g, x0 - delta / 32.0, x0 + delta / 32.0, 16);
    for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
        s += gauss_panel(g, x0 + offs[i], x0 + offs[i + 1], 16);
        s += gauss_panel(g, x0 - offs[i + 1], x0 - offs[i], 16);
    }
    return s;
}

struct KernelMomentRatios {
    double sup_ratio_local = 0;  // against (1 + delta^-(1+beta)) (||f||^m + |m_B(x0,1) f|^m)
    double sup_ratio_global = 0; // with the (1 + ln|x0|)^m factor and m_B(0,1)
};

inline KernelMomentRatios kernel_moment_ratio(const BmoFunction& f, int m, double beta,
                                              const std::vector<std::pair<double, double>>& xs,
                                              double bmo_norm_estimate) {
    KernelMomentRatios out;
    const double m01 = ball_average(f, 0.0, 1.0);
    for (const auto& [x0, delta] : xs) {
        const double lhs = kernel_moment_integral(f, m, beta, x0, delta);
        const double pref = 1.0 + std::pow(delta, -(1.0 + beta));
        const double mx = ball_average(f, x0, 1.0);
        const double local = pref * (std::pow(bmo_norm_estimate, m) + std::pow(std::abs(mx), m));
        if (local > 0) out.sup_ratio_local = std::max(out.sup_ratio_local, lhs / local);
        const double glob = pref * std::pow(1.0 + std::log(std::max(1.0, std::abs(x0))), m) *
                            (std::pow(bmo_norm_estimate, m) + std::pow(std::abs(m01), m));
        if (glob > 0) out.sup_ratio_global = std::max(out.sup_ratio_global, lhs / glob);
    }
    return out;
}

// Product form: int |f1 ... fm| / |x-y|^(1+beta) against the Hoelder-style
// bound with the geometric mean of the single-function majorants.
inline double product_moment_ratio(const std::vector<BmoFunction>& fs, double beta, double x0,
                                   double delta, const std::vector<double>& norms) {
    const int m = static_cast<int>(fs.size());
    auto g = [&](double y) {
        double prod = 1.0;
        for (const auto& f : fs) prod *= std::abs(f.eval(y));
        const double dy = y - x0;
        return prod * std::pow(delta * delta + dy * dy, -0.5 * (1.0 + beta));
    };
    std::vector<double> offs = geometric_breaks(delta / 32.0, 1e6 * (1.0 + std::abs(x0)), 2.0);
    double lhs = gauss_panel(g, x0 - delta / 32.0, x0 + delta / 32.0, 16);
    for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
        lhs += gauss_panel(g, x0 + offs[i], x0 + offs[i + 1], 16);
        lhs += gauss_panel(g, x0 - offs[i + 1], x0 - offs[i], 16);
    }
    double geo = 1.0;
    for (int i = 0; i < m; ++i) {
        const double m01 = ball_average(fs[i], 0.0, 1.0);
        geo *= std::pow(std::pow(norms[i], m) + std::pow(std::abs(m01), m), 1.0 / m);
    }
    const double bound = (1.0 + std::pow(delta, -(1.0 + beta))) *
                         std::pow(1.0 + std::log(std::max(1.0, std::abs(x0))), m) * geo;
    return lhs / bound;
}

} // namespace rdlab
