#pragma once

// Linearized kernels around the flat solution and their Bessel-form radial
// Fourier transforms: the zero-mean kernel Ker, the scale family g_h, f_h,
// the small-scale constants Cf, Cg (with primed second-order companions),
// the degeneracy landscape over (n, d, alpha), and the flat functional that
// annihilates exactly the constant perturbations.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdlab/bessel.hpp"
#include "rdlab/flatquad.hpp"
#include "rdlab/geometry.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/special_constants.hpp"

namespace rdlab {

enum class KernelKind { Ker, g_h, f_h };

// Two-term radial profile sum_i coeff_i (1 + |y/h|^2)^(-a_i/2).
struct RadialKernelProfile {
    KernelKind kind = KernelKind::Ker;
    GeometryParams params;
    double h = 1.0;
    double coeff[2] = {0, 0};
    double expo[2] = {0, 0};

    double evaluate(double s) const {
        const double u = 1.0 + (s / h) * (s / h);
        return coeff[0] * std::pow(u, -0.5 * expo[0]) + coeff[1] * std::pow(u, -0.5 * expo[1]);
    }
};

// Ker(y) = c2^{-1} c1 (1+|y|^2)^(-(d+alpha)/2) - (1+|y|^2)^(-(n-2)/2); its
// integral over R^d vanishes by the definition of c1 and c2.
inline RadialKernelProfile ker_profile(const GeometryParams& p) {
    RadialKernelProfile k;
    k.kind = KernelKind::Ker;
    k.params = p;
    k.h = 1.0;
    const double c1 = radial_const(p.d, p.codim2());
    const double c2 = radial_const(p.d, p.alpha);
    k.coeff[0] = c1 / c2;
    k.expo[0] = p.d + p.alpha;
    k.coeff[1] = -1.0;
    k.expo[1] = p.n - 2.0;
    return k;
}

inline RadialKernelProfile g_profile(const GeometryParams& p, double h) {
    if (!(h > 0)) throw std::invalid_argument("g_profile: h > 0");
    RadialKernelProfile k;
    k.kind = KernelKind::g_h;
    k.params = p;
    k.h = h;
    const double c1 = radial_const(p.d, p.codim2());
    const double c2 = radial_const(p.d, p.alpha);
    k.coeff[0] = 1.0;
    k.expo[0] = p.n - 2.0;
    k.coeff[1] = -c1 / c2;
    k.expo[1] = p.d + p.alpha;
    return k;
}

inline RadialKernelProfile f_profile(const GeometryParams& p, double h) {
    if (!(h > 0)) throw std::invalid_argument("f_profile: h > 0");
    RadialKernelProfile k;
    k.kind = KernelKind::f_h;
    k.params = p;
    k.h = h;
    const double c1 = radial_const(p.d, p.codim2());
    const double c2 = radial_const(p.d, p.alpha);
    k.coeff[0] = p.n - 2.0;
    k.expo[0] = static_cast<double>(p.n);
    k.coeff[1] = -(c1 / c2) * (p.d + p.alpha) * p.codim2() / p.alpha;
    k.expo[1] = p.d + p.alpha + 2.0;
    return k;
}

// int_{R^d} profile, numeric radial head with the analytic power tails.
inline double kernel_integral(const RadialKernelProfile& k, double R = 1e4) {
    const double d = k.params.d;
    double total = 0;
    for (int i = 0; i < 2; ++i) {
        // substitute s = h u: h^d int u^{d-1} (1+u^2)^(-a/2) du
        total += k.coeff[i] * std::pow(k.h, d) * sphere_area_real(d) *
                 radial_power_integral(d - 1.0, k.expo[i], R);
    }
    return total;
}

// Radial transform of the profile through bessel_ft at z = h |zeta|; fixed
// positive convention factors are dropped consistently across the family.
inline double kernel_ft(const RadialKernelProfile& k, double zeta_magnitude) {
    if (k.kind == KernelKind::Ker)
        throw std::invalid_argument("kernel_ft: use g_h / f_h profiles (Ker = -g_1)");
    const double z = k.h * zeta_magnitude;
    const double d = k.params.d;
    double s = 0;
    for (int i = 0; i < 2; ++i) s += k.coeff[i] * bessel_ft(k.expo[i], d, z);
    return s;
}

enum class FamilyVerdict { families_excluded, magic_degenerate, d1_degenerate };

inline const char* to_string(FamilyVerdict v) {
    switch (v) {
        case FamilyVerdict::families_excluded: return "families_excluded";
        case FamilyVerdict::magic_degenerate: return "magic_degenerate";
        default: return "d1_degenerate";
    }
}

// Case analysis for one-parameter families: outside the magic exponent and
// the d = 1 slice, the transform constants cannot vanish the way a family
// would require.
inline FamilyVerdict family_criterion(const GeometryParams& p) {
    if (p.magic()) return FamilyVerdict::magic_degenerate;
    if (p.d == 1.0) return FamilyVerdict::d1_degenerate;
    return FamilyVerdict::families_excluded;
}

struct DegeneracyRow {
    double n = 0, d = 0, alpha = 0;
    double Cf = 0, Cg = 0;
    double relation_residual = 0; // |(n-d-2)(d+alpha-1) - (n-3) alpha|
    bool simultaneous_zero = false;
    FamilyVerdict verdict = FamilyVerdict::families_excluded;
};

inline double degeneracy_relation_residual(double n, double d, double alpha) {
    return std::abs((n - d - 2.0) * (d + alpha - 1.0) - (n - 3.0) * alpha);
}

// Scan a parameter box; wherever Cf and Cg are simultaneously near zero the
// Gamma-recurrence relation must hold (those points lie on the d = 1 slice
// or the magic curve).
inline std::vector<DegeneracyRow> degeneracy_scan(const std::vector<int>& n_values,
                                                  const std::vector<double>& d_values,
                                                  const std::vector<double>& alpha_grid,
                                                  double zero_tol = 1e-9) {
    std::vector<DegeneracyRow> rows;
    for (int n : n_values) {
        for (double d : d_values) {
            if (!(d > 0.0) || !(d < n - 2.0)) continue;
            for (double a : alpha_grid) {
                GeometryParams p(n, d, a);
                const AsymptoticConstants c = asymptotic_constants(p);
                DegeneracyRow row;
                row.n = n;
                row.d = d;
                row.alpha = a;
                row.Cf = c.Cf.value_or(std::numeric_limits<double>::quiet_NaN());
                row.Cg = c.Cg.value_or(std::numeric_limits<double>::quiet_NaN());
                row.relation_residual = degeneracy_relation_residual(n, d, a);
                const double scale_f = gamma_fn(0.5 * (n - 1.0)) * gamma_fn(0.5 * (a + 2.0));
                const double scale_g = (n > 3) ? gamma_fn(0.5 * (n - 3.0)) * gamma_fn(0.5 * a) : 1.0;
                row.simultaneous_zero = std::abs(row.Cf) <= zero_tol * scale_f &&
                                        std::abs(row.Cg) <= zero_tol * scale_g;
                row.verdict = family_criterion(p);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

// Bisection root of alpha -> Cf(n, d, alpha) on a bracket.
inline std::optional<double> find_cf_root(int n, double d, double a_lo, double a_hi) {
    auto cf = [&](double a) { return *asymptotic_constants(GeometryParams(n, d, a)).Cf; };
    double lo = a_lo, hi = a_hi, flo = cf(lo), fhi = cf(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = cf(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Bounded perturbation direction phi for the flat functional.
struct PerturbationTestFunction {
    std::function<double(const Vec&)> eval; // on R^d
    bool integrable = false;                // L^1 on top of BMO/bounded
    Density envelope;                       // quadrature metadata
    std::string name;
};

inline PerturbationTestFunction perturbation_constant(double c, int d) {
    PerturbationTestFunction f;
    f.eval = [c](const Vec&) { return c; };
    f.integrable = false;
    f.envelope = density_const(c, d);
    f.name = "const:" + std::to_string(c);
    return f;
}

inline PerturbationTestFunction perturbation_gaussian(int d) {
    PerturbationTestFunction f;
    f.eval = [](const Vec& y) { return std::exp(-y.norm2()); };
    f.integrable = true;
    Density env;
    env.eval = f.eval;
    env.limit_at_infinity = 0.0;
    env.inf_bound = 0.0;
    env.sup_bound = 1.0;
    env.feature_center = Vec(d);
    env.feature_radius = 8.0;
    env.feature_scale = 1.0;
    env.name = "gauss";
    f.envelope = env;
    f.name = "gauss";
    return f;
}

struct FlatFunctionalValue {
    double value = 0;  // int [ c2^{-1} c1 delta^{d+2+alpha-n} |x-y|^{-(d+alpha)}
                       //       - |x-y|^{-(n-2)} ] phi(y) dy
    double scale = 0;  // sum of the two integral magnitudes, for normalization
};

// The linearized flat equation evaluated against a perturbation direction:
// zero (to quadrature tolerance) exactly when phi acts like a constant.
inline FlatFunctionalValue flat_functional_eval(const PerturbationTestFunction& phi,
                                                const GeometryParams& p, const Vec& x0_plane,
                                                double delta) {
    const int di = static_cast<int>(p.d);
    if (di != p.d) throw std::invalid_argument("flat_functional_eval: integer d only");
    const double c1 = radial_const(p.d, p.codim2());
    const double c2 = radial_const(p.d, p.alpha);
    Density w = phi.envelope;
    w.eval = phi.eval;
    // dummy ambient point at height delta over x0
    const PlaneRule rule_a = build_plane_rule(di, di + 1, p.d + p.alpha, x0_plane, delta, w);
    const PlaneRule rule_b = build_plane_rule(di, di + 1, p.n - 2.0, x0_plane, delta, w);
    Vec x(di + 1);
    for (int i = 0; i < di; ++i) x[i] = x0_plane[i];
    x[di] = delta;
    const double ia = rule_a.eval_kernel_sum(x, p.d + p.alpha);
    const double ib = rule_b.eval_kernel_sum(x, p.n - 2.0);
    FlatFunctionalValue out;
    const double pref = (c1 / c2) * std::pow(delta, p.d + 2.0 + p.alpha - p.n);
    out.value = pref * ia - ib;
    out.scale = std::abs(pref * ia) + std::abs(ib);
    return out;
}

} // namespace rdlab
