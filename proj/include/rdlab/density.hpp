#pragma once

// Evaluable density handles on the parameter plane R^d.  A handle carries the
// metadata the certified quadrature needs: bounds, the limit at infinity, an
// optional algebraic growth envelope, and the size/scale of the region where
// the density deviates from that limit.

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdlab/geometry.hpp"

namespace rdlab {

struct Density {
    std::function<double(const Vec&)> eval; // y has dimension d
    double limit_at_infinity = 1.0;         // NaN when no limit exists
    double inf_bound = 1.0;                 // essential bounds on the plane
    double sup_bound = 1.0;
    double growth_coeff = 0.0;              // |f(y)| <= sup_bound + growth_coeff |y|^growth_pow
    double growth_pow = 0.0;
    Vec feature_center;                     // where f deviates from its limit
    double feature_radius = 8.0;
    double feature_scale = 1.0;             // smallest variation length scale
    std::string name = "one";

    double operator()(const Vec& y) const { return eval(y); }
    bool is_constant() const { return feature_radius == 0.0; }
};

inline Density density_const(double c, int d = 1) {
    Density f;
    f.eval = [c](const Vec&) { return c; };
    f.limit_at_infinity = c;
    f.inf_bound = f.sup_bound = c;
    f.feature_center = Vec(d);
    f.feature_radius = 0.0;
    f.name = "const:" + std::to_string(c);
    return f;
}

// 1 + amp * exp(-|y - c|^2 / width^2)
inline Density density_gauss_bump(int d, double amp, double width = 1.0, Vec center = {}) {
    if (center.n == 0) center = Vec(d);
    Density f;
    const double w2 = width * width;
    f.eval = [amp, w2, center](const Vec& y) { return 1.0 + amp * std::exp(-dist2(y, center) / w2); };
    f.limit_at_infinity = 1.0;
    f.inf_bound = (amp >= 0) ? 1.0 : 1.0 + amp;
    f.sup_bound = (amp >= 0) ? 1.0 + amp : 1.0;
    f.feature_center = center;
    f.feature_radius = 8.0 * width;
    f.feature_scale = width;
    std::ostringstream os;
    os << "gauss_bump:" << amp << "," << width;
    f.name = os.str();
    if (f.inf_bound <= 0.0) throw std::invalid_argument("density_gauss_bump: not positive");
    return f;
}

// 1 + amp * sin(k y_1) * exp(-|y|^2 / width^2): localized oscillation with
// limit 1 at infinity, bounded in [1-|amp|, 1+|amp|].
inline Density density_wiggle(int d, double amp, double k = 2.0, double width = 3.0) {
    if (!(std::abs(amp) < 1.0)) throw std::invalid_argument("density_wiggle: |amp| < 1");
    Density f;
    const double w2 = width * width;
    f.eval = [amp, k, w2](const Vec& y) {
        return 1.0 + amp * std::sin(k * y[0]) * std::exp(-y.norm2() / w2);
    };
    f.limit_at_infinity = 1.0;
    f.inf_bound = 1.0 - std::abs(amp);
    f.sup_bound = 1.0 + std::abs(amp);
    f.feature_center = Vec(d);
    f.feature_radius = 8.0 * width;
    f.feature_scale = std::min(1.0 / k, width);
    std::ostringstream os;
    os << "wiggle:" << amp << "," << k << "," << width;
    f.name = os.str();
    return f;
}

// Pointwise product with merged envelope metadata; used when a potential
// carries an extra weight on top of the measure's density.
inline Density density_product(const Density& a, const Density& b) {
    Density f;
    auto fa = a.eval, fb = b.eval;
    f.eval = [fa, fb](const Vec& y) { return fa(y) * fb(y); };
    f.limit_at_infinity = a.limit_at_infinity * b.limit_at_infinity;
    f.inf_bound = std::min(a.inf_bound * b.inf_bound, a.sup_bound * b.sup_bound);
    f.sup_bound = std::max(std::abs(a.sup_bound) * std::abs(b.sup_bound),
                           std::abs(a.inf_bound) * std::abs(b.inf_bound));
    f.growth_coeff = std::abs(a.sup_bound) * b.growth_coeff + std::abs(b.sup_bound) * a.growth_coeff;
    f.growth_pow = std::max(a.growth_pow, b.growth_pow);
    if (a.feature_radius == 0.0 && b.feature_radius == 0.0) {
        f.feature_center = a.feature_center;
        f.feature_radius = 0.0;
        f.feature_scale = 1.0;
    } else if (a.feature_radius == 0.0) {
        f.feature_center = b.feature_center;
        f.feature_radius = b.feature_radius;
        f.feature_scale = b.feature_scale;
    } else if (b.feature_radius == 0.0) {
        f.feature_center = a.feature_center;
        f.feature_radius = a.feature_radius;
        f.feature_scale = a.feature_scale;
    } else {
        f.feature_center = a.feature_center;
        f.feature_radius = std::max(a.feature_radius + std::sqrt(dist2(a.feature_center, b.feature_center)),
                                    b.feature_radius + std::sqrt(dist2(a.feature_center, b.feature_center)));
        f.feature_scale = std::min(a.feature_scale, b.feature_scale);
    }
    f.name = a.name + "*" + b.name;
    return f;
}

// Tiny expression registry for configs: "one", "const:c",
// "gauss_bump:amp[,width]", "wiggle:amp[,k[,width]]".
inline Density density_from_expression(const std::string& expr, int d) {
    auto parse_args = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    const auto colon = expr.find(':');
    const std::string head = expr.substr(0, colon);
    const std::string args = (colon == std::string::npos) ? "" : expr.substr(colon + 1);
    if (head == "one") return density_const(1.0, d);
    if (head == "const") return density_const(parse_args(args).at(0), d);
    if (head == "gauss_bump") {
        auto a = parse_args(args);
        return density_gauss_bump(d, a.at(0), a.size() > 1 ? a[1] : 1.0);
    }
    if (head == "wiggle") {
        auto a = parse_args(args);
        return density_wiggle(d, a.at(0), a.size() > 1 ? a[1] : 2.0, a.size() > 2 ? a[2] : 3.0);
    }
    throw std::invalid_argument("density_from_expression: unknown expression '" + expr + "'");
}

} // namespace rdlab
