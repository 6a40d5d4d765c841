#pragma once

// Ambient-space points and the (n, d, alpha) parameter triple shared by all
// modules.  Points are fixed-capacity so node sums do not allocate.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdlab {

inline constexpr int kMaxDim = 12;

struct Vec {
    std::array<double, kMaxDim> c{};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) {
        if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("Vec: bad dimension");
    }
    Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
        if (n > kMaxDim) throw std::invalid_argument("Vec: bad dimension");
        int i = 0;
        for (double v : xs) c[i++] = v;
    }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) c[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += c[i] * c[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) {
        const double t = a.c[i] - b.c[i];
        s += t * t;
    }
    return s;
}

inline Vec unit_axis(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
}

// Parameter triple (n, d, alpha).  d may be fractional (self-similar sets);
// n - d - 2 > 0 is required everywhere.
struct GeometryParams {
    int n = 0;        // ambient dimension, >= 3
    double d = 0;     // support dimension, 0 < d < n - 2
    double alpha = 0; // kernel exponent, > 0

    GeometryParams() = default;
    GeometryParams(int n_, double d_, double alpha_) : n(n_), d(d_), alpha(alpha_) { validate(); }

    void validate() const {
        if (n < 3) throw std::invalid_argument("GeometryParams: n must be >= 3");
        if (!(d > 0.0) || !(d < n - 2.0))
            throw std::invalid_argument("GeometryParams: need 0 < d < n - 2");
        if (!(alpha > 0.0)) throw std::invalid_argument("GeometryParams: alpha must be > 0");
    }

    double gamma() const { return d + 2.0 - n; }
    double codim2() const { return n - d - 2.0; } // n - d - 2
    // Exact comparison on purpose: the anomaly is an algebraic identity, not a limit.
    bool magic() const { return alpha == n - d - 2.0; }

    static GeometryParams with_magic_alpha(int n, double d) {
        return GeometryParams(n, d, n - d - 2.0);
    }
};

// Evaluation point plus its distance to the support.  All formulas live on
// the complement of the support, so delta > 0 always.
struct EvalPoint {
    Vec x;
    double delta = 0;
    bool usable = true;
};

} // namespace rdlab
