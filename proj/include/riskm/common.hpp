#ifndef RISKM_COMMON_HPP
#define RISKM_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace riskm {

// Global comparison tolerance. All piecewise data is double; knots such as
// 2/3 are not exact binary fractions, so every comparison goes through this.
inline constexpr double kEps = 1e-9;

inline bool approx_eq(double a, double b, double tol = kEps) {
    return std::fabs(a - b) <= tol;
}

inline bool approx_le(double a, double b, double tol = kEps) {
    return a <= b + tol;
}

inline bool approx_lt(double a, double b, double tol = kEps) {
    return a < b - tol;
}

// Subinterval of the real line, a <= b. a == b encodes a point.
struct Interval {
    double a = 0.0;
    double b = 0.0;

    double width() const { return b - a; }
    bool degenerate(double tol = kEps) const { return width() <= tol; }
    bool contains(double p, double tol = kEps) const {
        return p >= a - tol && p <= b + tol;
    }
};

// One linear segment: maps t in [t0, t1] linearly from v0 to v1.
struct LinearPiece {
    double t0 = 0.0;
    double t1 = 0.0;
    double v0 = 0.0;
    double v1 = 0.0;

    double width() const { return t1 - t0; }
    double slope() const { return (v1 - v0) / (t1 - t0); }
    double at(double t) const {
        if (t1 <= t0) return v0;
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
};

// Exact integral over [a,b] of the product of two linear functions given by
// their endpoint values.
inline double integral_product_linear(double a, double b, double fa, double fb,
                                      double ga, double gb) {
    const double w = b - a;
    return w / 6.0 * (2.0 * fa * ga + fa * gb + fb * ga + 2.0 * fb * gb);
}

// Exact integral over [a,b] of a single linear function (trapezoid).
inline double integral_linear(double a, double b, double fa, double fb) {
    return (b - a) * 0.5 * (fa + fb);
}

[[noreturn]] inline void throw_domain(const std::string& msg) {
    throw std::invalid_argument(msg);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw_domain(msg);
}

}  // namespace riskm

#endif  // RISKM_COMMON_HPP
