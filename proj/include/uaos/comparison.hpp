#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace uaos {

/// Scalar comparison function used in stability certificates.
/// Supported shapes cover everything the catalog certificates need:
///   linear       c*s
///   quadratic    c*s^2
///   power        c*s^p
///   affine_capped  min(c*s, cap)
///   constant     c            (used only for constant gamma bounds)
class ComparisonFn {
public:
    enum class Kind { linear, quadratic, power, affine_capped, constant };

    static ComparisonFn linear(double c) { return {Kind::linear, c, 1.0, 0.0}; }
    static ComparisonFn quadratic(double c) { return {Kind::quadratic, c, 2.0, 0.0}; }
    static ComparisonFn power(double c, double p) { return {Kind::power, c, p, 0.0}; }
    static ComparisonFn affine_capped(double c, double cap) {
        return {Kind::affine_capped, c, 1.0, cap};
    }
    static ComparisonFn constant(double c) { return {Kind::constant, c, 0.0, 0.0}; }

    double operator()(double s) const {
        switch (kind_) {
            case Kind::linear: return c_ * s;
            case Kind::quadratic: return c_ * s * s;
            case Kind::power: return c_ * std::pow(s, p_);
            case Kind::affine_capped: return std::min(c_ * s, cap_);
            case Kind::constant: return c_;
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    double coeff() const { return c_; }
    bool is_constant() const { return kind_ == Kind::constant; }

    /// True if the function is non-decreasing everywhere.
    bool monotone() const { return c_ >= 0.0; }

    /// Grid check for membership in class K-infinity: zero at zero and
    /// strictly increasing over s in [1e-6, 1e6].
    bool looks_class_kinf() const {
        if (kind_ == Kind::constant || kind_ == Kind::affine_capped) return false;
        if ((*this)(0.0) != 0.0) return false;
        double prev = 0.0;
        for (double s = 1e-6; s <= 1.0000001e6; s *= 10.0) {
            double v = (*this)(s);
            if (!(v > prev)) return false;
            prev = v;
        }
        return true;
    }

    /// Grid check for a continuous positive-definite function:
    /// zero at zero and positive for s > 0.
    bool looks_positive_definite() const {
        if (kind_ == Kind::constant) return false;
        if ((*this)(0.0) != 0.0) return false;
        for (double s = 1e-6; s <= 1.0000001e6; s *= 10.0)
            if (!((*this)(s) > 0.0)) return false;
        return true;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::linear: return std::to_string(c_) + "*s";
            case Kind::quadratic: return std::to_string(c_) + "*s^2";
            case Kind::power: return std::to_string(c_) + "*s^" + std::to_string(p_);
            case Kind::affine_capped:
                return "min(" + std::to_string(c_) + "*s, " + std::to_string(cap_) + ")";
            case Kind::constant: return std::to_string(c_);
        }
        return "?";
    }

private:
    ComparisonFn(Kind k, double c, double p, double cap) : kind_(k), c_(c), p_(p), cap_(cap) {}

    Kind kind_;
    double c_;
    double p_;
    double cap_;
};

/// Solve a(s) = v for s >= 0 by bisection, growing the bracket geometrically.
/// Requires v >= 0 and a non-decreasing on the bracket.
inline double inverse_comparison(const ComparisonFn& a, double v) {
    if (v < 0.0) throw std::invalid_argument("inverse_comparison: v must be >= 0");
    if (v == 0.0) return 0.0;
    double hi = 1.0;
    while (a(hi) < v) {
        hi *= 2.0;
        if (hi > 1e18)
            throw std::runtime_error("inverse_comparison: no bracket below s = 1e18");
    }
    double lo = 0.0;
    const double tol = 1e-12 * std::max(1.0, v);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double val = a(mid);
        if (std::fabs(val - v) <= tol) return mid;
        (val < v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace uaos
