#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "uaos/state.hpp"

namespace uaos {

/// A continuous function on [-r, 0] into R^n, used as the state of a delay
/// system. The backing evaluator is typically a polynomial family member or
/// a piecewise-cubic window of a computed solution.
class History {
public:
    History(double r, int n, std::function<StateVec(double)> eval)
        : r_(r), n_(n), eval_(std::move(eval)) {
        if (r_ <= 0.0) throw std::invalid_argument("History: delay horizon must be > 0");
    }

    double r() const { return r_; }
    int dim() const { return n_; }

    StateVec query(double s) const {
        if (s < -r_ - 1e-9 || s > 1e-9)
            throw std::invalid_argument("History::query: s outside [-r, 0]");
        s = std::min(0.0, std::max(-r_, s));
        StateVec v = eval_(s);
        require_dim(v, static_cast<std::size_t>(n_), "History::query");
        return v;
    }

    /// Max of |x(s)| over a dense grid on [-r, 0].
    double sup_norm(int grid = 256) const {
        double m = 0.0;
        for (int i = 0; i <= grid; ++i) {
            double s = -r_ + r_ * static_cast<double>(i) / grid;
            m = std::max(m, norm2(query(s)));
        }
        return m;
    }

    static History zero(double r, int n) {
        return History(r, n, [n](double) { return StateVec(n, 0.0); });
    }

    static History constant(double r, const StateVec& c) {
        return History(r, static_cast<int>(c.size()), [c](double) { return c; });
    }

    /// Scaled copy (used when rescaling sampled histories into a domain).
    History scaled(double factor) const {
        auto base = eval_;
        return History(r_, n_, [base, factor](double s) {
            StateVec v = base(s);
            for (double& e : v) e *= factor;
            return v;
        });
    }

private:
    double r_;
    int n_;
    std::function<StateVec(double)> eval_;
};

/// Finite-dimensional autonomous system with output.
struct OdeSystem {
    std::string name;
    int n = 0;  // state dimension
    int k = 0;  // output dimension
    std::function<StateVec(const StateVec&)> field;
    std::function<StateVec(const StateVec&)> output;
    std::optional<std::function<bool(const StateVec&)>> in_domain;
    std::map<std::string, double> params;
};

/// Time-delay system with state space C([-r,0]; R^n) and output.
struct DelaySystem {
    std::string name;
    int n = 0;
    int k = 0;
    double r = 0.0;  // delay horizon
    std::function<StateVec(const History&)> field;
    std::function<StateVec(const History&)> output;
    std::optional<std::function<bool(const History&)>> in_domain;
    std::map<std::string, double> params;
};

/// Evaluate the vector field with dimension and finiteness checks.
inline StateVec eval_field(const OdeSystem& sys, const StateVec& x) {
    require_dim(x, static_cast<std::size_t>(sys.n), sys.name + ".eval_field");
    StateVec dx = sys.field(x);
    require_dim(dx, static_cast<std::size_t>(sys.n), sys.name + ".field result");
    require_finite(dx, sys.name + ".field result");
    return dx;
}

inline StateVec eval_output(const OdeSystem& sys, const StateVec& x) {
    require_dim(x, static_cast<std::size_t>(sys.n), sys.name + ".eval_output");
    StateVec y = sys.output(x);
    require_dim(y, static_cast<std::size_t>(sys.k), sys.name + ".output result");
    return y;
}

}  // namespace uaos
