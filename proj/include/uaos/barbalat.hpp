#pragma once

#include <string>
#include <vector>

#include "uaos/comparison.hpp"

namespace uaos {

/// Uniformly sampled scalar signal: value v[j] at time j*dt.
struct Signal {
    std::string name;
    double dt = 0.0;
    std::vector<double> v;

    double horizon() const { return v.empty() ? 0.0 : dt * (v.size() - 1); }
    void validate() const;
};

/// Signal factory. Recognized names:
///   sin_t, neg_floor_t, floor_t, sin_t2, neg_t, t, inv_1pt, spike_train, zero
Signal make_signal(const std::string& name, double dt, double horizon);
std::vector<std::string> signal_names();

inline const std::vector<double> kDefaultEps = {1.0, 0.5, 0.25, 0.1};

/// Per-epsilon quasi-uniform-continuity search result.
struct QucEntry {
    double eps = 0.0;
    bool ok = false;
    double delta = 0.0;       // largest accepted window, when ok
    double witness_t0 = 0.0;  // violating pair, when !ok
    double witness_t = 0.0;
};

struct QucReport {
    std::string name;
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<QucEntry> per_eps;
    bool quc = false;  // all epsilons admit a window

    const QucEntry* find(double eps) const;
};

/// For each epsilon, searches window sizes delta over {dt, 2dt, 4dt, ...}:
/// delta is accepted when f(t) - f(t0) < eps for every sampled pair
/// t0 <= t <= t0 + delta. Verdicts are relative to the grid and horizon.
QucReport quc_verdict(const Signal& sig, const std::vector<double>& eps_list = kDefaultEps);

struct Prop2Result {
    bool ok = false;
    double worst_increase = 0.0;  // largest observed increase of f(t) - M t
    double witness_t = 0.0;
};

/// Sufficient condition: f(t) - M t non-increasing on the grid (slack 1e-12).
Prop2Result prop2_check(const Signal& sig, double M);

struct Lemma3Report {
    std::string signal;
    double integral = 0.0;          // trapezoid estimate of the integral of rho(f)
    bool integral_finite = false;   // last-quarter growth < 1% of total
    double tail_growth_frac = 0.0;
    QucReport quc_f;
    QucReport quc_neg_f;
    bool rho_monotone = false;
    double f_sup = 0.0;
    bool hypotheses_met = false;
    double tail_sup = 0.0;          // sup of f over the final window
    double tail_window_frac = 0.05;
    bool tail_expected_zero = false;  // the conclusion "f(t) -> 0" applies
    std::string conclusion;           // "tail-should-vanish" | "no-conclusion"
};

/// Evaluates the hypotheses and the predicted conclusion of the relaxed
/// vanishing-signal lemma: integral of rho(f) finite, f and -f quasi-uniformly
/// continuous, and rho non-decreasing or f bounded imply f(t) -> 0.
Lemma3Report lemma3_check(const Signal& sig, const ComparisonFn& rho, bool rho_monotone);

}  // namespace uaos
