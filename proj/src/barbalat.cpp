#include "uaos/barbalat.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "uaos/catalog.hpp"

namespace uaos {

void Signal::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("Signal: dt must be > 0");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("Signal: values must be finite");
}

Signal make_signal(const std::string& name, double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("make_signal: dt and horizon must be > 0");
    if (horizon < dt)
        throw std::invalid_argument("make_signal: horizon must be at least dt");
    std::function<double(double)> f;
    if (name == "sin_t") {
        f = [](double t) { return std::sin(t); };
    } else if (name == "neg_floor_t") {
        f = [](double t) { return -std::floor(t + 1e-9); };
    } else if (name == "floor_t") {
        f = [](double t) { return std::floor(t + 1e-9); };
    } else if (name == "sin_t2") {
        f = [](double t) { return std::sin(t * t); };
    } else if (name == "neg_t") {
        f = [](double t) { return -t; };
    } else if (name == "t") {
        f = [](double t) { return t; };
    } else if (name == "inv_1pt") {
        f = [](double t) { return 1.0 / (1.0 + t); };
    } else if (name == "spike_train") {
        f = [](double t) { return spike_train_value(t); };
    } else if (name == "zero") {
        f = [](double) { return 0.0; };
    } else {
        throw std::invalid_argument("make_signal: unknown signal '" + name + "'");
    }
    Signal sig;
    sig.name = name;
    sig.dt = dt;
    const auto count = static_cast<std::size_t>(std::llround(horizon / dt)) + 1;
    sig.v.reserve(count);
    for (std::size_t j = 0; j < count; ++j) sig.v.push_back(f(j * dt));
    return sig;
}

std::vector<std::string> signal_names() {
    return {"sin_t", "neg_floor_t", "floor_t", "sin_t2", "neg_t",
            "t",     "inv_1pt",     "spike_train", "zero"};
}

const QucEntry* QucReport::find(double eps) const {
    for (const auto& e : per_eps)
        if (e.eps == eps) return &e;
    return nullptr;
}

namespace {

/// Largest rise v[j] - min(v[j-w .. j-1]) over the grid, for window size w,
/// via a monotonic deque (O(n)). Also reports the attaining pair.
struct WindowRise {
    double rise = -std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
};

WindowRise max_window_rise(const std::vector<double>& v, std::size_t w) {
    WindowRise best;
    std::deque<std::size_t> q;  // indices with increasing values
    for (std::size_t j = 1; j < v.size(); ++j) {
        std::size_t i = j - 1;
        while (!q.empty() && v[q.back()] >= v[i]) q.pop_back();
        q.push_back(i);
        while (q.front() + w < j) q.pop_front();
        double rise = v[j] - v[q.front()];
        if (rise > best.rise) {
            best.rise = rise;
            best.i = q.front();
            best.j = j;
        }
    }
    return best;
}

}  // namespace

QucReport quc_verdict(const Signal& sig, const std::vector<double>& eps_list) {
    sig.validate();
    if (sig.horizon() < 10.0 * sig.dt)
        throw std::invalid_argument("quc_verdict: horizon shorter than 10*dt");
    for (double e : eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("quc_verdict: eps must be > 0");

    QucReport rep;
    rep.name = sig.name;
    rep.dt = sig.dt;
    rep.horizon = sig.horizon();
    rep.quc = true;

    const std::size_t n = sig.v.size();
    for (double eps : eps_list) {
        QucEntry entry;
        entry.eps = eps;
        double accepted = 0.0;
        WindowRise fail;
        for (std::size_t w = 1; w < 2 * n; w *= 2) {
            WindowRise r = max_window_rise(sig.v, std::min(w, n - 1));
            if (r.rise < eps) {
                accepted = std::min(w, n - 1) * sig.dt;
                if (w >= n - 1) break;  // whole horizon accepted
            } else {
                fail = r;
                break;  // windows nest: larger ones also fail
            }
        }
        entry.ok = accepted > 0.0;
        if (entry.ok) {
            entry.delta = accepted;
        } else {
            entry.witness_t0 = fail.i * sig.dt;
            entry.witness_t = fail.j * sig.dt;
            rep.quc = false;
        }
        rep.per_eps.push_back(entry);
    }
    return rep;
}

Prop2Result prop2_check(const Signal& sig, double M) {
    sig.validate();
    if (M < 0.0) throw std::invalid_argument("prop2_check: M must be >= 0");
    Prop2Result res;
    res.ok = true;
    for (std::size_t j = 1; j < sig.v.size(); ++j) {
        double inc = (sig.v[j] - M * (j * sig.dt)) - (sig.v[j - 1] - M * ((j - 1) * sig.dt));
        if (inc > res.worst_increase) {
            res.worst_increase = inc;
            res.witness_t = j * sig.dt;
        }
    }
    res.ok = res.worst_increase <= 1e-12;
    return res;
}

Lemma3Report lemma3_check(const Signal& sig, const ComparisonFn& rho, bool rho_monotone) {
    sig.validate();
    for (double x : sig.v)
        if (x < 0.0)
            throw std::invalid_argument("lemma3_check: signal must be nonnegative");

    Lemma3Report rep;
    rep.signal = sig.name;
    rep.rho_monotone = rho_monotone;

    // Trapezoid estimate of the integral of rho(f), with a last-quarter
    // growth diagnostic standing in for "finite integral".
    const std::size_t n = sig.v.size();
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = rho(sig.v[j]);
    double total = 0.0, tail_part = 0.0;
    const std::size_t q3 = (3 * (n - 1)) / 4;
    for (std::size_t j = 1; j < n; ++j) {
        double piece = 0.5 * (g[j - 1] + g[j]) * sig.dt;
        total += piece;
        if (j > q3) tail_part += piece;
    }
    rep.integral = total;
    rep.tail_growth_frac = total > 0.0 ? tail_part / total : 0.0;
    rep.integral_finite = total == 0.0 || rep.tail_growth_frac < 0.01;

    rep.quc_f = quc_verdict(sig);
    Signal neg = sig;
    neg.name = "-" + sig.name;
    for (double& x : neg.v) x = -x;
    rep.quc_neg_f = quc_verdict(neg);

    for (double x : sig.v) rep.f_sup = std::max(rep.f_sup, x);
    const bool bounded = true;  // sampled signals are always bounded; sup recorded

    rep.hypotheses_met = rep.integral_finite && rep.quc_f.quc && rep.quc_neg_f.quc &&
                         (rho_monotone || bounded);

    const std::size_t tail_from =
        static_cast<std::size_t>(std::floor((1.0 - rep.tail_window_frac) * (n - 1)));
    for (std::size_t j = tail_from; j < n; ++j)
        rep.tail_sup = std::max(rep.tail_sup, sig.v[j]);

    rep.tail_expected_zero = rep.hypotheses_met;
    rep.conclusion = rep.hypotheses_met ? "tail-should-vanish" : "no-conclusion";
    return rep;
}

}  // namespace uaos
