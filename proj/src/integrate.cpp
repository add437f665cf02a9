#include "uaos/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uaos {

namespace {

constexpr double kBlowupGuard = 1e12;

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void axpy(StateVec& y, double a, const StateVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

StateVec hermite(double t, double t0, double t1, const StateVec& x0, const StateVec& f0,
                 const StateVec& x1, const StateVec& f1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    StateVec out(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i)
        out[i] = h00 * x0[i] + h * h10 * f0[i] + h01 * x1[i] + h * h11 * f1[i];
    return out;
}

/// Dense LU solve with partial pivoting (tiny systems).
void lu_solve(std::vector<double> A, StateVec b, StateVec& out) {
    const std::size_t n = b.size();
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(A[r * n + c]) > std::fabs(A[p * n + c])) p = r;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[c * n + j], A[p * n + j]);
            std::swap(b[c], b[p]);
        }
        double d = A[c * n + c];
        if (d == 0.0) throw std::runtime_error("integrate_ode: singular step matrix");
        for (std::size_t r = c + 1; r < n; ++r) {
            double m = A[r * n + c] / d;
            if (m == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) A[r * n + j] -= m * A[c * n + j];
            b[r] -= m * b[c];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t j = ri + 1; j < n; ++j) s -= A[ri * n + j] * out[j];
        out[ri] = s / A[ri * n + ri];
    }
}

/// Forward-difference Jacobian of the vector field.
std::vector<double> fd_jacobian(const OdeSystem& sys, const StateVec& x, const StateVec& f0) {
    const std::size_t n = x.size();
    std::vector<double> J(n * n);
    StateVec xp = x;
    for (std::size_t j = 0; j < n; ++j) {
        double delta = 1e-7 * std::max(std::fabs(x[j]), 1.0);
        xp[j] = x[j] + delta;
        StateVec fp = sys.field(xp);
        xp[j] = x[j];
        for (std::size_t i = 0; i < n; ++i) J[i * n + j] = (fp[i] - f0[i]) / delta;
    }
    return J;
}

void record_knot(const OdeSystem& sys, const std::shared_ptr<Trajectory::Data>& data,
                 double t, const StateVec& x, const StateVec& deriv) {
    for (double v : x) {
        if (!std::isfinite(v) || std::fabs(v) > kBlowupGuard)
            throw std::runtime_error("integrate_ode: solution blow-up at t = " +
                                     std::to_string(t));
    }
    if (sys.in_domain && !(*sys.in_domain)(x)) data->domain_violations.push_back(t);
    data->times.push_back(t);
    data->states.push_back(x);
    data->derivs.push_back(deriv);
    data->outputs.push_back(sys.output(x));
}

/// L-stable semi-implicit Rosenbrock 2(3) continuation from (t, x) to t_f.
void rosenbrock_advance(const OdeSystem& sys, const IntegratorConfig& cfg,
                        const std::shared_ptr<Trajectory::Data>& data, double t, StateVec x) {
    const double d = 1.0 / (2.0 + std::sqrt(2.0));
    const double e32 = 6.0 + std::sqrt(2.0);
    const std::size_t n = x.size();
    const double hmin = 1e-14 * std::max(1.0, cfg.t_f);
    double h = std::min(cfg.max_step, cfg.t_f - t);
    StateVec F0 = sys.field(x), F1(n), F2(n), k1(n), k2(n), k3(n), rhs(n), xnew(n);

    while (t < cfg.t_f - 1e-12 * std::max(1.0, cfg.t_f)) {
        h = std::min(h, cfg.t_f - t);
        if (h < hmin)
            throw std::runtime_error(
                "integrate_ode: step size underflow at t = " + std::to_string(t) +
                " (possible finite-time blow-up)");
        std::vector<double> J = fd_jacobian(sys, x, F0);
        std::vector<double> W(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                W[i * n + j] = (i == j ? 1.0 : 0.0) - h * d * J[i * n + j];

        lu_solve(W, F0, k1);
        xnew = x;
        axpy(xnew, 0.5 * h, k1);
        F1 = sys.field(xnew);
        rhs = F1;
        axpy(rhs, -1.0, k1);
        lu_solve(W, rhs, k2);
        axpy(k2, 1.0, k1);
        xnew = x;
        axpy(xnew, h, k2);
        bool finite = true;
        for (double v : xnew) finite = finite && std::isfinite(v);
        double err = 1e10;
        if (finite) {
            F2 = sys.field(xnew);
            rhs = F2;
            for (std::size_t i = 0; i < n; ++i)
                rhs[i] += -e32 * (k2[i] - F1[i]) - 2.0 * (k1[i] - F0[i]);
            lu_solve(W, rhs, k3);
            // Filter the embedded estimate through W^{-1}: this damps the
            // contribution of fast components relaxing onto their slow
            // manifold (for which the raw estimate is h-independent and
            // would otherwise stall the controller) while leaving nonstiff
            // components essentially unchanged (W ~ I).
            StateVec raw(n), filt(n);
            for (std::size_t i = 0; i < n; ++i)
                raw[i] = h / 6.0 * (k1[i] - 2.0 * k2[i] + k3[i]);
            lu_solve(W, raw, filt);
            err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double sc = cfg.abs_tol +
                            cfg.rel_tol * std::max(std::fabs(x[i]), std::fabs(xnew[i]));
                double q = filt[i] / sc;
                err += q * q;
            }
            err = std::sqrt(err / n);
            if (!std::isfinite(err)) err = 1e10;
        }
        if (err <= 1.0) {
            t += h;
            x = xnew;
            F0 = F2;
            record_knot(sys, data, t, x, F0);
            double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -1.0 / 3.0), 0.2, 5.0);
            h = std::min(h * fac, cfg.max_step);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.1, 1.0);
        }
    }
}

}  // namespace

void IntegratorConfig::validate(double delay_r) const {
    if (rel_tol <= 0.0 || abs_tol <= 0.0 || max_step <= 0.0)
        throw std::invalid_argument("IntegratorConfig: tolerances and max_step must be > 0");
    if (t_f <= 0.0) throw std::invalid_argument("IntegratorConfig: t_f must be > 0");
    if (delay_r > 0.0) {
        if (dde_step <= 0.0 || dde_step > delay_r + 1e-12)
            throw std::invalid_argument("IntegratorConfig: dde_step must be in (0, r]");
        double ratio = delay_r / dde_step;
        if (std::fabs(ratio - std::round(ratio)) > 1e-9)
            throw std::invalid_argument("IntegratorConfig: r/dde_step must be an integer");
    }
}

StateVec Trajectory::dense(double t) const {
    const auto& ts = d_->times;
    const double slack = 1e-9 * std::max(1.0, std::fabs(ts.back()));
    if (t < ts.front() - slack || t > ts.back() + slack)
        throw std::invalid_argument("Trajectory::dense: t out of range");
    t = std::clamp(t, ts.front(), ts.back());
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t j = (it == ts.begin()) ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    if (j + 1 >= ts.size()) return d_->states.back();
    if (t == ts[j]) return d_->states[j];
    return hermite(t, ts[j], ts[j + 1], d_->states[j], d_->derivs[j], d_->states[j + 1],
                   d_->derivs[j + 1]);
}

StateVec dense_eval(const Trajectory& traj, double t) { return traj.dense(t); }

History Trajectory::history_at(double t) const {
    if (!is_delay()) throw std::logic_error("history_at: not a delay-system trajectory");
    if (t < 0.0 || t > t_f() + 1e-9 * std::max(1.0, t_f()))
        throw std::invalid_argument("history_at: t out of range");
    auto d = d_;
    return History(d->delay_r, d->n, [d, t](double s) {
        double tq = t + s;
        if (tq <= 0.0) return d->initial_history->query(tq);
        return Trajectory(d).dense(tq);
    });
}

StateVec Trajectory::output_at(double t) const {
    if (is_delay()) return d_->output_of_history(history_at(t));
    return d_->output_of_state(dense(t));
}

Trajectory integrate_ode(const OdeSystem& sys, const StateVec& x0,
                         const IntegratorConfig& cfg) {
    cfg.validate();
    require_dim(x0, static_cast<std::size_t>(sys.n), "integrate_ode: x0");
    require_finite(x0, "integrate_ode: x0");
    if (sys.in_domain && !(*sys.in_domain)(x0))
        throw std::invalid_argument("integrate_ode: x0 outside the system domain");

    auto data = std::make_shared<Trajectory::Data>();
    data->n = sys.n;
    data->k = sys.k;
    data->t_f = cfg.t_f;
    data->output_of_state = sys.output;

    const std::size_t n = static_cast<std::size_t>(sys.n);
    double t = 0.0;
    StateVec x = x0;
    StateVec k1 = eval_field(sys, x);
    data->times.push_back(0.0);
    data->states.push_back(x);
    data->derivs.push_back(k1);
    data->outputs.push_back(sys.output(x));

    if (cfg.method == OdeMethod::semi_implicit) {
        rosenbrock_advance(sys, cfg, data, t, x);
        return Trajectory(std::move(data));
    }

    double h = std::min(cfg.max_step, cfg.t_f);
    double err_prev = 1.0;
    const double hmin = 1e-14 * std::max(1.0, cfg.t_f);
    const double h_switch = 1e-9 * std::max(1.0, cfg.t_f);
    long attempts = 0;

    StateVec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xt(n), xnew(n);

    while (t < cfg.t_f - 1e-12 * std::max(1.0, cfg.t_f)) {
        h = std::min(h, cfg.t_f - t);
        ++attempts;
        if (cfg.method == OdeMethod::auto_switch &&
            (h < h_switch || attempts > cfg.step_budget)) {
            // Stiffness detected: continue with the L-stable scheme.
            rosenbrock_advance(sys, cfg, data, t, x);
            return Trajectory(std::move(data));
        }
        if (h < hmin)
            throw std::runtime_error(
                "integrate_ode: step size underflow at t = " + std::to_string(t) +
                " (possible finite-time blow-up)");

        xt = x;
        axpy(xt, h * a21, k1);
        k2 = sys.field(xt);

        xt = x;
        axpy(xt, h * a31, k1);
        axpy(xt, h * a32, k2);
        k3 = sys.field(xt);

        xt = x;
        axpy(xt, h * a41, k1);
        axpy(xt, h * a42, k2);
        axpy(xt, h * a43, k3);
        k4 = sys.field(xt);

        xt = x;
        axpy(xt, h * a51, k1);
        axpy(xt, h * a52, k2);
        axpy(xt, h * a53, k3);
        axpy(xt, h * a54, k4);
        k5 = sys.field(xt);

        xt = x;
        axpy(xt, h * a61, k1);
        axpy(xt, h * a62, k2);
        axpy(xt, h * a63, k3);
        axpy(xt, h * a64, k4);
        axpy(xt, h * a65, k5);
        k6 = sys.field(xt);

        xnew = x;
        axpy(xnew, h * b1, k1);
        axpy(xnew, h * b3, k3);
        axpy(xnew, h * b4, k4);
        axpy(xnew, h * b5, k5);
        axpy(xnew, h * b6, k6);
        k7 = sys.field(xnew);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(x[i]), std::fabs(xnew[i]));
            double q = e / sc;
            err += q * q;
        }
        err = std::sqrt(err / n);
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t += h;
            x = xnew;
            k1 = k7;  // FSAL
            record_knot(sys, data, t, x, k1);
            // PI step-size controller
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2) *
                         std::pow(std::max(err_prev, 1e-10), 0.04);
            fac = std::clamp(fac, 0.2, 5.0);
            h = std::min(h * fac, cfg.max_step);
            err_prev = std::max(err, 1e-10);
        } else {
            double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
            h *= fac;
        }
    }
    return Trajectory(std::move(data));
}

namespace {

/// History view used while advancing one RK4 stage of the method of steps:
/// past queries fall through to the stored solution / initial history,
/// queries at the leading edge return the stage state.
History stage_history(const std::shared_ptr<Trajectory::Data>& d, const History& h0,
                      double t_stage, double t_done, const StateVec& stage_state) {
    double r = d->delay_r;
    int n = d->n;
    auto data = d;
    History init = h0;
    StateVec edge = stage_state;
    return History(r, n, [data, init, t_stage, t_done, edge](double s) {
        double tq = t_stage + s;
        if (tq <= 0.0) return init.query(tq);
        if (tq <= t_done + 1e-12) {
            return Trajectory(std::static_pointer_cast<const Trajectory::Data>(data))
                .dense(std::min(tq, t_done));
        }
        // Intra-step query: interpolate linearly between the last completed
        // knot and the stage state.
        const StateVec& xa = data->states.back();
        double w = (t_stage > t_done) ? (tq - t_done) / (t_stage - t_done) : 1.0;
        StateVec out(init.query(0.0).size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (1.0 - w) * xa[i] + w * edge[i];
        return out;
    });
}

}  // namespace

Trajectory integrate_dde(const DelaySystem& sys, const History& h0,
                         const IntegratorConfig& cfg) {
    cfg.validate(sys.r);
    if (std::fabs(h0.r() - sys.r) > 1e-12)
        throw std::invalid_argument("integrate_dde: history horizon differs from system delay");
    if (sys.in_domain && !(*sys.in_domain)(h0))
        throw std::invalid_argument("integrate_dde: initial history outside the system domain");

    auto data = std::make_shared<Trajectory::Data>();
    data->n = sys.n;
    data->k = sys.k;
    data->t_f = cfg.t_f;
    data->delay_r = sys.r;
    data->initial_history = std::make_shared<History>(h0);
    data->output_of_history = sys.output;

    const double h = cfg.dde_step;
    const std::size_t n = static_cast<std::size_t>(sys.n);
    const long steps = static_cast<long>(std::ceil(cfg.t_f / h - 1e-9));

    double t = 0.0;
    StateVec x = h0.query(0.0);
    StateVec f0 = sys.field(stage_history(data, h0, 0.0, 0.0, x));
    data->times.push_back(0.0);
    data->states.push_back(x);
    data->derivs.push_back(f0);
    data->outputs.push_back(sys.output(h0));

    StateVec k1 = f0, k2(n), k3(n), k4(n), xs(n), xnew(n);
    for (long step = 0; step < steps; ++step) {
        double hs = std::min(h, cfg.t_f - t);
        k1 = data->derivs.back();

        xs = x;
        axpy(xs, 0.5 * hs, k1);
        k2 = sys.field(stage_history(data, h0, t + 0.5 * hs, t, xs));

        xs = x;
        axpy(xs, 0.5 * hs, k2);
        k3 = sys.field(stage_history(data, h0, t + 0.5 * hs, t, xs));

        xs = x;
        axpy(xs, hs, k3);
        k4 = sys.field(stage_history(data, h0, t + hs, t, xs));

        xnew = x;
        for (std::size_t i = 0; i < n; ++i)
            xnew[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        t += hs;
        x = xnew;
        for (double v : x) {
            if (!std::isfinite(v) || std::fabs(v) > kBlowupGuard)
                throw std::runtime_error("integrate_dde: solution blow-up at t = " +
                                         std::to_string(t));
        }
        data->times.push_back(t);
        data->states.push_back(x);
        // Derivative at the new knot, evaluated on the completed solution.
        StateVec fend = sys.field(stage_history(data, h0, t, t, x));
        data->derivs.push_back(fend);
        History xt = Trajectory(std::static_pointer_cast<const Trajectory::Data>(data))
                         .history_at(t);
        data->outputs.push_back(sys.output(xt));
        if (sys.in_domain && !(*sys.in_domain)(xt)) data->domain_violations.push_back(t);
    }
    return Trajectory(std::move(data));
}

}  // namespace uaos
