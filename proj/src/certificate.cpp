#include "uaos/certificate.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "uaos/sampling.hpp"

namespace uaos {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Accumulates the worst (smallest) margin of a one-sided condition
/// lhs <= rhs + tol, with tol = tol.abs + tol.rel*|rhs|.
class ConditionAcc {
public:
    ConditionAcc(std::string id, CheckTol tol) : tol_(tol) {
        r_.id = std::move(id);
        r_.margin = std::numeric_limits<double>::infinity();
        r_.tol_at_worst = tol.abs;
        r_.witness_t = kNaN;
    }

    void add(double lhs, double rhs, double t, const StateVec& x) {
        ++r_.samples;
        double margin = rhs - lhs;
        if (margin < r_.margin) {
            r_.margin = margin;
            r_.tol_at_worst = tol_.abs + tol_.rel * std::fabs(rhs);
            r_.witness_t = t;
            r_.witness_state = x;
        }
    }

    ConditionResult finish() {
        if (r_.samples == 0) {
            r_.margin = 0.0;
            r_.note = "no samples";
        }
        r_.pass = r_.margin >= -r_.tol_at_worst;
        return r_;
    }

    ConditionResult finish_into(CheckReport& rep) {
        ConditionResult res = finish();
        rep.overall = rep.overall && res.pass;
        rep.conditions.push_back(res);
        return rep.conditions.back();
    }

private:
    ConditionResult r_;
    CheckTol tol_;
};

double out_norm(const OdeSystem& sys, const StateVec& x) {
    return norm2(sys.output(x));
}

double out_norm(const DelaySystem& sys, const History& h) {
    return norm2(sys.output(h));
}

/// Times at which trajectory Dini estimates are taken: a subsample of the
/// knots that leaves room for the largest forward step.
std::vector<double> dini_times(const Trajectory& traj, double hmax, std::size_t cap = 64) {
    std::vector<double> ts;
    const auto& knots = traj.times();
    std::size_t stride = std::max<std::size_t>(1, knots.size() / cap);
    for (std::size_t i = 0; i < knots.size(); i += stride)
        if (knots[i] + hmax <= traj.t_f()) ts.push_back(knots[i]);
    return ts;
}

void require_target(const Certificate& cert, Target t, const char* fn) {
    if (cert.target != t)
        throw std::invalid_argument(std::string(fn) + ": certificate targets " +
                                    target_name(cert.target));
}

void require_class(const std::optional<ComparisonFn>& f, const char* what, bool kinf) {
    if (!f) return;
    if (kinf ? !f->looks_class_kinf() : !f->looks_positive_definite())
        throw std::invalid_argument(std::string("Certificate: ") + what +
                                    " fails its comparison-class check");
}

/// Monotone decrease of a scalar sequence along trajectory knots:
/// worst margin is min over pairs t1 <= t2 of F(t1) - F(t2).
void add_monotone_decrease(ConditionAcc& acc, const Trajectory& traj,
                           const std::vector<double>& values) {
    const auto& ts = traj.times();
    double run_min = values.empty() ? 0.0 : values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        acc.add(values[i], run_min, ts[i], traj.states()[i]);
        run_min = std::min(run_min, values[i]);
    }
}

}  // namespace

std::string target_name(Target t) {
    switch (t) {
        case Target::thm1: return "thm1";
        case Target::thm2: return "thm2";
        case Target::prop1: return "prop1";
        case Target::cor1: return "cor1";
        case Target::cor2: return "cor2";
    }
    return "?";
}

void Certificate::validate() const {
    auto need = [this](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument("Certificate '" + name + "' targeting " +
                                        target_name(target) + " is missing " + what);
    };
    switch (target) {
        case Target::thm1:
            need(V.has_value(), "V");
            need(W.has_value(), "W");
            need(rho.has_value(), "rho");
            need(a.has_value(), "a");
            break;
        case Target::thm2:
            need(V.has_value(), "V");
            need(W.has_value(), "W");
            need(rho.has_value(), "rho");
            need(a.has_value(), "a");
            need(b.has_value(), "b");
            need(gamma.has_value(), "gamma");
            if (!rho_monotone) need(zeta.has_value(), "zeta (rho not monotone)");
            break;
        case Target::prop1:
            need(W.has_value() || Wh.has_value(), "W");
            need(a.has_value(), "a");
            need(b.has_value(), "b");
            break;
        case Target::cor1:
            need(Vh.has_value(), "V functional");
            need(Wh.has_value(), "W functional");
            need(rho.has_value(), "rho");
            need(a.has_value(), "a");
            break;
        case Target::cor2:
            need(Vh.has_value(), "V functional");
            need(Wh.has_value(), "W functional");
            need(rho.has_value(), "rho");
            need(a.has_value(), "a");
            need(b.has_value(), "b");
            need(gamma.has_value(), "gamma");
            if (!rho_monotone) need(zeta.has_value(), "zeta (rho not monotone)");
            break;
    }
    require_class(rho, "rho", false);
    require_class(a, "a", true);
    require_class(b, "b", true);
    require_class(zeta, "zeta", false);
    // gamma is merely continuous nonnegative; constants are allowed.
}

const ConditionResult* CheckReport::find(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return &c;
    return nullptr;
}

double dini_derivative(const std::function<double(const StateVec&)>& F,
                       const Trajectory& traj, double t,
                       const std::vector<double>& h_list) {
    double hmax = 0.0;
    for (double h : h_list) hmax = std::max(hmax, h);
    if (t + hmax > traj.t_f() + 1e-12)
        throw std::invalid_argument("dini_derivative: t + max step exceeds horizon");
    double f0 = F(traj.dense(t));
    double best = -std::numeric_limits<double>::infinity();
    for (double h : h_list) best = std::max(best, (F(traj.dense(t + h)) - f0) / h);
    return best;
}

double dini_derivative(const ScalarField& F, const Trajectory& traj, double t,
                       const std::vector<double>& h_list) {
    return dini_derivative(F.eval, traj, t, h_list);
}

double dini_derivative_history(const std::function<double(const History&)>& F,
                               const Trajectory& traj, double t,
                               const std::vector<double>& h_list) {
    double hmax = 0.0;
    for (double h : h_list) hmax = std::max(hmax, h);
    if (t + hmax > traj.t_f() + 1e-12)
        throw std::invalid_argument("dini_derivative_history: t + max step exceeds horizon");
    double f0 = F(traj.history_at(t));
    double best = -std::numeric_limits<double>::infinity();
    for (double h : h_list) best = std::max(best, (F(traj.history_at(t + h)) - f0) / h);
    return best;
}

namespace {

/// Shared body for thm1/thm2 finite-dimensional checks.
CheckReport check_fd(const OdeSystem& sys, const Certificate& cert, double R, int N,
                     const std::vector<Trajectory>& trajs, CheckTol tol,
                     std::uint64_t seed) {
    cert.validate();
    CheckReport rep;
    rep.system = sys.name;
    rep.certificate = cert.name;

    std::vector<StateVec> samples;
    if (N > 0) samples = sample_domain(sys, R, N, seed);

    auto each_state = [&](auto&& fn) {
        for (const auto& x : samples) fn(x, kNaN);
        for (const auto& tr : trajs) {
            const auto& ts = tr.times();
            for (std::size_t i = 0; i < ts.size(); ++i) fn(tr.states()[i], ts[i]);
        }
    };

    const bool thm2 = cert.target == Target::thm2;

    if (thm2) {
        ConditionAcc lower("bound-lower a(|h|) <= V", tol), upper("bound-upper V <= b(|x|)", tol);
        each_state([&](const StateVec& x, double t) {
            double v = cert.V->eval(x);
            lower.add((*cert.a)(out_norm(sys, x)), v, t, x);
            upper.add(v, (*cert.b)(norm2(x)), t, x);
        });
        lower.finish_into(rep);
        upper.finish_into(rep);
    }

    {
        ConditionAcc acc("output-bound a(|h|) <= W", tol);
        each_state([&](const StateVec& x, double t) {
            acc.add((*cert.a)(out_norm(sys, x)), cert.W->eval(x), t, x);
        });
        acc.finish_into(rep);
    }

    {
        ConditionAcc acc("decay dV <= -rho(W)", tol);
        if (cert.V->dot) {
            each_state([&](const StateVec& x, double t) {
                acc.add(cert.V->dot(x), -(*cert.rho)(cert.W->eval(x)), t, x);
            });
        } else {
            for (const auto& tr : trajs) {
                for (double t : dini_times(tr, kDiniSteps[0])) {
                    StateVec x = tr.dense(t);
                    acc.add(dini_derivative(*cert.V, tr, t), -(*cert.rho)(cert.W->eval(x)),
                            t, x);
                }
            }
        }
        acc.finish_into(rep);
    }

    if (!thm2) {
        // Monotonicity: dW <= 0 pointwise when a closed form exists, and W
        // non-increasing along every supplied trajectory.
        ConditionAcc acc("monotone W non-increasing", tol);
        if (cert.W->dot)
            each_state([&](const StateVec& x, double t) { acc.add(cert.W->dot(x), 0.0, t, x); });
        for (const auto& tr : trajs) {
            std::vector<double> w;
            w.reserve(tr.states().size());
            for (const auto& x : tr.states()) w.push_back(cert.W->eval(x));
            add_monotone_decrease(acc, tr, w);
        }
        acc.finish_into(rep);
    } else {
        const bool upper_side = cert.side == GrowthSide::upper;
        ConditionAcc acc(upper_side ? "growth-upper dW <= gamma(V)" : "growth-lower dW >= -gamma(V)", tol);
        auto add_at = [&](double dw, const StateVec& x, double t) {
            double g = (*cert.gamma)(cert.V->eval(x));
            if (upper_side)
                acc.add(dw, g, t, x);
            else
                acc.add(-g, dw, t, x);
        };
        if (cert.W->dot) {
            each_state([&](const StateVec& x, double t) { add_at(cert.W->dot(x), x, t); });
        } else {
            for (const auto& tr : trajs)
                for (double t : dini_times(tr, kDiniSteps[0]))
                    add_at(dini_derivative(*cert.W, tr, t), tr.dense(t), t);
        }
        acc.finish_into(rep);

        if (!cert.rho_monotone) {
            ConditionAcc zacc("dominance W <= zeta(V)", tol);
            each_state([&](const StateVec& x, double t) {
                zacc.add(cert.W->eval(x), (*cert.zeta)(cert.V->eval(x)), t, x);
            });
            zacc.finish_into(rep);
        }
    }

    // Sampled sup of V+W per radius shell (informational; the standing
    // boundedness hypothesis is only observed, not proven).
    {
        ConditionResult info;
        info.id = "sup(V+W) per shell";
        info.pass = true;
        info.witness_t = kNaN;
        std::ostringstream os;
        for (double frac : {0.25, 0.5, 0.75, 1.0}) {
            double sup = 0.0;
            for (const auto& x : samples)
                if (norm2(x) <= frac * R)
                    sup = std::max(sup, cert.V->eval(x) + cert.W->eval(x));
            os << "s=" << frac * R << ":" << sup << " ";
            info.margin = sup;
        }
        info.samples = static_cast<long>(samples.size());
        info.note = os.str();
        rep.conditions.push_back(info);
    }

    return rep;
}

}  // namespace

CheckReport check_thm1(const OdeSystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol,
                       std::uint64_t seed) {
    require_target(cert, Target::thm1, "check_thm1");
    return check_fd(sys, cert, R, N, trajs, tol, seed);
}

CheckReport check_thm2(const OdeSystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol,
                       std::uint64_t seed) {
    require_target(cert, Target::thm2, "check_thm2");
    return check_fd(sys, cert, R, N, trajs, tol, seed);
}

namespace {

template <class Sys>
CheckReport check_prop1_impl(const Sys& sys, const Certificate& cert,
                             const std::vector<Trajectory>& trajs, CheckTol tol) {
    require_target(cert, Target::prop1, "check_prop1");
    cert.validate();
    CheckReport rep;
    rep.system = sys.name;
    rep.certificate = cert.name;

    const bool history_based = cert.Wh.has_value();
    auto W_at = [&](const Trajectory& tr, std::size_t i) {
        if (history_based) return cert.Wh->eval(tr.history_at(tr.times()[i]));
        return cert.W->eval(tr.states()[i]);
    };

    if (!history_based && cert.W) {
        StateVec origin(static_cast<std::size_t>(trajs.empty() ? 1 : trajs[0].dim()), 0.0);
        if (cert.W->eval(origin) != 0.0)
            throw std::invalid_argument("check_prop1: W(0) must be 0");
    }

    {
        ConditionAcc acc("output-bound a(|h|) <= W", tol);
        for (const auto& tr : trajs) {
            const auto& ts = tr.times();
            for (std::size_t i = 0; i < ts.size(); ++i)
                acc.add((*cert.a)(norm2(tr.outputs()[i])), W_at(tr, i), ts[i],
                        tr.states()[i]);
        }
        acc.finish_into(rep);
    }
    {
        ConditionAcc acc("monotone W non-increasing", tol);
        for (const auto& tr : trajs) {
            std::vector<double> w;
            w.reserve(tr.times().size());
            for (std::size_t i = 0; i < tr.times().size(); ++i) w.push_back(W_at(tr, i));
            add_monotone_decrease(acc, tr, w);
        }
        acc.finish_into(rep);
    }
    {
        // Output bound implied along solutions: a(|y(t)|) <= b(|x0|).
        ConditionAcc acc("solution-bound a(|y(t)|) <= b(|x0|)", tol);
        for (const auto& tr : trajs) {
            double x0n;
            if constexpr (std::is_same_v<Sys, DelaySystem>)
                x0n = tr.history_at(0.0).sup_norm();
            else
                x0n = norm2(tr.states()[0]);
            double rhs = (*cert.b)(x0n);
            const auto& ts = tr.times();
            for (std::size_t i = 0; i < ts.size(); ++i)
                acc.add((*cert.a)(norm2(tr.outputs()[i])), rhs, ts[i], tr.states()[i]);
        }
        acc.finish_into(rep);
    }
    return rep;
}

/// Shared body for cor1/cor2 delay-system checks.
CheckReport check_delay(const DelaySystem& sys, const Certificate& cert, double R, int N,
                        const std::vector<Trajectory>& trajs, CheckTol tol,
                        std::uint64_t seed) {
    cert.validate();
    CheckReport rep;
    rep.system = sys.name;
    rep.certificate = cert.name;

    std::vector<History> samples;
    if (N > 0) samples = sample_domain(sys, R, N, seed);

    auto each_history = [&](auto&& fn) {
        for (const auto& h : samples) fn(h, kNaN);
        for (const auto& tr : trajs) {
            const auto& ts = tr.times();
            std::size_t stride = std::max<std::size_t>(1, ts.size() / 64);
            for (std::size_t i = 0; i < ts.size(); i += stride)
                fn(tr.history_at(ts[i]), ts[i]);
        }
    };
    auto state_of = [](const History& h) { return h.query(0.0); };

    const bool cor2 = cert.target == Target::cor2;

    if (cor2) {
        ConditionAcc lower("bound-lower a(|h|) <= V", tol), upper("bound-upper V <= b(||x||)", tol);
        each_history([&](const History& h, double t) {
            double v = cert.Vh->eval(h);
            lower.add((*cert.a)(out_norm(sys, h)), v, t, state_of(h));
            upper.add(v, (*cert.b)(h.sup_norm()), t, state_of(h));
        });
        lower.finish_into(rep);
        upper.finish_into(rep);
    }

    {
        ConditionAcc acc("output-bound a(|h|) <= W", tol);
        each_history([&](const History& h, double t) {
            acc.add((*cert.a)(out_norm(sys, h)), cert.Wh->eval(h), t, state_of(h));
        });
        acc.finish_into(rep);
    }

    {
        ConditionAcc acc("decay dV <= -rho(W)", tol);
        if (cert.Vh->dot) {
            each_history([&](const History& h, double t) {
                acc.add(cert.Vh->dot(h), -(*cert.rho)(cert.Wh->eval(h)), t, state_of(h));
            });
        } else {
            for (const auto& tr : trajs)
                for (double t : dini_times(tr, kDiniSteps[0], 32)) {
                    History h = tr.history_at(t);
                    acc.add(dini_derivative_history(cert.Vh->eval, tr, t),
                            -(*cert.rho)(cert.Wh->eval(h)), t, state_of(h));
                }
        }
        acc.finish_into(rep);
    }

    if (!cor2) {
        ConditionAcc acc("monotone dW <= 0", tol);
        if (cert.Wh->dot)
            each_history([&](const History& h, double t) {
                acc.add(cert.Wh->dot(h), 0.0, t, state_of(h));
            });
        for (const auto& tr : trajs) {
            std::vector<double> w;
            w.reserve(tr.times().size());
            for (double t : tr.times()) w.push_back(cert.Wh->eval(tr.history_at(t)));
            add_monotone_decrease(acc, tr, w);
        }
        acc.finish_into(rep);
    } else {
        const bool upper_side = cert.side == GrowthSide::upper;
        ConditionAcc acc(upper_side ? "growth-upper dW <= gamma(V)" : "growth-lower -dW <= gamma(V)",
                         tol);
        auto add_at = [&](double dw, const History& h, double t) {
            double g = (*cert.gamma)(cert.Vh->eval(h));
            acc.add(upper_side ? dw : -dw, g, t, state_of(h));
        };
        if (cert.Wh->dot) {
            each_history([&](const History& h, double t) { add_at(cert.Wh->dot(h), h, t); });
        } else {
            for (const auto& tr : trajs)
                for (double t : dini_times(tr, kDiniSteps[0], 32))
                    add_at(dini_derivative_history(cert.Wh->eval, tr, t), tr.history_at(t),
                           t);
        }
        acc.finish_into(rep);

        if (!cert.rho_monotone) {
            ConditionAcc zacc("dominance W <= zeta(V)", tol);
            each_history([&](const History& h, double t) {
                zacc.add(cert.Wh->eval(h), (*cert.zeta)(cert.Vh->eval(h)), t, state_of(h));
            });
            zacc.finish_into(rep);
        }
    }

    return rep;
}

}  // namespace

CheckReport check_prop1(const OdeSystem& sys, const Certificate& cert,
                        const std::vector<Trajectory>& trajs, CheckTol tol) {
    return check_prop1_impl(sys, cert, trajs, tol);
}

CheckReport check_prop1(const DelaySystem& sys, const Certificate& cert,
                        const std::vector<Trajectory>& trajs, CheckTol tol) {
    return check_prop1_impl(sys, cert, trajs, tol);
}

CheckReport check_cor1(const DelaySystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol,
                       std::uint64_t seed) {
    require_target(cert, Target::cor1, "check_cor1");
    return check_delay(sys, cert, R, N, trajs, tol, seed);
}

CheckReport check_cor2(const DelaySystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol,
                       std::uint64_t seed) {
    require_target(cert, Target::cor2, "check_cor2");
    return check_delay(sys, cert, R, N, trajs, tol, seed);
}

}  // namespace uaos
