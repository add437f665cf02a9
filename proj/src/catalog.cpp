#include "uaos/catalog.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "uaos/adaptive.hpp"
#include "uaos/sampling.hpp"

namespace uaos {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void record_g(std::map<std::string, double>& params, const GFun& g) {
    params["g_kind"] = static_cast<double>(g.kind);
    params["g_const"] = g.const_value;
    params["R_g"] = g.bound;
}

OdeSystem make_example1(const std::map<std::string, double>& params, const GFun& g) {
    OdeSystem sys;
    sys.name = "example1";
    sys.n = 3;  // state (y, z, w)
    sys.k = 1;
    sys.params = params;
    record_g(sys.params, g);
    auto gf = g.f;
    sys.field = [gf](const StateVec& x) {
        const double y = x[0], z = x[1], w = x[2];
        const double gv = gf(z, w);
        const double d = 1.0 + z * z;
        return StateVec{-(1.0 + w * w) * y + 2.0 * z * gv / (d * d), -gv * y,
                        w + std::fabs(y)};
    };
    sys.output = [](const StateVec& x) { return StateVec{x[0]}; };
    return sys;
}

DelaySystem make_example2(std::map<std::string, double> params, const GFun& g) {
    const double p = param_or(params, "p", 2.0);
    const double q = param_or(params, "q", 0.1);
    const double Q = param_or(params, "Q", 0.5);
    const double sigma = param_or(params, "sigma", 1.0);
    const double r = param_or(params, "r", 1.0);
    const double R = param_or(params, "R", 1.0);
    const bool skip = param_or(params, "skip_feasibility", 0.0) != 0.0;
    if (!(p > 0.0) || !(Q > 0.0) || !(sigma > 0.0) || !(r > 0.0) || !(R > 0.0))
        throw std::invalid_argument("example2: p, Q, sigma, r, R must all be > 0");

    const double lambda = q * q * std::exp(sigma * r) / (4.0 * Q);
    if (!skip && !(lambda < p - Q)) {
        std::ostringstream os;
        os << "example2: infeasible constants: lambda = q^2*exp(sigma*r)/(4Q) = " << lambda
           << " must be < p - Q = " << (p - Q);
        throw std::invalid_argument(os.str());
    }
    const double denom = p - Q - lambda;
    const double K = sigma * Q / (2.0 * denom);
    const double lhs = (4.0 * lambda * denom * denom + sigma * sigma * Q) / (2.0 * sigma * denom);

    // Damping condition: lhs <= p + g(x)*x2 for all |x| <= R (sampled).
    double rhs_min = std::numeric_limits<double>::infinity();
    for (const StateVec& x : quasi_ball(2, R, 10000))
        rhs_min = std::min(rhs_min, p + g.f(x[0], x[1]) * x[1]);
    if (!skip && !(lhs <= rhs_min)) {
        std::ostringstream os;
        os << "example2: infeasible constants: damping bound "
           << "(4*lambda*(p-Q-lambda)^2 + sigma^2*Q)/(2*sigma*(p-Q-lambda)) = " << lhs
           << " exceeds min over |x| <= R of p + g(x)*x2 = " << rhs_min;
        throw std::invalid_argument(os.str());
    }

    params["p"] = p;
    params["q"] = q;
    params["Q"] = Q;
    params["sigma"] = sigma;
    params["r"] = r;
    params["R"] = R;
    params["lambda"] = lambda;
    params["K"] = K;
    params["feasibility_lhs"] = lhs;
    params["feasibility_margin"] = rhs_min - lhs;

    DelaySystem sys;
    sys.name = "example2";
    sys.n = 2;
    sys.k = 1;
    sys.r = r;
    sys.params = params;
    record_g(sys.params, g);
    auto gf = g.f;
    sys.field = [gf, p, q, r](const History& h) {
        StateVec x0 = h.query(0.0);
        StateVec xr = h.query(-r);
        const double gv = gf(x0[0], x0[1]);
        return StateVec{-p * x0[0] + q * xr[0] - gv * x0[0] * x0[1], gv * x0[0] * x0[0]};
    };
    sys.output = [](const History& h) { return StateVec{h.query(0.0)[0]}; };
    auto sp = sys.params;
    sys.in_domain = [sp, R](const History& h) {
        return example2_V(h, sp) <= 0.5 * R * R + 1e-12;
    };
    return sys;
}

OdeSystem make_decoupled() {
    OdeSystem sys;
    sys.name = "decoupled_linear";
    sys.n = 1;
    sys.k = 1;
    sys.field = [](const StateVec& x) { return StateVec{-x[0]}; };
    sys.output = [](const StateVec& x) { return StateVec{x[0]}; };
    return sys;
}

OdeSystem make_adaptive(const std::map<std::string, double>& params, bool redesigned) {
    AdaptiveConfig cfg;
    cfg.gamma = param_or(params, "gamma", 1.0);
    cfg.L = redesigned ? param_or(params, "L", 2.0) : 0.0;
    cfg.theta = {param_or(params, "theta", 1.0)};
    cfg.theta_hat0 = {param_or(params, "theta_hat0", 0.0)};
    if (redesigned && !(cfg.L > 0.0))
        throw std::invalid_argument("adaptive_redesigned: L must be > 0");
    OdeSystem sys = closed_loop(demo_plant(), cfg);
    sys.name = redesigned ? "adaptive_redesigned" : "adaptive_basic";
    return sys;
}

OdeSystem make_spike_demo() {
    // A clock whose output traces the spike train; used to exercise signal
    // classification on a signal that is not quasi-uniformly continuous.
    OdeSystem sys;
    sys.name = "spike_demo";
    sys.n = 1;
    sys.k = 1;
    sys.field = [](const StateVec&) { return StateVec{1.0}; };
    sys.output = [](const StateVec& x) { return StateVec{spike_train_value(x[0])}; };
    return sys;
}

}  // namespace

GFun make_g(const std::string& spec) {
    GFun g;
    if (spec == "sin") {
        g.f = [](double u, double v) { return std::sin(u * v); };
        g.bound = 1.0;
        g.kind = 0;
    } else if (spec == "tanh") {
        g.f = [](double u, double v) { return std::tanh(u + v); };
        g.bound = 1.0;
        g.kind = 1;
    } else if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        g.f = [c](double, double) { return c; };
        g.bound = std::fabs(c);
        g.kind = 2;
        g.const_value = c;
    } else {
        throw std::invalid_argument("make_g: unknown spec '" + spec +
                                    "' (expected sin, tanh, or const:<c>)");
    }
    return g;
}

GFun g_from_params(const std::map<std::string, double>& params) {
    const int kind = static_cast<int>(param_or(params, "g_kind", 0.0));
    switch (kind) {
        case 0: return make_g("sin");
        case 1: return make_g("tanh");
        case 2: return make_g("const:" + std::to_string(param_or(params, "g_const", 0.0)));
        default: throw std::invalid_argument("g_from_params: unknown g_kind");
    }
}

BuiltinSystem builtin(const std::string& name, const std::map<std::string, double>& params,
                      const std::string& g_spec) {
    const GFun g = make_g(g_spec);
    if (name == "example1") return make_example1(params, g);
    if (name == "example2") return make_example2(params, g);
    if (name == "decoupled_linear") return make_decoupled();
    if (name == "adaptive_basic") return make_adaptive(params, false);
    if (name == "adaptive_redesigned") return make_adaptive(params, true);
    if (name == "spike_demo") return make_spike_demo();
    throw std::invalid_argument("builtin: unknown system '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"example1",       "example2",            "decoupled_linear",
            "adaptive_basic", "adaptive_redesigned", "spike_demo"};
}

double weighted_history_integral(const History& h, double sigma, int intervals) {
    if (intervals < 2) throw std::invalid_argument("weighted_history_integral: intervals < 2");
    if (intervals % 2 != 0) ++intervals;
    const double r = h.r();
    const double dt = r / intervals;
    auto f = [&](double s) {
        const double x1 = h.query(s)[0];
        return std::exp(sigma * s) * x1 * x1;
    };
    double sum = f(-r) + f(0.0);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(-r + i * dt);
    return sum * dt / 3.0;
}

double example2_V(const History& h, const std::map<std::string, double>& params) {
    const double Q = param_or(params, "Q", 0.5);
    const double sigma = param_or(params, "sigma", 1.0);
    StateVec x0 = h.query(0.0);
    return 0.5 * x0[0] * x0[0] + Q * weighted_history_integral(h, sigma) +
           0.5 * x0[1] * x0[1];
}

double example2_W(const History& h, const std::map<std::string, double>& params) {
    auto it = params.find("K");
    if (it == params.end()) throw std::invalid_argument("example2_W: params lack K");
    const double sigma = param_or(params, "sigma", 1.0);
    StateVec x0 = h.query(0.0);
    return 0.5 * x0[0] * x0[0] + it->second * weighted_history_integral(h, sigma);
}

double spike_train_value(double t) {
    const double i = std::round(t);
    if (i < 1.0) return 0.0;
    const double d = std::fabs(t - i);
    if (d < 1e-12) return 1.0;  // snap apexes hit through rounded grid times
    const double half_width = std::pow(2.0, -i);
    if (d >= half_width) return 0.0;
    return 1.0 - d / half_width;
}

}  // namespace uaos
