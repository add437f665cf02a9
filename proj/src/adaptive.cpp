#include "uaos/adaptive.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "uaos/sampling.hpp"

namespace uaos {

namespace {

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void split_state(const AdaptivePlant& plant, const StateVec& x, StateVec& y,
                 std::vector<double>& z) {
    require_dim(x, static_cast<std::size_t>(plant.n + plant.p), plant.name + " closed-loop state");
    y.assign(x.begin(), x.begin() + plant.n);
    z.assign(x.begin() + plant.n, x.end());
}

/// gradP(y) . g(y), the scalar that drives the adaptation law.
double gp_g(const AdaptivePlant& plant, const StateVec& y) {
    return dot_vec(plant.gradP(y), plant.g(y));
}

std::vector<double> adaptation_law(const AdaptivePlant& plant, const AdaptiveConfig& cfg,
                                   const StateVec& y) {
    const double s = gp_g(plant, y) / cfg.gamma;
    std::vector<double> phi = plant.phi(y);
    for (double& e : phi) e *= s;
    return phi;
}

}  // namespace

void AdaptiveConfig::validate(const AdaptivePlant& plant) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("AdaptiveConfig: gamma must be > 0");
    if (L < 0.0) throw std::invalid_argument("AdaptiveConfig: L must be >= 0");
    if (static_cast<int>(theta.size()) != plant.p)
        throw std::invalid_argument("AdaptiveConfig: theta dimension mismatch");
    if (static_cast<int>(theta_hat0.size()) != plant.p)
        throw std::invalid_argument("AdaptiveConfig: theta_hat0 dimension mismatch");
}

ControlSignal control_basic(const AdaptivePlant& plant, const AdaptiveConfig& cfg,
                            const StateVec& y, const std::vector<double>& theta_hat) {
    ControlSignal out;
    out.u = plant.k(y) - dot_vec(plant.phi(y), theta_hat);
    out.theta_hat_dot = adaptation_law(plant, cfg, y);
    return out;
}

ControlSignal control_redesigned(const AdaptivePlant& plant, const AdaptiveConfig& cfg,
                                 const StateVec& y, const std::vector<double>& theta_hat) {
    ControlSignal out = control_basic(plant, cfg, y, theta_hat);
    out.u -= cfg.L * plant.mu(y) * gp_g(plant, y);
    return out;
}

bool omega_member(const AdaptivePlant& plant, const AdaptiveConfig& cfg, const StateVec& x) {
    StateVec y;
    std::vector<double> z;
    split_state(plant, x, y, z);
    double zz = dot_vec(z, z);
    return plant.P(y) + 0.5 * cfg.gamma * zz <= cfg.gamma * cfg.L + 1e-12;
}

OdeSystem closed_loop(const AdaptivePlant& plant, const AdaptiveConfig& cfg) {
    cfg.validate(plant);
    const bool redesigned = cfg.L > 0.0;

    OdeSystem sys;
    sys.name = plant.name + (redesigned ? "_redesigned" : "_basic");
    sys.n = plant.n + plant.p;
    sys.k = plant.n;
    sys.params["gamma"] = cfg.gamma;
    sys.params["L"] = cfg.L;
    for (int i = 0; i < plant.p; ++i) {
        sys.params["theta" + std::to_string(i)] = cfg.theta[i];
        sys.params["theta_hat0_" + std::to_string(i)] = cfg.theta_hat0[i];
    }

    AdaptivePlant p = plant;
    AdaptiveConfig c = cfg;
    sys.field = [p, c, redesigned](const StateVec& x) {
        StateVec y;
        std::vector<double> z;  // z = theta_hat - theta
        split_state(p, x, y, z);
        std::vector<double> theta_hat(p.p);
        for (int i = 0; i < p.p; ++i) theta_hat[i] = z[i] + c.theta[i];
        ControlSignal ctl = redesigned ? control_redesigned(p, c, y, theta_hat)
                                       : control_basic(p, c, y, theta_hat);
        const double drive = ctl.u + dot_vec(p.phi(y), c.theta);
        StateVec f = p.f(y);
        StateVec g = p.g(y);
        StateVec dx(x.size());
        for (int i = 0; i < p.n; ++i) dx[i] = f[i] + g[i] * drive;
        for (int i = 0; i < p.p; ++i) dx[p.n + i] = ctl.theta_hat_dot[i];
        return dx;
    };
    sys.output = [np = plant.n](const StateVec& x) {
        return StateVec(x.begin(), x.begin() + np);
    };
    if (redesigned) {
        sys.in_domain = [p, c](const StateVec& x) { return omega_member(p, c, x); };
    }
    return sys;
}

Certificate thm3_certificate(const AdaptivePlant& plant, const AdaptiveConfig& cfg) {
    cfg.validate(plant);
    if (!(cfg.L > 0.0))
        throw std::invalid_argument(
            "thm3_certificate: requires the redesigned controller (L > 0)");
    if (!plant.rho_cert || !plant.a_cert)
        throw std::invalid_argument("thm3_certificate: plant lacks rho_cert/a_cert data");

    AdaptivePlant p = plant;
    AdaptiveConfig c = cfg;
    OdeSystem loop = closed_loop(plant, cfg);
    auto field = loop.field;

    Certificate cert;
    cert.target = Target::thm1;
    cert.name = plant.name + "_redesign_certificate";

    ScalarField V;
    V.eval = [p, c](const StateVec& x) {
        StateVec y;
        std::vector<double> z;
        split_state(p, x, y, z);
        return p.P(y) + 0.5 * c.gamma * dot_vec(z, z);
    };
    V.dot = [p, c, field](const StateVec& x) {
        StateVec y;
        std::vector<double> z;
        split_state(p, x, y, z);
        StateVec dx = field(x);
        StateVec dy(dx.begin(), dx.begin() + p.n);
        std::vector<double> dz(dx.begin() + p.n, dx.end());
        return dot_vec(p.gradP(y), dy) + c.gamma * dot_vec(z, dz);
    };
    cert.V = V;

    ScalarField W;
    W.eval = [p](const StateVec& x) {
        StateVec y(x.begin(), x.begin() + p.n);
        return p.P(y);
    };
    W.dot = [p, field](const StateVec& x) {
        StateVec y(x.begin(), x.begin() + p.n);
        StateVec dx = field(x);
        StateVec dy(dx.begin(), dx.begin() + p.n);
        return dot_vec(p.gradP(y), dy);
    };
    cert.W = W;

    cert.rho = *plant.rho_cert;
    cert.a = *plant.a_cert;
    return cert;
}

AssumptionMargins check_assumptions(const AdaptivePlant& plant, double grid_R, int grid_N) {
    AssumptionMargins m;
    m.h_margin = std::numeric_limits<double>::infinity();
    m.a_margin = std::numeric_limits<double>::infinity();
    auto probe = [&](const StateVec& y) {
        StateVec f = plant.f(y);
        StateVec g = plant.g(y);
        const double kv = plant.k(y);
        StateVec closed(plant.n);
        for (int i = 0; i < plant.n; ++i) closed[i] = f[i] + g[i] * kv;
        const double q = plant.Q(y);
        m.h_margin = std::min(m.h_margin, -q - dot_vec(plant.gradP(y), closed));
        std::vector<double> phi = plant.phi(y);
        m.a_margin = std::min(m.a_margin, plant.mu(y) * q - dot_vec(phi, phi));
    };
    if (plant.n == 1) {
        for (int i = 0; i <= grid_N; ++i)
            probe({-grid_R + 2.0 * grid_R * static_cast<double>(i) / grid_N});
    } else {
        for (const StateVec& y : quasi_ball(plant.n, grid_R, grid_N)) probe(y);
    }
    return m;
}

AdaptivePlant demo_plant() {
    AdaptivePlant p;
    p.name = "adaptive";
    p.n = 1;
    p.p = 1;
    p.f = [](const StateVec&) { return StateVec{0.0}; };
    p.g = [](const StateVec&) { return StateVec{1.0}; };
    p.phi = [](const StateVec& y) { return std::vector<double>{y[0]}; };
    p.P = [](const StateVec& y) { return 0.5 * y[0] * y[0]; };
    p.gradP = [](const StateVec& y) { return StateVec{y[0]}; };
    p.Q = [](const StateVec& y) { return y[0] * y[0]; };
    p.k = [](const StateVec& y) { return -y[0]; };
    p.mu = [](const StateVec&) { return 1.0; };
    p.rho_cert = ComparisonFn::linear(2.0);   // Q(y) = 2 P(y)
    p.a_cert = ComparisonFn::quadratic(0.5);  // P(y) = |y|^2 / 2
    return p;
}

}  // namespace uaos
