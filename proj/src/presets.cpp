#include "uaos/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "uaos/adaptive.hpp"

namespace uaos {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("make_certificate: system params lack '" + key + "'");
    return it->second;
}

const OdeSystem& expect_ode(const BuiltinSystem& sys, const std::string& preset,
                            const std::string& name) {
    const OdeSystem* ode = std::get_if<OdeSystem>(&sys);
    if (!ode || ode->name.rfind(name, 0) != 0)
        throw std::invalid_argument("make_certificate: preset '" + preset +
                                    "' requires system '" + name + "'");
    return *ode;
}

const DelaySystem& expect_delay(const BuiltinSystem& sys, const std::string& preset,
                                const std::string& name) {
    const DelaySystem* dde = std::get_if<DelaySystem>(&sys);
    if (!dde || dde->name != name)
        throw std::invalid_argument("make_certificate: preset '" + preset +
                                    "' requires system '" + name + "'");
    return *dde;
}

ScalarField half_y_squared() {
    ScalarField f;
    f.eval = [](const StateVec& x) { return 0.5 * x[0] * x[0]; };
    return f;
}

Certificate decoupled_thm1() {
    Certificate cert;
    cert.target = Target::thm1;
    cert.name = "decoupled-thm1";
    ScalarField vw = half_y_squared();
    vw.dot = [](const StateVec& x) { return -x[0] * x[0]; };
    cert.V = vw;
    cert.W = vw;
    cert.rho = ComparisonFn::linear(2.0);
    cert.a = ComparisonFn::quadratic(0.5);
    return cert;
}

Certificate decoupled_prop1() {
    Certificate cert = decoupled_thm1();
    cert.target = Target::prop1;
    cert.name = "decoupled-prop1";
    cert.b = ComparisonFn::quadratic(1.0);
    return cert;
}

/// V = y^2/2 + z^2/(1+z^2); dV = -(1+w^2)y^2 along the flow.
ScalarField example1_V(const GFun&) {
    ScalarField f;
    f.eval = [](const StateVec& x) {
        const double z2 = x[1] * x[1];
        return 0.5 * x[0] * x[0] + z2 / (1.0 + z2);
    };
    f.dot = [](const StateVec& x) {
        return -(1.0 + x[2] * x[2]) * x[0] * x[0];
    };
    return f;
}

/// W = y^2/2; dW = -(1+w^2)y^2 + 2 z g(z,w) y / (1+z^2)^2 along the flow.
ScalarField example1_W(const GFun& g) {
    ScalarField f = half_y_squared();
    auto gf = g.f;
    f.dot = [gf](const StateVec& x) {
        const double y = x[0], z = x[1], w = x[2];
        const double d = 1.0 + z * z;
        return -(1.0 + w * w) * y * y + 2.0 * z * gf(z, w) * y / (d * d);
    };
    return f;
}

Certificate example1_thm2(const OdeSystem& sys) {
    const GFun g = g_from_params(sys.params);
    Certificate cert;
    cert.target = Target::thm2;
    cert.name = "example1-thm2";
    cert.V = example1_V(g);
    cert.W = example1_W(g);
    cert.rho = ComparisonFn::linear(2.0);
    cert.a = ComparisonFn::quadratic(0.5);
    cert.b = ComparisonFn::quadratic(1.0);
    cert.gamma = ComparisonFn::constant(0.25 * g.bound * g.bound);
    cert.side = GrowthSide::upper;
    return cert;
}

/// Deliberately mis-targeted certificate: W = y^2/2 is not non-increasing
/// for this system, so the monotonicity condition must fail.
Certificate example1_w_as_thm1(const OdeSystem& sys) {
    const GFun g = g_from_params(sys.params);
    Certificate cert;
    cert.target = Target::thm1;
    cert.name = "example1-w-as-thm1";
    cert.V = example1_V(g);
    cert.W = example1_W(g);
    cert.rho = ComparisonFn::linear(2.0);
    cert.a = ComparisonFn::quadratic(0.5);
    return cert;
}

/// Variant with a zero growth bound; the upper growth condition must fail.
Certificate example1_gamma_zero(const OdeSystem& sys) {
    Certificate cert = example1_thm2(sys);
    cert.name = "example1-gamma-zero";
    cert.gamma = ComparisonFn::constant(0.0);
    return cert;
}

HistoryField example2_V_field(const DelaySystem& sys) {
    const auto params = sys.params;
    const double p = param(params, "p"), q = param(params, "q"), Q = param(params, "Q");
    const double sigma = param(params, "sigma"), r = param(params, "r");
    HistoryField f;
    f.eval = [params](const History& h) { return example2_V(h, params); };
    f.dot = [p, q, Q, sigma, r](const History& h) {
        const double x10 = h.query(0.0)[0];
        const double x1r = h.query(-r)[0];
        const double I = weighted_history_integral(h, sigma);
        return -(p - Q) * x10 * x10 + q * x1r * x10 - sigma * Q * I -
               Q * std::exp(-sigma * r) * x1r * x1r;
    };
    return f;
}

HistoryField example2_W_field(const DelaySystem& sys) {
    const auto params = sys.params;
    const double p = param(params, "p"), q = param(params, "q"), K = param(params, "K");
    const double sigma = param(params, "sigma"), r = param(params, "r");
    const GFun g = g_from_params(params);
    auto gf = g.f;
    HistoryField f;
    f.eval = [params](const History& h) { return example2_W(h, params); };
    f.dot = [p, q, K, sigma, r, gf](const History& h) {
        const StateVec x0 = h.query(0.0);
        const double x10 = x0[0];
        const double x1r = h.query(-r)[0];
        const double I = weighted_history_integral(h, sigma);
        return -(p - K + gf(x0[0], x0[1]) * x0[1]) * x10 * x10 + q * x1r * x10 -
               sigma * K * I - K * std::exp(-sigma * r) * x1r * x1r;
    };
    return f;
}

Certificate example2_cor1(const DelaySystem& sys) {
    Certificate cert;
    cert.target = Target::cor1;
    cert.name = "example2-cor1";
    cert.Vh = example2_V_field(sys);
    cert.Wh = example2_W_field(sys);
    const double slope = 2.0 * (param(sys.params, "p") - param(sys.params, "Q") -
                                param(sys.params, "lambda"));
    cert.rho = ComparisonFn::linear(slope);
    cert.a = ComparisonFn::quadratic(0.5);
    return cert;
}

Certificate example2_prop1(const DelaySystem& sys) {
    Certificate cert;
    cert.target = Target::prop1;
    cert.name = "example2-prop1";
    cert.Wh = example2_W_field(sys);
    cert.a = ComparisonFn::quadratic(0.5);
    cert.b = ComparisonFn::quadratic(param(sys.params, "Q") + 0.5);
    return cert;
}

Certificate adaptive_thm3(const OdeSystem& sys) {
    AdaptiveConfig cfg;
    cfg.gamma = param(sys.params, "gamma");
    cfg.L = param(sys.params, "L");
    cfg.theta = {param(sys.params, "theta0")};
    cfg.theta_hat0 = {param(sys.params, "theta_hat0_0")};
    Certificate cert = thm3_certificate(demo_plant(), cfg);
    cert.name = "adaptive-thm3";
    return cert;
}

}  // namespace

Certificate make_certificate(const std::string& preset, const BuiltinSystem& sys) {
    if (preset == "decoupled-thm1") {
        expect_ode(sys, preset, "decoupled_linear");
        return decoupled_thm1();
    }
    if (preset == "decoupled-prop1") {
        expect_ode(sys, preset, "decoupled_linear");
        return decoupled_prop1();
    }
    if (preset == "example1-thm2") return example1_thm2(expect_ode(sys, preset, "example1"));
    if (preset == "example1-w-as-thm1")
        return example1_w_as_thm1(expect_ode(sys, preset, "example1"));
    if (preset == "example1-gamma-zero")
        return example1_gamma_zero(expect_ode(sys, preset, "example1"));
    if (preset == "example2-cor1") return example2_cor1(expect_delay(sys, preset, "example2"));
    if (preset == "example2-prop1")
        return example2_prop1(expect_delay(sys, preset, "example2"));
    if (preset == "adaptive-thm3")
        return adaptive_thm3(expect_ode(sys, preset, "adaptive_redesigned"));
    throw std::invalid_argument("make_certificate: unknown preset '" + preset + "'");
}

std::vector<std::string> certificate_presets() {
    return {"decoupled-thm1",     "decoupled-prop1", "example1-thm2",
            "example1-w-as-thm1", "example1-gamma-zero", "example2-cor1",
            "example2-prop1",     "adaptive-thm3"};
}

}  // namespace uaos
