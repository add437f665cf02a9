#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uaos/catalog.hpp"
#include "uaos/integrate.hpp"

using namespace uaos;

namespace {

// Piecewise-polynomial solution of dx/dt = -x(t-1) with x == 1 on [-1, 0].
double step_delay_exact(double t) {
    if (t <= 0.0) return 1.0;
    if (t <= 1.0) return 1.0 - t;
    if (t <= 2.0) {
        double s = t - 1.0;
        return (1.0 - t) + 0.5 * s * s;
    }
    double s = t - 2.0;
    return 0.5 * t * t - 2.0 * t + 1.5 - s * s * s / 6.0;
}

}  // namespace

TEST_CASE("scalar linear system matches exp(-t)") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    IntegratorConfig cfg;
    cfg.t_f = 10.0;
    auto traj = integrate_ode(sys, {1.0}, cfg);

    CHECK(traj.times().front() == 0.0);
    CHECK(traj.times().back() == doctest::Approx(10.0));
    for (std::size_t i = 0; i < traj.times().size(); ++i) {
        double t = traj.times()[i];
        CHECK(std::fabs(traj.states()[i][0] - std::exp(-t)) < 1e-8);
        // dense output is exact at knots
        CHECK(traj.dense(t)[0] == traj.states()[i][0]);
    }
    // dense output between knots
    CHECK(std::fabs(traj.dense(0.5)[0] - std::exp(-0.5)) < 1e-7);
    CHECK(std::fabs(traj.output_at(2.5)[0] - std::exp(-2.5)) < 1e-7);
    // monotone decay between consecutive knots
    for (std::size_t i = 1; i < traj.times().size(); ++i)
        CHECK(traj.states()[i][0] < traj.states()[i - 1][0]);
}

TEST_CASE("equilibrium initial condition stays at zero") {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    IntegratorConfig cfg;
    cfg.t_f = 5.0;
    auto traj = integrate_ode(sys, {0.0, 0.0, 0.0}, cfg);
    for (const auto& x : traj.states())
        for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("unstable third component grows like exp(t)") {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    IntegratorConfig cfg;
    cfg.t_f = 10.0;
    auto traj = integrate_ode(sys, {0.0, 0.0, 1.0}, cfg);
    for (std::size_t i = 0; i < traj.times().size(); ++i) {
        double t = traj.times()[i];
        CHECK(traj.states()[i][2] >= std::exp(t) * (1.0 - 1e-6));
        CHECK(traj.states()[i][2] <= std::exp(t) * (1.0 + 1e-6));
    }
}

TEST_CASE("stiff trajectory reaches the horizon with the implicit fallback") {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    IntegratorConfig cfg;
    cfg.t_f = 20.0;
    auto traj = integrate_ode(sys, {1.0, 2.0, 2.0}, cfg);
    CHECK(traj.times().back() == doctest::Approx(20.0));
    // fast component has collapsed; slow component keeps growing like exp(t)
    CHECK(std::fabs(traj.states().back()[0]) < 1e-6);
    CHECK(traj.states().back()[2] > 1e8);

    IntegratorConfig forced = cfg;
    forced.method = OdeMethod::semi_implicit;
    auto traj2 = integrate_ode(sys, {1.0, 2.0, 2.0}, forced);
    CHECK(traj2.times().back() == doctest::Approx(20.0));
    CHECK(std::fabs(traj2.states().back()[2] / traj.states().back()[2] - 1.0) < 1e-4);
}

TEST_CASE("integration is bitwise deterministic") {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    IntegratorConfig cfg;
    cfg.t_f = 8.0;
    auto a = integrate_ode(sys, {0.3, -0.2, 0.5}, cfg);
    auto b = integrate_ode(sys, {0.3, -0.2, 0.5}, cfg);
    REQUIRE(a.times().size() == b.times().size());
    for (std::size_t i = 0; i < a.times().size(); ++i) {
        CHECK(a.times()[i] == b.times()[i]);
        for (int d = 0; d < 3; ++d) CHECK(a.states()[i][d] == b.states()[i][d]);
    }
}

TEST_CASE("accuracy scales with the requested tolerance") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    for (double rt : {1e-6, 1e-8, 1e-10}) {
        IntegratorConfig cfg;
        cfg.rel_tol = rt;
        cfg.abs_tol = rt * 1e-2;
        cfg.t_f = 5.0;
        auto traj = integrate_ode(sys, {1.0}, cfg);
        double err = 0.0;
        for (std::size_t i = 0; i < traj.times().size(); ++i)
            err = std::max(err, std::fabs(traj.states()[i][0] - std::exp(-traj.times()[i])));
        CHECK(err <= 10.0 * rt);
    }
}

TEST_CASE("finite-time blow-up is reported") {
    OdeSystem sys;
    sys.name = "riccati";
    sys.n = 1;
    sys.k = 1;
    sys.field = [](const StateVec& x) { return StateVec{x[0] * x[0]}; };
    sys.output = [](const StateVec& x) { return x; };
    IntegratorConfig cfg;
    cfg.t_f = 2.0;  // solution 1/(1-t) blows up at t=1
    CHECK_THROWS_WITH_AS(integrate_ode(sys, {1.0}, cfg), doctest::Contains("blow-up"),
                         std::runtime_error);
}

TEST_CASE("delay solver matches the method-of-steps closed form") {
    DelaySystem sys;
    sys.name = "pure_delay";
    sys.n = 1;
    sys.k = 1;
    sys.r = 1.0;
    sys.field = [](const History& h) { return StateVec{-h.query(-1.0)[0]}; };
    sys.output = [](const History& h) { return h.query(0.0); };

    IntegratorConfig cfg;
    cfg.t_f = 3.0;
    cfg.dde_step = 0.05;
    History h0 = History::constant(1.0, {1.0});
    auto traj = integrate_dde(sys, h0, cfg);

    double err_05 = 0.0;
    for (std::size_t i = 0; i < traj.times().size(); ++i)
        err_05 = std::max(err_05,
                          std::fabs(traj.states()[i][0] - step_delay_exact(traj.times()[i])));
    CHECK(err_05 < 1e-8);

    // spot oracle values
    CHECK(traj.dense(0.5)[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(traj.dense(2.0)[0] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(traj.dense(3.0)[0] == doctest::Approx(step_delay_exact(3.0)).epsilon(1e-8));

}

TEST_CASE("delay solver error drops by >= 8x when the step is halved") {
    auto sys = std::get<DelaySystem>(builtin("example2"));
    History h0 = History(1.0, 2, [](double s) {
        return StateVec{0.4 * std::cos(2.0 * s), 0.1};
    });

    auto final_x1 = [&](double step) {
        IntegratorConfig cfg;
        cfg.t_f = 5.0;
        cfg.dde_step = step;
        auto traj = integrate_dde(sys, h0, cfg);
        return traj.states().back()[0];
    };

    double ref = final_x1(1.0 / 512.0);
    double err_coarse = std::fabs(final_x1(0.05) - ref);
    double err_fine = std::fabs(final_x1(0.025) - ref);
    CHECK(err_coarse > 0.0);
    CHECK(err_fine * 8.0 <= err_coarse);
}

TEST_CASE("delay state reconstruction") {
    DelaySystem sys;
    sys.name = "pure_delay";
    sys.n = 1;
    sys.k = 1;
    sys.r = 1.0;
    sys.field = [](const History& h) { return StateVec{-h.query(-1.0)[0]}; };
    sys.output = [](const History& h) { return h.query(0.0); };
    IntegratorConfig cfg;
    cfg.t_f = 3.0;
    auto traj = integrate_dde(sys, History::constant(1.0, {1.0}), cfg);

    // x_t at t=0.5 straddles the initial history and the computed solution
    History xt = traj.history_at(0.5);
    CHECK(xt.query(-1.0)[0] == doctest::Approx(1.0));         // solution value at t=-0.5
    CHECK(xt.query(0.0)[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(xt.query(-0.25)[0] == doctest::Approx(0.75).epsilon(1e-8));
}

TEST_CASE("configuration validation") {
    auto sys = std::get<DelaySystem>(builtin("example2"));
    IntegratorConfig cfg;
    cfg.dde_step = 0.3;  // does not divide r = 1
    CHECK_THROWS_AS(integrate_dde(sys, History::zero(1.0, 2), cfg), std::invalid_argument);

    IntegratorConfig bad;
    bad.rel_tol = -1.0;
    auto ode = std::get<OdeSystem>(builtin("decoupled_linear"));
    CHECK_THROWS_AS(integrate_ode(ode, {1.0}, bad), std::invalid_argument);
}
