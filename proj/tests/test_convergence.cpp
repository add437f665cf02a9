#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uaos/catalog.hpp"
#include "uaos/convergence.hpp"
#include "uaos/presets.hpp"

using namespace uaos;

TEST_CASE("analytic settling bound for the scalar system") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto cert = make_certificate("decoupled-thm1", sys);
    // sup V = sup W = R^2/2 = 0.5; rho(s) = 2s minimised at a(eps) = eps^2/2.
    // With eps = 0.1: rho_tilde = 2 * 0.005 = 0.01, T = 1.5 / 0.01 = 150.
    auto b = analytic_T(sys, cert, 0.1, 1.0);
    CHECK(b.T == doctest::Approx(150.0).epsilon(0.02));
    CHECK(b.sup_V == doctest::Approx(0.5).epsilon(0.01));
    CHECK(b.rho_tilde == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(b.a_eps == doctest::Approx(0.005).epsilon(1e-9));
    CHECK(b.samples > 0);
}

TEST_CASE("empirical settling time against the exponential closed form") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    IntegratorConfig cfg;
    cfg.t_f = 10.0;
    // |y| = e^{-t} crosses eps = 0.1 at t = ln 10.
    auto traj = integrate_ode(sys, {1.0}, cfg);
    auto T = empirical_conv_time(traj, 0.1);
    REQUIRE(T.has_value());
    CHECK(std::fabs(*T - std::log(10.0)) < 1e-4);

    // already inside the band: settling time 0
    auto t0 = empirical_conv_time(integrate_ode(sys, {0.05}, cfg), 0.1);
    REQUIRE(t0.has_value());
    CHECK(*t0 == 0.0);

    // a signal that never settles reports nullopt
    OdeSystem flat;
    flat.name = "flat";
    flat.n = 1;
    flat.k = 1;
    flat.field = [](const StateVec&) { return StateVec{0.0}; };
    flat.output = [](const StateVec& x) { return x; };
    auto stuck = empirical_conv_time(integrate_ode(flat, {0.2}, cfg), 0.1);
    CHECK_FALSE(stuck.has_value());
}

TEST_CASE("settling times shrink as eps grows") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    IntegratorConfig cfg;
    cfg.t_f = 12.0;
    auto traj = integrate_ode(sys, {1.0}, cfg);
    double prev = 1e300;
    for (double eps : {0.05, 0.1, 0.2, 0.5}) {
        auto T = empirical_conv_time(traj, eps);
        REQUIRE(T.has_value());
        CHECK(*T < prev);
        prev = *T;
    }
}

TEST_CASE("uniformity sweep is consistent with the scalar bound") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto cert = make_certificate("decoupled-thm1", sys);
    IntegratorConfig cfg;
    for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
        auto rep = uniformity_sweep(sys, &cert, 0.1, 1.0, 60, seed, cfg, 4);
        CHECK(rep.verdict == "uniform-consistent");
        REQUIRE(rep.bound.has_value());
        CHECK(rep.T_emp_sup <= rep.bound->T);
        // worst case over the ball is attained at |y0| -> 1: T -> ln 10
        CHECK(rep.T_emp_sup <= std::log(10.0) + 1e-3);
        CHECK(rep.T_emp_sup >= std::log(10.0) - 1e-3);
        for (const auto& s : rep.per_sample) {
            REQUIRE(s.T_emp.has_value());
            CHECK(*s.T_emp <= rep.T_emp_sup + 1e-12);
        }
    }
}

TEST_CASE("a deliberately tiny bound is flagged as violated") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto cert = make_certificate("decoupled-thm1", sys);
    IntegratorConfig cfg;
    auto rep = uniformity_sweep(sys, &cert, 0.05, 1.0, 30, 7, cfg, 2);
    // eps = 0.05 still converges well within the bound, so consistent
    CHECK(rep.verdict == "uniform-consistent");

    // shrink the horizon below the settling time: samples cannot be certified
    IntegratorConfig tight;
    tight.t_f = 1.0;
    auto rep2 = uniformity_sweep(sys, nullptr, 1e-4, 1.0, 10, 7, tight, 2);
    CHECK(rep2.verdict == "inconclusive");

    // an over-optimistic decay rate produces a bound below the true settling
    // time, which the sweep must flag with a witness sample
    Certificate fast = cert;
    fast.rho = ComparisonFn::linear(2000.0);
    auto rep3 = uniformity_sweep(sys, &fast, 0.1, 1.0, 30, 7, cfg, 2);
    CHECK(rep3.verdict == "bound-violated");
    CHECK(rep3.witness >= 0);
}

TEST_CASE("output envelope of the scalar system matches the exponential") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    IntegratorConfig cfg;
    cfg.t_f = 6.0;
    std::vector<double> radii{0.0, 0.5, 1.0};
    std::vector<double> times{0.0, 1.0, 2.0, 4.0};
    auto tab = envelope(sys, radii, times, 200, 3, cfg, 4);

    REQUIRE(tab.zeta_hat.size() == 3);
    CHECK(tab.zeta_hat[0] == 0.0);
    for (std::size_t j = 1; j < radii.size(); ++j) {
        CHECK(tab.zeta_hat[j] <= radii[j]);
        CHECK(tab.zeta_hat[j] >= radii[j] * 0.95);
        CHECK(tab.zeta_hat[j] >= tab.zeta_hat[j - 1]);  // monotone in the radius
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < radii.size(); ++j) {
            double expect = radii[j] * std::exp(-times[i]);
            CHECK(tab.M_hat[i][j] <= expect * 1.0001 + 1e-12);
            if (radii[j] > 0.0) CHECK(tab.M_hat[i][j] >= expect * 0.95);
            CHECK(tab.M_hat[i][j] <= tab.zeta_hat[j] + 1e-12);
        }
    }
}
