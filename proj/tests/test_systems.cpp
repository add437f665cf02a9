#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uaos/catalog.hpp"
#include "uaos/sampling.hpp"

using namespace uaos;

TEST_CASE("catalog names and unknown-name error") {
    auto names = catalog_names();
    CHECK(names.size() == 6);
    for (const auto& n : names) CHECK_NOTHROW(builtin(n));
    CHECK_THROWS_AS(builtin("nope"), std::invalid_argument);
}

TEST_CASE("interaction nonlinearity selectors") {
    GFun s = make_g("sin");
    CHECK(s.f(2.0, 3.0) == doctest::Approx(std::sin(6.0)));
    CHECK(s.bound == 1.0);
    GFun t = make_g("tanh");
    CHECK(t.f(1.0, 2.0) == doctest::Approx(std::tanh(3.0)));
    GFun c = make_g("const:0.5");
    CHECK(c.f(9.0, -4.0) == 0.5);
    CHECK(c.bound == 0.5);
    CHECK_THROWS_AS(make_g("cos"), std::invalid_argument);
}

TEST_CASE("example1 field oracles") {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    CHECK(sys.n == 3);
    CHECK(sys.k == 1);
    StateVec zero = eval_field(sys, {0.0, 0.0, 0.0});
    for (double v : zero) CHECK(v == 0.0);
    StateVec f = eval_field(sys, {1.0, 0.0, 0.0});
    CHECK(f[0] == doctest::Approx(-1.0));
    CHECK(f[1] == doctest::Approx(0.0));
    CHECK(f[2] == doctest::Approx(1.0));
    CHECK(eval_output(sys, {2.5, 1.0, -3.0})[0] == 2.5);
}

TEST_CASE("decoupled oracle field") {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    CHECK(eval_field(sys, {2.0})[0] == doctest::Approx(-2.0));
    CHECK(eval_output(sys, {2.0})[0] == 2.0);
}

TEST_CASE("equilibrium invariant: field(0)=0 and output(0)=0") {
    for (const auto& name : catalog_names()) {
        if (name == "spike_demo") continue;  // clock system, no equilibrium at 0
        auto sys = builtin(name);
        if (const auto* ode = std::get_if<OdeSystem>(&sys)) {
            StateVec z(static_cast<std::size_t>(ode->n), 0.0);
            for (double v : eval_field(*ode, z)) CHECK(v == 0.0);
            for (double v : eval_output(*ode, z)) CHECK(v == 0.0);
        } else {
            const auto& dde = std::get<DelaySystem>(sys);
            History z = History::zero(dde.r, dde.n);
            for (double v : dde.field(z)) CHECK(v == 0.0);
            for (double v : dde.output(z)) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("delay example constants and feasibility") {
    auto sys = std::get<DelaySystem>(builtin("example2"));
    CHECK(sys.params.at("lambda") == doctest::Approx(0.0135914091).epsilon(1e-7));
    CHECK(sys.params.at("K") == doctest::Approx(0.168191).epsilon(1e-5));
    CHECK(sys.params.at("feasibility_lhs") == doctest::Approx(0.208598).epsilon(1e-4));
    CHECK(sys.params.at("feasibility_margin") > 0.0);

    // lambda = 4e/2 >= p - Q = 0.5: infeasible
    CHECK_THROWS_WITH_AS(
        builtin("example2", {{"p", 1.0}, {"q", 2.0}}),
        doctest::Contains("lambda"), std::invalid_argument);
    // skip flag allows deliberately infeasible construction
    CHECK_NOTHROW(builtin("example2", {{"p", 1.0}, {"q", 2.0}, {"skip_feasibility", 1.0}}));
}

TEST_CASE("delay example field oracle") {
    auto sys = std::get<DelaySystem>(builtin("example2"));
    // Constant history at (1, 0): dx1 = -p + q, dx2 = g(1,0)*1 = 0 for sin.
    History h = History::constant(1.0, {1.0, 0.0});
    StateVec f = sys.field(h);
    CHECK(f[0] == doctest::Approx(-2.0 + 0.1));
    CHECK(f[1] == doctest::Approx(std::sin(0.0)));
    CHECK(sys.output(h)[0] == 1.0);
}

TEST_CASE("weighted history integral against a closed form") {
    // For x1(s) = exp(s), integrand is exp((1+sigma)s); closed form available.
    History h(1.0, 2, [](double s) { return StateVec{std::exp(s), 0.0}; });
    // integrand: exp(sigma*s) * exp(2s) = exp(3s); integral over [-1,0] is (1-e^-3)/3
    double sigma = 1.0;
    double exact = (1.0 - std::exp(-3.0)) / 3.0;
    CHECK(weighted_history_integral(h, sigma) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("spike train shape") {
    CHECK(spike_train_value(0.0) == 0.0);
    CHECK(spike_train_value(0.5) == 0.0);
    CHECK(spike_train_value(1.0) == 1.0);
    CHECK(spike_train_value(1.25) == doctest::Approx(0.5));
    CHECK(spike_train_value(2.125) == doctest::Approx(0.5));
    CHECK(spike_train_value(7.0) == 1.0);
    CHECK(spike_train_value(7.3) == 0.0);
}

TEST_CASE("history query validation") {
    History h = History::constant(1.0, {1.0});
    CHECK_THROWS_AS(h.query(-1.5), std::invalid_argument);
    CHECK_THROWS_AS(h.query(0.5), std::invalid_argument);
    CHECK(h.sup_norm() == doctest::Approx(1.0));
}

TEST_CASE("domain sampling: membership, determinism, seeds") {
    auto dec = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto s0 = sample_domain(dec, 1.0, 3, 0);
    CHECK(s0.size() == 3);
    for (const auto& x : s0) CHECK(std::fabs(x[0]) < 1.0);
    CHECK(sample_domain(dec, 1.0, 3, 0) == s0);  // deterministic per seed
    CHECK(sample_domain(dec, 1.0, 3, 1) != s0);

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto ad = std::get<OdeSystem>(builtin("adaptive_redesigned"));
        for (const auto& x : sample_domain(ad, 2.0, 50, seed))
            CHECK(0.5 * x[0] * x[0] + 0.5 * x[1] * x[1] <= 2.0 + 1e-9);

        auto dde = std::get<DelaySystem>(builtin("example2"));
        for (const auto& h : sample_domain(dde, 1.0, 20, seed))
            CHECK(example2_V(h, dde.params) <= 0.5 + 1e-9);
    }
}

TEST_CASE("shell probes sit just inside the radius") {
    auto dec = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto probes = shell_probes(dec, 1.0, 2);
    REQUIRE(probes.size() == 2);
    for (const auto& x : probes) CHECK(std::fabs(x[0]) == doctest::Approx(1.0 - 1e-6));

    auto e1 = std::get<OdeSystem>(builtin("example1"));
    for (const auto& x : shell_probes(e1, 3.0, 8)) {
        CHECK(norm2(x) <= 3.0);
        CHECK(norm2(x) > 3.0 * 0.97);
    }
}

TEST_CASE("thin domain rejection error") {
    OdeSystem sys;
    sys.name = "thin";
    sys.n = 1;
    sys.k = 1;
    sys.field = [](const StateVec&) { return StateVec{0.0}; };
    sys.output = [](const StateVec& x) { return x; };
    sys.in_domain = [](const StateVec&) { return false; };
    CHECK_THROWS_WITH_AS(sample_domain(sys, 1.0, 1, 0), doctest::Contains("domain too thin"),
                         std::runtime_error);
}
