// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "uaos/adaptive.hpp"
#include "uaos/barbalat.hpp"
#include "uaos/catalog.hpp"
#include "uaos/certificate.hpp"
#include "uaos/convergence.hpp"
#include "uaos/integrate.hpp"
#include "uaos/presets.hpp"
#include "uaos/sampling.hpp"

using namespace uaos;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& s) { notes.push_back(s); }

void report(int idx, const char* what, bool ok) {
    std::printf("criterion %d (%s): %s\n", idx, what, ok ? "PASS" : "FAIL");
    if (!ok) {
        ++failures;
        for (const auto& n : notes) std::printf("    %s\n", n.c_str());
    }
    notes.clear();
}

bool expect(bool cond, const std::string& why) {
    if (!cond) note(why);
    return cond;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Worst (most negative) margin across non-informational conditions.
double worst_margin(const CheckReport& rep) {
    double m = 0.0;
    for (const auto& c : rep.conditions) {
        if (c.id.rfind("sup", 0) == 0) continue;
        m = std::min(m, c.margin);
    }
    return m;
}

// ---------------------------------------------------------------------------

bool criterion1() {
    auto sys = std::get<OdeSystem>(builtin("decoupled_linear"));
    auto cert = make_certificate("decoupled-thm1", sys);

    auto bound = analytic_T(sys, cert, 0.1, 1.0);
    bool ok = expect(std::fabs(bound.T - 150.0) <= 0.02 * 150.0,
                     "analytic T = " + std::to_string(bound.T) + ", want 150 +- 2%");

    IntegratorConfig cfg;
    auto sweep = uniformity_sweep(sys, &cert, 0.1, 1.0, 100, 1, cfg, 8);
    ok &= expect(sweep.verdict == "uniform-consistent", "sweep verdict: " + sweep.verdict);
    double want = std::log(10.0);
    ok &= expect(std::fabs(sweep.T_emp_sup - want) <= 1e-3,
                 "T_emp_sup = " + std::to_string(sweep.T_emp_sup) + ", want ln 10 +- 1e-3");
    ok &= expect(sweep.T_emp_sup <= bound.T, "empirical sup exceeds the analytic bound");
    return ok;
}

bool criterion2() {
    auto sys = std::get<OdeSystem>(builtin("example1"));
    auto cert = make_certificate("example1-thm2", sys);

    // Static sampling over the radius-3 ball.
    auto rep = check_thm2(sys, cert, 3.0, 500, {});
    bool ok = expect(rep.overall, "static hypothesis check failed");
    ok &= expect(worst_margin(rep) >= -1e-6,
                 "static worst margin " + std::to_string(worst_margin(rep)));

    // 20 trajectories from the unit ball, checked one at a time to bound
    // memory (the stiff phase produces dense knot sequences).
    IntegratorConfig cfg;
    cfg.t_f = 20.0;
    auto inits = sample_domain(sys, 1.0, 20, 2);
    for (std::size_t i = 0; i < inits.size() && ok; ++i) {
        std::vector<Trajectory> one;
        one.push_back(integrate_ode(sys, inits[i], cfg));
        auto trep = check_thm2(sys, cert, 3.0, 0, one);
        ok &= expect(trep.overall && worst_margin(trep) >= -1e-6,
                     "trajectory " + std::to_string(i) + " worst margin " +
                         std::to_string(worst_margin(trep)));
        double yT = std::fabs(one[0].output_at(20.0)[0]);
        ok &= expect(yT < 1e-3, "output at t=20 is " + std::to_string(yT));
    }

    // The third component is exactly exponential from (0,0,1).
    auto wtraj = integrate_ode(sys, {0.0, 0.0, 1.0}, cfg);
    for (std::size_t i = 0; i < wtraj.times().size() && ok; ++i) {
        double ratio = wtraj.states()[i][2] / std::exp(wtraj.times()[i]);
        ok &= expect(std::fabs(ratio - 1.0) <= 1e-6,
                     "exp-growth ratio " + std::to_string(ratio) + " at t=" +
                         std::to_string(wtraj.times()[i]));
    }
    return ok;
}

bool criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    auto sys = std::get<DelaySystem>(builtin("example2"));

    bool ok = expect(std::fabs(sys.params.at("lambda") - 0.0135914091) <= 1e-8,
                     "lambda = " + std::to_string(sys.params.at("lambda")));
    ok &= expect(std::fabs(sys.params.at("feasibility_lhs") - 0.208598) <= 1e-4,
                 "feasibility lhs = " + std::to_string(sys.params.at("feasibility_lhs")));

    auto cert = make_certificate("example2-cor1", sys);
    IntegratorConfig cfg;
    cfg.t_f = 30.0;
    std::vector<Trajectory> trajs;
    for (const auto& h0 : sample_domain(sys, 1.0, 6, 5))
        trajs.push_back(integrate_dde(sys, h0, cfg));

    auto rep = check_cor1(sys, cert, 1.0, 200, trajs);
    ok &= expect(rep.overall, "hypothesis check failed");
    ok &= expect(worst_margin(rep) >= -1e-5,
                 "worst margin " + std::to_string(worst_margin(rep)));

    // Invariance of the sublevel region along every computed solution.
    for (const auto& tr : trajs) {
        ok &= expect(tr.domain_violations().empty(), "domain predicate violated");
        double worst = 0.0;
        for (double t : tr.times())
            worst = std::max(worst, example2_V(tr.history_at(t), sys.params));
        ok &= expect(worst <= 0.5 + 1e-6, "sup V along solution = " + std::to_string(worst));
    }

    auto sweep = uniformity_sweep(sys, &cert, 0.1, 1.0, 40, 3, cfg, 8);
    ok &= expect(sweep.verdict == "uniform-consistent", "sweep verdict: " + sweep.verdict);

    double dt = seconds_since(t0);
    ok &= expect(dt < 60.0, "runtime " + std::to_string(dt) + "s exceeds 60s");
    return ok;
}

bool criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    const double dt = 1e-3, horizon = 100.0;

    struct Row {
        const char* name;
        bool quc;
    };
    const Row rows[] = {{"sin_t", true},  {"neg_floor_t", true}, {"floor_t", false},
                        {"sin_t2", false}, {"neg_t", true},       {"t", true}};
    bool ok = true;
    for (const auto& row : rows) {
        auto rep = quc_verdict(make_signal(row.name, dt, horizon));
        ok &= expect(rep.quc == row.quc,
                     std::string(row.name) + " quc=" + (rep.quc ? "true" : "false"));
    }

    auto inv = lemma3_check(make_signal("inv_1pt", dt, 1000.0), ComparisonFn::quadratic(1.0),
                            true);
    ok &= expect(std::fabs(inv.integral - 1.0) <= 1e-3,
                 "integral = " + std::to_string(inv.integral));
    ok &= expect(inv.hypotheses_met && inv.conclusion == "tail-should-vanish",
                 "1/(1+t) conclusion: " + inv.conclusion);
    ok &= expect(inv.tail_sup <= 1.1e-3, "tail sup = " + std::to_string(inv.tail_sup));

    auto spike = lemma3_check(make_signal("spike_train", dt, 1000.0),
                              ComparisonFn::quadratic(1.0), true);
    ok &= expect(!spike.hypotheses_met && spike.conclusion == "no-conclusion",
                 "spike-train conclusion: " + spike.conclusion);
    ok &= expect(std::fabs(spike.tail_sup - 1.0) <= 1e-9,
                 "spike tail sup = " + std::to_string(spike.tail_sup));

    double el = seconds_since(t0);
    ok &= expect(el < 10.0, "runtime " + std::to_string(el) + "s exceeds 10s");
    return ok;
}

bool criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;

    auto margins = check_assumptions(demo_plant());
    ok &= expect(margins.h_margin >= -1e-12 && margins.a_margin >= -1e-12,
                 "plant hypothesis margins negative");

    auto sys = std::get<OdeSystem>(builtin("adaptive_redesigned"));
    auto cert = make_certificate("adaptive-thm3", sys);
    IntegratorConfig tcfg;
    tcfg.t_f = 20.0;
    std::vector<Trajectory> trajs;
    for (const auto& x0 : sample_domain(sys, 2.0, 5, 9))
        trajs.push_back(integrate_ode(sys, x0, tcfg));
    auto rep = check_thm1(sys, cert, 2.0, 300, trajs);
    ok &= expect(rep.overall, "closed-loop hypothesis check failed");

    // Plant-energy decay along solutions inside the invariant region.
    for (const auto& tr : trajs)
        for (const auto& x : tr.states())
            ok &= expect(cert.W->dot(x) <= -0.5 * x[0] * x[0] + 1e-6,
                         "plant-energy decay violated at a knot");

    auto bound = analytic_T(sys, cert, 0.1, 2.0);
    ok &= expect(std::fabs(bound.T - 300.0) <= 0.02 * 300.0,
                 "analytic T = " + std::to_string(bound.T) + ", want 300 +- 2%");

    IntegratorConfig cfg;
    auto sweep = uniformity_sweep(sys, &cert, 0.1, 2.0, 200, 4, cfg, 8);
    ok &= expect(sweep.verdict == "uniform-consistent", "sweep verdict: " + sweep.verdict);

    // The classical controller has no region-uniform rate: with the estimate
    // initially below the destabilising threshold (z0 = -2), the settling
    // time grows without bound as the initial output shrinks.
    auto basic = std::get<OdeSystem>(builtin("adaptive_basic"));
    IntegratorConfig bcfg;
    bcfg.t_f = 60.0;
    double prev = -1.0;
    for (double y0 : {0.5, 5e-2, 5e-3, 5e-4}) {
        auto T = empirical_conv_time(integrate_ode(basic, {y0, -2.0}, bcfg), 0.1);
        ok &= expect(T.has_value(), "classical loop did not settle from y0=" +
                                        std::to_string(y0));
        if (T) {
            ok &= expect(*T > prev, "settling time not increasing at y0=" +
                                        std::to_string(y0));
            prev = *T;
        }
    }

    double el = seconds_since(t0);
    ok &= expect(el < 30.0, "runtime " + std::to_string(el) + "s exceeds 30s");
    return ok;
}

bool criterion6() {
    bool ok = true;

    // Derivative-estimator accuracy against closed forms.
    {
        auto sys = std::get<OdeSystem>(builtin("example1"));
        auto cert = make_certificate("example1-thm2", sys);
        IntegratorConfig cfg;
        cfg.t_f = 6.0;
        auto traj = integrate_ode(sys, {0.5, 0.5, 0.5}, cfg);
        for (double t : {0.0, 1.0, 2.0, 4.0}) {
            double est = dini_derivative(*cert.V, traj, t);
            double closed = cert.V->dot(traj.dense(t));
            double tol = std::max(1e-3 * std::fabs(closed), 1e-3);
            ok &= expect(std::fabs(est - closed) <= tol,
                         "derivative estimate off by " + std::to_string(est - closed) +
                             " at t=" + std::to_string(t));
        }
    }

    // Delay-solver order: halving the step cuts the error by >= 8x.
    {
        auto sys = std::get<DelaySystem>(builtin("example2"));
        History h0(1.0, 2,
                   [](double s) { return StateVec{0.4 * std::cos(2.0 * s), 0.1}; });
        auto final_x1 = [&](double step) {
            IntegratorConfig cfg;
            cfg.t_f = 5.0;
            cfg.dde_step = step;
            return integrate_dde(sys, h0, cfg).states().back()[0];
        };
        double ref = final_x1(1.0 / 512.0);
        double ec = std::fabs(final_x1(0.05) - ref);
        double ef = std::fabs(final_x1(0.025) - ref);
        ok &= expect(ec > 0.0 && ef * 8.0 <= ec,
                     "error ratio " + std::to_string(ec / std::max(ef, 1e-300)));
    }

    // Determinism and invariants across seeds.
    {
        auto sys = std::get<OdeSystem>(builtin("example1"));
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto a = sample_domain(sys, 3.0, 50, seed);
            auto b = sample_domain(sys, 3.0, 50, seed);
            ok &= expect(a == b, "sampling not deterministic for seed " +
                                     std::to_string(seed));
            for (const auto& x : a)
                ok &= expect(norm2(x) < 3.0, "sample outside the ball");
            IntegratorConfig cfg;
            cfg.t_f = 5.0;
            auto t1 = integrate_ode(sys, a[0], cfg);
            auto t2 = integrate_ode(sys, a[0], cfg);
            ok &= expect(t1.states() == t2.states(),
                         "integration not bitwise reproducible");
        }
    }
    return ok;
}

}  // namespace

int main() {
    report(1, "settling-time bound and uniform sweep, scalar system", criterion1());
    report(2, "coupled system: growth-condition certificate and stiff horizon", criterion2());
    report(3, "delay example: constants, hypothesis margins, invariance, sweep", criterion3());
    report(4, "signal continuity verdicts and vanishing-signal lemma", criterion4());
    report(5, "adaptive redesign: certificate, bound, classical non-uniformity", criterion5());
    report(6, "numerics: derivative estimates, delay order, determinism", criterion6());
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
