#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "uaos/adaptive.hpp"
#include "uaos/barbalat.hpp"
#include "uaos/catalog.hpp"
#include "uaos/convergence.hpp"
#include "uaos/presets.hpp"
#include "uaos/report.hpp"
#include "uaos/sampling.hpp"

namespace {

using namespace uaos;
using nlohmann::json;

struct CommonOpts {
    std::string system;
    std::vector<std::string> params;  // key=value
    std::string g_spec = "sin";
    std::string json_path, csv_path, svg_path;
    std::uint64_t seed = 1;
    int threads = 1;
    IntegratorConfig cfg;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        auto pos = kv.find('=');
        if (pos == std::string::npos)
            throw CLI::ValidationError("--param", "expected key=value, got '" + kv + "'");
        out[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
    }
    return out;
}

json config_json(const CommonOpts& o, const std::string& subcommand) {
    json cfg{{"subcommand", subcommand},
             {"seed", o.seed},
             {"threads", o.threads},
             {"integrator",
              {{"rel_tol", o.cfg.rel_tol},
               {"abs_tol", o.cfg.abs_tol},
               {"max_step", o.cfg.max_step},
               {"t_f", o.cfg.t_f},
               {"dde_step", o.cfg.dde_step}}}};
    if (!o.system.empty()) {
        cfg["system"] = o.system;
        cfg["g"] = o.g_spec;
        cfg["params"] = parse_params(o.params);
    }
    return cfg;
}

void emit(const CommonOpts& o, const json& report) {
    std::string text = report.dump(2) + "\n";
    if (!o.json_path.empty())
        write_file(o.json_path, text);
    else
        std::cout << text;
}

Target parse_target(const std::string& s) {
    if (s == "thm1") return Target::thm1;
    if (s == "thm2") return Target::thm2;
    if (s == "prop1") return Target::prop1;
    if (s == "cor1") return Target::cor1;
    if (s == "cor2") return Target::cor2;
    throw CLI::ValidationError("--target", "unknown target '" + s + "'");
}

void add_common(CLI::App* sub, CommonOpts& o, bool needs_system, bool seed_required = false) {
    if (needs_system)
        sub->add_option("--system", o.system, "catalog system name")->required();
    sub->add_option("--param", o.params, "system parameter key=value (repeatable)");
    sub->add_option("--g", o.g_spec, "interaction nonlinearity: sin, tanh, const:<c>");
    sub->add_option("--json", o.json_path, "write the JSON report here (default stdout)");
    sub->add_option("--csv", o.csv_path, "write CSV data here");
    sub->add_option("--svg", o.svg_path, "write an SVG chart here");
    auto* s = sub->add_option("--seed", o.seed, "sampling seed");
    if (seed_required) s->required();
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--tf", o.cfg.t_f, "integration horizon");
    sub->add_option("--rel-tol", o.cfg.rel_tol, "relative tolerance");
    sub->add_option("--abs-tol", o.cfg.abs_tol, "absolute tolerance");
    sub->add_option("--max-step", o.cfg.max_step, "max step size");
    sub->add_option("--dde-step", o.cfg.dde_step, "fixed delay-system step");
}

std::vector<Trajectory> sample_trajectories(const BuiltinSystem& sys, double R, int count,
                                            std::uint64_t seed, const IntegratorConfig& cfg) {
    std::vector<Trajectory> out;
    if (const auto* ode = std::get_if<OdeSystem>(&sys)) {
        for (const auto& x0 : sample_domain(*ode, R, count, seed))
            out.push_back(integrate_ode(*ode, x0, cfg));
    } else {
        const auto& dde = std::get<DelaySystem>(sys);
        for (const auto& h0 : sample_domain(dde, R, count, seed))
            out.push_back(integrate_dde(dde, h0, cfg));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Output-stability toolkit: simulation, certificate checking, "
                 "settling-time bounds, and signal classification"};
    app.require_subcommand(1);

    // ---- list-systems ----
    CommonOpts lo;
    auto* list = app.add_subcommand("list-systems", "list catalog systems and presets");
    list->add_option("--json", lo.json_path, "write the JSON report here");
    list->callback([&] {
        json payload{{"systems", catalog_names()},
                     {"certificates", certificate_presets()},
                     {"signals", signal_names()}};
        emit(lo, make_report("list-systems", json::object(), payload));
    });

    // ---- simulate ----
    CommonOpts so;
    std::vector<double> sim_x0;
    auto* sim = app.add_subcommand("simulate", "integrate one initial condition");
    add_common(sim, so, true);
    sim->add_option("--x0", sim_x0,
                    "initial state (constant initial history for delay systems)")
        ->required();
    sim->callback([&] {
        BuiltinSystem sys = builtin(so.system, parse_params(so.params), so.g_spec);
        Trajectory traj = std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, OdeSystem>)
                    return integrate_ode(s, sim_x0, so.cfg);
                else
                    return integrate_dde(s, History::constant(s.r, sim_x0), so.cfg);
            },
            sys);
        if (!so.csv_path.empty()) write_file(so.csv_path, trajectory_csv(traj));
        if (!so.svg_path.empty()) {
            std::vector<SvgSeries> series(traj.out_dim());
            for (int kidx = 0; kidx < traj.out_dim(); ++kidx) {
                series[kidx].label = "y" + std::to_string(kidx + 1);
                for (std::size_t j = 0; j < traj.times().size(); ++j) {
                    series[kidx].t.push_back(traj.times()[j]);
                    series[kidx].v.push_back(traj.outputs()[j][kidx]);
                }
            }
            write_file(so.svg_path, render_svg(series, so.system + " output"));
        }
        json cfg = config_json(so, "simulate");
        cfg["x0"] = sim_x0;
        json payload{{"knots", traj.times().size()},
                     {"t_f", traj.t_f()},
                     {"final_state", traj.states().back()},
                     {"final_output", traj.outputs().back()},
                     {"domain_violations", traj.domain_violations().size()}};
        emit(so, make_report("simulate", cfg, payload));
    });

    // ---- certify ----
    CommonOpts co;
    std::string cert_name, target_str;
    double cert_R = 3.0;
    int cert_N = 500, cert_trajs = 10;
    CheckTol cert_tol;
    auto* cert_cmd = app.add_subcommand("certify", "check a certificate against a system");
    add_common(cert_cmd, co, true);
    cert_cmd->add_option("--cert", cert_name, "certificate preset")->required();
    cert_cmd->add_option("--target", target_str, "expected certificate target");
    cert_cmd->add_option("--R", cert_R, "sampling radius");
    cert_cmd->add_option("--N", cert_N, "sampled states/histories");
    cert_cmd->add_option("--trajs", cert_trajs, "sampled trajectories");
    cert_cmd->add_option("--tol-abs", cert_tol.abs, "absolute margin tolerance");
    cert_cmd->add_option("--tol-rel", cert_tol.rel, "relative margin tolerance");
    cert_cmd->callback([&] {
        BuiltinSystem sys = builtin(co.system, parse_params(co.params), co.g_spec);
        Certificate cert = make_certificate(cert_name, sys);
        if (!target_str.empty() && parse_target(target_str) != cert.target)
            throw CLI::ValidationError("--target", "preset '" + cert_name + "' targets " +
                                                       target_name(cert.target));
        std::vector<Trajectory> trajs =
            sample_trajectories(sys, cert_R, cert_trajs, co.seed + 1000, co.cfg);
        CheckReport rep;
        if (const auto* ode = std::get_if<OdeSystem>(&sys)) {
            switch (cert.target) {
                case Target::thm1:
                    rep = check_thm1(*ode, cert, cert_R, cert_N, trajs, cert_tol, co.seed);
                    break;
                case Target::thm2:
                    rep = check_thm2(*ode, cert, cert_R, cert_N, trajs, cert_tol, co.seed);
                    break;
                case Target::prop1: rep = check_prop1(*ode, cert, trajs, cert_tol); break;
                default:
                    throw CLI::ValidationError("--cert", "delay-system certificate bound to "
                                                         "a finite-dimensional system");
            }
        } else {
            const auto& dde = std::get<DelaySystem>(sys);
            switch (cert.target) {
                case Target::cor1:
                    rep = check_cor1(dde, cert, cert_R, cert_N, trajs, cert_tol, co.seed);
                    break;
                case Target::cor2:
                    rep = check_cor2(dde, cert, cert_R, cert_N, trajs, cert_tol, co.seed);
                    break;
                case Target::prop1: rep = check_prop1(dde, cert, trajs, cert_tol); break;
                default:
                    throw CLI::ValidationError("--cert", "finite-dimensional certificate "
                                                         "bound to a delay system");
            }
        }
        json cfg = config_json(co, "certify");
        cfg["cert"] = cert_name;
        cfg["R"] = cert_R;
        cfg["N"] = cert_N;
        cfg["trajs"] = cert_trajs;
        cfg["tol"] = {{"abs", cert_tol.abs}, {"rel", cert_tol.rel}};
        emit(co, make_report("certify", cfg, to_json(rep)));
        if (!rep.overall) std::exit(1);
    });

    // ---- tconv ----
    CommonOpts to_;
    std::string tconv_cert;
    double tconv_eps = 0.1, tconv_R = 1.0;
    auto* tconv = app.add_subcommand("tconv", "certificate settling-time bound");
    add_common(tconv, to_, true);
    tconv->add_option("--cert", tconv_cert, "certificate preset")->required();
    tconv->add_option("--eps", tconv_eps, "output threshold")->required();
    tconv->add_option("--R", tconv_R, "initial-condition radius")->required();
    tconv->callback([&] {
        BuiltinSystem sys = builtin(to_.system, parse_params(to_.params), to_.g_spec);
        Certificate cert = make_certificate(tconv_cert, sys);
        AnalyticBound b = std::visit(
            [&](const auto& s) { return analytic_T(s, cert, tconv_eps, tconv_R, 4096, to_.seed); },
            sys);
        json cfg = config_json(to_, "tconv");
        cfg["cert"] = tconv_cert;
        cfg["eps"] = tconv_eps;
        cfg["R"] = tconv_R;
        emit(to_, make_report("tconv", cfg, to_json(b)));
    });

    // ---- sweep ----
    CommonOpts wo;
    std::string sweep_cert;
    double sweep_eps = 0.1, sweep_R = 1.0;
    int sweep_N = 100;
    auto* sweep = app.add_subcommand("sweep", "empirical settling-time sweep");
    add_common(sweep, wo, true, /*seed_required=*/true);
    sweep->add_option("--cert", sweep_cert, "optional certificate preset for the bound");
    sweep->add_option("--eps", sweep_eps, "output threshold")->required();
    sweep->add_option("--R", sweep_R, "initial-condition radius")->required();
    sweep->add_option("--N", sweep_N, "sample count");
    sweep->callback([&] {
        BuiltinSystem sys = builtin(wo.system, parse_params(wo.params), wo.g_spec);
        std::optional<Certificate> cert;
        if (!sweep_cert.empty()) cert = make_certificate(sweep_cert, sys);
        ConvergenceReport rep = std::visit(
            [&](const auto& s) {
                return uniformity_sweep(s, cert ? &*cert : nullptr, sweep_eps, sweep_R,
                                        sweep_N, wo.seed, wo.cfg, wo.threads);
            },
            sys);
        if (!wo.csv_path.empty()) write_file(wo.csv_path, sweep_csv(rep));
        if (!wo.svg_path.empty()) {
            SvgSeries sc;
            sc.label = "T_emp vs |x0|";
            for (const auto& s : rep.per_sample)
                if (s.T_emp) {
                    sc.t.push_back(s.x0_norm);
                    sc.v.push_back(*s.T_emp);
                }
            write_file(wo.svg_path, render_svg({sc}, wo.system + " settling times"));
        }
        json cfg = config_json(wo, "sweep");
        cfg["cert"] = sweep_cert;
        cfg["eps"] = sweep_eps;
        cfg["R"] = sweep_R;
        cfg["N"] = sweep_N;
        emit(wo, make_report("sweep", cfg, to_json(rep)));
        if (rep.verdict == "bound-violated") std::exit(1);
    });

    // ---- envelope ----
    CommonOpts eo;
    std::vector<double> env_radii, env_times;
    int env_N = 50;
    auto* env = app.add_subcommand("envelope", "output envelope table");
    add_common(env, eo, true, /*seed_required=*/true);
    env->add_option("--radii", env_radii, "ascending radii")->required();
    env->add_option("--times", env_times, "ascending query times")->required();
    env->add_option("--N", env_N, "samples per radius");
    env->callback([&] {
        BuiltinSystem sys = builtin(eo.system, parse_params(eo.params), eo.g_spec);
        const auto* ode = std::get_if<OdeSystem>(&sys);
        if (!ode)
            throw CLI::ValidationError("--system", "envelope supports finite-dimensional "
                                                   "systems only");
        EnvelopeTable table =
            envelope(*ode, env_radii, env_times, env_N, eo.seed, eo.cfg, eo.threads);
        json cfg = config_json(eo, "envelope");
        cfg["radii"] = env_radii;
        cfg["times"] = env_times;
        cfg["N"] = env_N;
        emit(eo, make_report("envelope", cfg, to_json(table)));
    });

    // ---- barbalat ----
    CommonOpts bo;
    std::string sig_name, rho_spec = "linear:1";
    double sig_dt = 0.01, sig_horizon = 1000.0;
    bool rho_mono = true;
    auto* bar = app.add_subcommand("barbalat", "signal classification and lemma check");
    bar->add_option("--signal", sig_name, "signal name")->required();
    bar->add_option("--dt", sig_dt, "sample step");
    bar->add_option("--horizon", sig_horizon, "signal horizon");
    bar->add_option("--rho", rho_spec, "rho selector: linear:<c> or quad:<c>");
    bar->add_flag("--rho-monotone,!--no-rho-monotone", rho_mono, "rho is non-decreasing");
    bar->add_option("--json", bo.json_path, "write the JSON report here");
    bar->callback([&] {
        Signal sig = make_signal(sig_name, sig_dt, sig_horizon);
        ComparisonFn rho = [&] {
            auto pos = rho_spec.find(':');
            double c = pos == std::string::npos ? 1.0 : std::stod(rho_spec.substr(pos + 1));
            std::string kind = rho_spec.substr(0, pos);
            if (kind == "linear") return ComparisonFn::linear(c);
            if (kind == "quad") return ComparisonFn::quadratic(c);
            throw CLI::ValidationError("--rho", "unknown selector '" + rho_spec + "'");
        }();
        Lemma3Report rep;
        bool nonneg = true;
        for (double v : sig.v) nonneg = nonneg && v >= 0.0;
        json payload;
        if (nonneg) {
            rep = lemma3_check(sig, rho, rho_mono);
            payload = to_json(rep);
        } else {
            payload = {{"signal", sig.name}, {"quc", to_json(quc_verdict(sig))}};
        }
        json cfg{{"subcommand", "barbalat"}, {"signal", sig_name},     {"dt", sig_dt},
                 {"horizon", sig_horizon},   {"rho", rho_spec},        {"rho_monotone", rho_mono}};
        emit(bo, make_report("barbalat", cfg, payload));
    });

    // ---- adaptive ----
    CommonOpts ao;
    double ad_gamma = 1.0, ad_L = 2.0, ad_theta = 1.0, ad_y0 = 0.5, ad_z0 = -1.0;
    double ad_eps = 0.1;
    auto* ad = app.add_subcommand("adaptive", "adaptive-control demo pipeline");
    ad->add_option("--gamma", ad_gamma, "adaptation gain");
    ad->add_option("--L", ad_L, "redesign gain (0 = classical scheme)");
    ad->add_option("--theta", ad_theta, "true parameter");
    ad->add_option("--y0", ad_y0, "plant initial state");
    ad->add_option("--z0", ad_z0, "initial parameter-estimate error");
    ad->add_option("--eps", ad_eps, "settling threshold");
    ad->add_option("--tf", ao.cfg.t_f, "integration horizon");
    ad->add_option("--json", ao.json_path, "write the JSON report here");
    ad->add_option("--seed", ao.seed, "sampling seed");
    ad->callback([&] {
        AdaptivePlant plant = demo_plant();
        AdaptiveConfig acfg;
        acfg.gamma = ad_gamma;
        acfg.L = ad_L;
        acfg.theta = {ad_theta};
        acfg.theta_hat0 = {ad_z0 + ad_theta};
        AssumptionMargins margins = check_assumptions(plant);
        OdeSystem loop = closed_loop(plant, acfg);
        Trajectory traj = integrate_ode(loop, {ad_y0, ad_z0}, ao.cfg);
        std::optional<double> T_emp = empirical_conv_time(traj, ad_eps);
        json payload{{"assumption_margins",
                      {{"decay", margins.h_margin}, {"regressor", margins.a_margin}}},
                     {"system", loop.name},
                     {"final_output", traj.outputs().back()},
                     {"T_emp", T_emp ? json(*T_emp) : json(nullptr)}};
        bool ok = margins.h_margin >= -1e-9 && margins.a_margin >= -1e-9;
        if (ad_L > 0.0) {
            Certificate cert = thm3_certificate(plant, acfg);
            std::vector<Trajectory> trajs{traj};
            CheckReport rep = check_thm1(loop, cert, 2.0, 200, trajs, {}, ao.seed);
            payload["certificate"] = to_json(rep);
            ok = ok && rep.overall;
        }
        json cfg{{"subcommand", "adaptive"}, {"gamma", ad_gamma}, {"L", ad_L},
                 {"theta", ad_theta},        {"y0", ad_y0},       {"z0", ad_z0},
                 {"eps", ad_eps},            {"tf", ao.cfg.t_f},  {"seed", ao.seed}};
        emit(ao, make_report("adaptive", cfg, payload));
        if (!ok) std::exit(1);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
