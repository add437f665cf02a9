#include "uaos/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uaos/sampling.hpp"
#include "uaos/threads.hpp"

namespace uaos {

namespace {

/// Minimum of rho over [lo, hi]: 1024-point grid, then golden-section
/// refinement around the grid minimum to 1e-10.
double min_rho(const ComparisonFn& rho, double lo, double hi) {
    if (hi <= lo) return rho(lo);
    const int grid = 1024;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i <= grid; ++i) {
        double s = lo + (hi - lo) * i / grid;
        double v = rho(s);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best_i + 1) / grid;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = rho(c), fd = rho(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = rho(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = rho(d);
        }
    }
    return std::min({best, fc, fd});
}

AnalyticBound finish_bound(const Certificate& cert, double eps, double sup_V, double sup_W,
                           int samples) {
    AnalyticBound out;
    out.sup_V = sup_V;
    out.sup_W = out.inflation * sup_W;
    out.samples = samples;
    out.a_eps = (*cert.a)(eps);
    out.rho_tilde = min_rho(*cert.rho, out.a_eps, out.a_eps + out.sup_W);
    if (!(out.rho_tilde > 0.0))
        throw std::runtime_error("analytic_T: rho is not positive on the decay interval");
    out.T = (1.0 + out.sup_V) / out.rho_tilde;
    return out;
}

}  // namespace

AnalyticBound analytic_T(const OdeSystem& sys, const Certificate& cert, double eps, double R,
                         int N_sup, std::uint64_t seed) {
    if (cert.target != Target::thm1)
        throw std::invalid_argument("analytic_T: certificate must provide the decay chain");
    if (!(eps > 0.0) || !(R > 0.0))
        throw std::invalid_argument("analytic_T: eps and R must be > 0");
    cert.validate();
    std::vector<StateVec> pts = sample_domain(sys, R, N_sup, seed);
    std::vector<StateVec> probes = shell_probes(sys, R, std::max(1, N_sup / 10));
    pts.insert(pts.end(), probes.begin(), probes.end());
    double sup_V = 0.0, sup_W = 0.0;
    for (const auto& x : pts) {
        sup_V = std::max(sup_V, cert.V->eval(x));
        sup_W = std::max(sup_W, cert.W->eval(x));
    }
    return finish_bound(cert, eps, sup_V, sup_W, static_cast<int>(pts.size()));
}

AnalyticBound analytic_T(const DelaySystem& sys, const Certificate& cert, double eps, double R,
                         int N_sup, std::uint64_t seed) {
    if (cert.target != Target::cor1)
        throw std::invalid_argument("analytic_T: certificate must provide the decay chain");
    if (!(eps > 0.0) || !(R > 0.0))
        throw std::invalid_argument("analytic_T: eps and R must be > 0");
    cert.validate();
    std::vector<History> pts = sample_domain(sys, R, N_sup, seed);
    std::vector<History> probes = shell_probes(sys, R, std::max(1, N_sup / 10));
    pts.insert(pts.end(), probes.begin(), probes.end());
    double sup_V = 0.0, sup_W = 0.0;
    for (const auto& h : pts) {
        sup_V = std::max(sup_V, cert.Vh->eval(h));
        sup_W = std::max(sup_W, cert.Wh->eval(h));
    }
    return finish_bound(cert, eps, sup_V, sup_W, static_cast<int>(pts.size()));
}

std::optional<double> empirical_conv_time(const Trajectory& traj, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("empirical_conv_time: eps must be > 0");
    const auto& knots = traj.times();
    const int sub = 4;  // extra samples per knot interval to catch crossings
    std::vector<double> ts;
    ts.reserve(knots.size() * sub);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        for (int j = 0; j < sub; ++j)
            ts.push_back(knots[i] + (knots[i + 1] - knots[i]) * j / sub);
    ts.push_back(traj.t_f());

    auto excess = [&](double t) { return norm2(traj.output_at(t)) - eps; };

    std::ptrdiff_t last = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(ts.size()) - 1; i >= 0; --i) {
        if (excess(ts[i]) > 0.0) {
            last = i;
            break;
        }
    }
    if (last < 0) return 0.0;
    if (last + 1 >= static_cast<std::ptrdiff_t>(ts.size())) return std::nullopt;

    double lo = ts[last], hi = ts[last + 1];
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    double T = 0.5 * (lo + hi);
    if (T > 0.95 * traj.t_f()) return std::nullopt;  // no persistent quiet tail
    return T;
}

namespace {

template <class Sys, class Init>
ConvergenceReport sweep_impl(const Sys& sys, const Certificate* cert, double eps, double R,
                             int N, std::uint64_t seed, const IntegratorConfig& cfg,
                             int threads, std::vector<Init> inits, std::size_t n_random,
                             const std::function<Trajectory(const Init&, const IntegratorConfig&)>& run,
                             const std::function<double(const Init&)>& init_norm) {
    ConvergenceReport rep;
    rep.system = sys.name;
    rep.eps = eps;
    rep.R = R;
    rep.seed = seed;
    if (cert) rep.bound = analytic_T(sys, *cert, eps, R, 4096 < 8 * N ? 4096 : 8 * N, seed);
    rep.horizon = rep.bound ? std::max(10.0, 2.0 * rep.bound->T) : cfg.t_f;

    IntegratorConfig run_cfg = cfg;
    run_cfg.t_f = rep.horizon;

    rep.per_sample.resize(inits.size());
    parallel_for(static_cast<int>(inits.size()), threads, [&](int i) {
        SweepSample s;
        s.x0_norm = init_norm(inits[i]);
        s.boundary_probe = static_cast<std::size_t>(i) >= n_random;
        Trajectory tr = run(inits[i], run_cfg);
        s.T_emp = empirical_conv_time(tr, eps);
        rep.per_sample[i] = s;
    });

    rep.verdict = rep.bound ? "uniform-consistent" : "inconclusive";
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
        const auto& s = rep.per_sample[i];
        if (!s.T_emp) {
            // Without a bound there is nothing to contradict; stay inconclusive.
            if (rep.bound) {
                rep.verdict = "bound-violated";
                if (rep.witness < 0) rep.witness = static_cast<int>(i);
            }
            continue;
        }
        rep.T_emp_sup = std::max(rep.T_emp_sup, *s.T_emp);
        if (rep.bound && *s.T_emp > rep.bound->T) {
            rep.verdict = "bound-violated";
            if (rep.witness < 0) rep.witness = static_cast<int>(i);
        }
    }
    return rep;
}

}  // namespace

ConvergenceReport uniformity_sweep(const OdeSystem& sys, const Certificate* cert, double eps,
                                   double R, int N, std::uint64_t seed,
                                   const IntegratorConfig& cfg, int threads) {
    if (N < 1) throw std::invalid_argument("uniformity_sweep: N must be >= 1");
    std::vector<StateVec> inits = sample_domain(sys, R, N, seed);
    std::size_t n_random = inits.size();
    for (auto& p : shell_probes(sys, R, std::max(1, N / 10))) inits.push_back(std::move(p));
    return sweep_impl<OdeSystem, StateVec>(
        sys, cert, eps, R, N, seed, cfg, threads, std::move(inits), n_random,
        [&sys](const StateVec& x0, const IntegratorConfig& c) {
            return integrate_ode(sys, x0, c);
        },
        [](const StateVec& x0) { return norm2(x0); });
}

ConvergenceReport uniformity_sweep(const DelaySystem& sys, const Certificate* cert, double eps,
                                   double R, int N, std::uint64_t seed,
                                   const IntegratorConfig& cfg, int threads) {
    if (N < 1) throw std::invalid_argument("uniformity_sweep: N must be >= 1");
    std::vector<History> inits = sample_domain(sys, R, N, seed);
    std::size_t n_random = inits.size();
    for (auto& p : shell_probes(sys, R, std::max(1, N / 10))) inits.push_back(std::move(p));
    return sweep_impl<DelaySystem, History>(
        sys, cert, eps, R, N, seed, cfg, threads, std::move(inits), n_random,
        [&sys](const History& h0, const IntegratorConfig& c) {
            return integrate_dde(sys, h0, c);
        },
        [](const History& h0) { return h0.sup_norm(); });
}

EnvelopeTable envelope(const OdeSystem& sys, const std::vector<double>& radii,
                       const std::vector<double>& times, int N, std::uint64_t seed,
                       const IntegratorConfig& cfg, int threads) {
    if (radii.empty() || times.empty())
        throw std::invalid_argument("envelope: radii and times must be non-empty");
    if (!std::is_sorted(radii.begin(), radii.end()) ||
        !std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("envelope: radii and times must be ascending");

    EnvelopeTable table;
    table.radii = radii;
    table.times = times;
    table.zeta_hat.assign(radii.size(), 0.0);
    table.M_hat.assign(times.size(), std::vector<double>(radii.size(), 0.0));

    IntegratorConfig run_cfg = cfg;
    run_cfg.t_f = std::max(cfg.t_f, times.back());

    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double s = radii[j];
        std::vector<StateVec> inits;
        if (s > 0.0) {
            inits = sample_domain(sys, s, N, seed + j);
            for (auto& p : shell_probes(sys, s, std::max(1, N / 10)))
                inits.push_back(std::move(p));
        } else {
            inits.assign(1, StateVec(static_cast<std::size_t>(sys.n), 0.0));
        }
        std::vector<std::vector<double>> suffix(inits.size(),
                                                std::vector<double>(times.size(), 0.0));
        std::vector<double> total(inits.size(), 0.0);
        parallel_for(static_cast<int>(inits.size()), threads, [&](int i) {
            Trajectory tr = integrate_ode(sys, inits[i], run_cfg);
            const auto& ts = tr.times();
            // Suffix maxima of |y| over knots, then read off each query time.
            std::vector<double> suf(ts.size());
            double run = 0.0;
            for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(ts.size()) - 1; k >= 0; --k) {
                run = std::max(run, norm2(tr.outputs()[k]));
                suf[k] = run;
            }
            total[i] = suf.empty() ? 0.0 : suf[0];
            for (std::size_t ti = 0; ti < times.size(); ++ti) {
                auto it = std::lower_bound(ts.begin(), ts.end(), times[ti]);
                double m = norm2(tr.output_at(std::min(times[ti], tr.t_f())));
                if (it != ts.end()) m = std::max(m, suf[it - ts.begin()]);
                suffix[i][ti] = m;
            }
        });
        for (std::size_t i = 0; i < inits.size(); ++i) {
            table.zeta_hat[j] = std::max(table.zeta_hat[j], total[i]);
            for (std::size_t ti = 0; ti < times.size(); ++ti)
                table.M_hat[ti][j] = std::max(table.M_hat[ti][j], suffix[i][ti]);
        }
    }
    for (std::size_t j = 1; j < table.zeta_hat.size(); ++j)
        table.zeta_hat[j] = std::max(table.zeta_hat[j], table.zeta_hat[j - 1]);
    return table;
}

}  // namespace uaos
