#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uaos/catalog.hpp"
#include "uaos/certificate.hpp"
#include "uaos/integrate.hpp"

namespace uaos {

/// Guaranteed settling-time bound computed from a decay certificate:
/// T = (1 + sup_V) / rho_tilde where rho_tilde is the minimum of rho over
/// [a(eps), a(eps) + sup_W] and the sups are sampled over the domain within
/// radius R (boundary probes included). A safety inflation factor is applied
/// to sup_W so that under-sampling can only widen the rho interval.
struct AnalyticBound {
    double T = 0.0;
    double sup_V = 0.0;
    double sup_W = 0.0;  // inflated value actually used
    double rho_tilde = 0.0;
    double a_eps = 0.0;
    double inflation = 1.05;
    int samples = 0;
};

AnalyticBound analytic_T(const OdeSystem& sys, const Certificate& cert, double eps, double R,
                         int N_sup = 4096, std::uint64_t seed = 1);
AnalyticBound analytic_T(const DelaySystem& sys, const Certificate& cert, double eps, double R,
                         int N_sup = 512, std::uint64_t seed = 1);

/// Last time the output norm exceeds eps, refined by bisection on the dense
/// output to 1e-6 time resolution. Returns 0 when |y| <= eps throughout and
/// nullopt ("not converged") when the exceedance-free condition fails to
/// persist through the final 5% of the horizon.
std::optional<double> empirical_conv_time(const Trajectory& traj, double eps);

struct SweepSample {
    double x0_norm = 0.0;
    std::optional<double> T_emp;
    bool boundary_probe = false;
};

struct ConvergenceReport {
    std::string system;
    double eps = 0.0;
    double R = 0.0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    std::optional<AnalyticBound> bound;
    std::vector<SweepSample> per_sample;
    double T_emp_sup = 0.0;
    std::string verdict;  // uniform-consistent | bound-violated | inconclusive
    int witness = -1;     // sample index responsible for a violation
};

/// Integrates from N sampled initial conditions in the domain within radius R
/// (plus deterministic boundary probes) and compares empirical settling times
/// against the certificate bound when one is supplied.
ConvergenceReport uniformity_sweep(const OdeSystem& sys, const Certificate* cert, double eps,
                                   double R, int N, std::uint64_t seed,
                                   const IntegratorConfig& cfg, int threads = 1);
ConvergenceReport uniformity_sweep(const DelaySystem& sys, const Certificate* cert, double eps,
                                   double R, int N, std::uint64_t seed,
                                   const IntegratorConfig& cfg, int threads = 1);

struct EnvelopeTable {
    std::vector<double> radii;
    std::vector<double> times;
    std::vector<double> zeta_hat;               // per radius, monotone in s
    std::vector<std::vector<double>> M_hat;     // [time][radius]
};

/// Monte-Carlo output-envelope estimates: zeta_hat(s) is the largest output
/// norm seen from initial conditions within radius s; M_hat(t, s) restricts
/// the sup to times >= t.
EnvelopeTable envelope(const OdeSystem& sys, const std::vector<double>& radii,
                       const std::vector<double>& times, int N, std::uint64_t seed,
                       const IntegratorConfig& cfg, int threads = 1);

}  // namespace uaos
