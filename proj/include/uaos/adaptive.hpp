#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uaos/certificate.hpp"
#include "uaos/system.hpp"

namespace uaos {

/// Control-affine plant with matched parametric uncertainty:
/// dy/dt = f(y) + g(y) u + g(y) phi(y)' theta.
struct AdaptivePlant {
    std::string name;
    int n = 1;  // plant state dimension
    int p = 1;  // parameter dimension
    std::function<StateVec(const StateVec&)> f;
    std::function<StateVec(const StateVec&)> g;
    std::function<std::vector<double>(const StateVec&)> phi;
    std::function<double(const StateVec&)> P;
    std::function<StateVec(const StateVec&)> gradP;
    std::function<double(const StateVec&)> Q;
    std::function<double(const StateVec&)> k;
    std::function<double(const StateVec&)> mu;
    // Closed-form comparison functions for the stability certificate:
    // Q(y) >= rho_cert(P(y)) and a_cert(|y|) <= P(y).
    std::optional<ComparisonFn> rho_cert;
    std::optional<ComparisonFn> a_cert;
};

struct AdaptiveConfig {
    double gamma = 1.0;          // adaptation gain, > 0
    double L = 0.0;              // redesign gain, >= 0 (0 selects the classical scheme)
    std::vector<double> theta{1.0};
    std::vector<double> theta_hat0{0.0};

    void validate(const AdaptivePlant& plant) const;
};

struct ControlSignal {
    double u = 0.0;
    std::vector<double> theta_hat_dot;
};

/// Classical certainty-equivalence adaptive controller.
ControlSignal control_basic(const AdaptivePlant& plant, const AdaptiveConfig& cfg,
                            const StateVec& y, const std::vector<double>& theta_hat);

/// Redesigned controller with the damping term -L*mu(y)*gradP(y)*g(y).
ControlSignal control_redesigned(const AdaptivePlant& plant, const AdaptiveConfig& cfg,
                                 const StateVec& y, const std::vector<double>& theta_hat);

/// Autonomous closed loop in (y, z) coordinates with z = theta_hat - theta
/// and output y. The domain predicate (membership in the sublevel region
/// Omega) is attached when L > 0.
OdeSystem closed_loop(const AdaptivePlant& plant, const AdaptiveConfig& cfg);

/// Membership in Omega = { (y,z) : P(y) + (gamma/2)|z|^2 <= gamma*L }.
bool omega_member(const AdaptivePlant& plant, const AdaptiveConfig& cfg, const StateVec& x);

/// UAOS certificate for the redesigned closed loop (requires L > 0).
Certificate thm3_certificate(const AdaptivePlant& plant, const AdaptiveConfig& cfg);

/// Sampled verification of the plant hypotheses on a grid of radius grid_R;
/// returns worst margins (negative = violation).
struct AssumptionMargins {
    double h_margin = 0.0;  // nominal decay: min of -Q - gradP*(f + g*k)
    double a_margin = 0.0;  // regressor domination: min of mu*Q - |phi|^2
};
AssumptionMargins check_assumptions(const AdaptivePlant& plant, double grid_R = 3.0,
                                    int grid_N = 601);

/// The scalar demonstration plant dy/dt = u + theta*y with k(y) = -y,
/// P = y^2/2, Q = y^2, phi = y, mu = 1.
AdaptivePlant demo_plant();

}  // namespace uaos
