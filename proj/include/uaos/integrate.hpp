#pragma once

#include <memory>
#include <vector>

#include "uaos/system.hpp"

namespace uaos {

/// ODE stepping scheme. The default starts with the embedded explicit 5(4)
/// pair and, when stiffness is detected (step-size collapse or an exhausted
/// step budget), continues with an L-stable semi-implicit 2(3) Rosenbrock
/// method so that trajectories with exponentially growing curvature remain
/// integrable.
enum class OdeMethod { auto_switch, explicit_rk, semi_implicit };

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.05;
    double t_f = 10.0;
    double dde_step = 0.05;  // fixed step for the method of steps; must divide r
    OdeMethod method = OdeMethod::auto_switch;
    long step_budget = 20000;  // explicit-phase attempts before the stiff switch

    void validate(double delay_r = 0.0) const;
};

/// Densely-queryable numerical solution on [0, t_f].
/// Knot data plus cubic-Hermite interpolation between knots; for delay
/// systems the initial history is retained so that x_t can be reconstructed
/// at any time.
class Trajectory {
public:
    struct Data {
        std::vector<double> times;
        std::vector<StateVec> states;
        std::vector<StateVec> derivs;   // vector field at the knots
        std::vector<StateVec> outputs;  // output at the knots
        double t_f = 0.0;
        int n = 0;
        int k = 0;
        // ODE output map (empty for delay systems)
        std::function<StateVec(const StateVec&)> output_of_state;
        // Delay-system extras
        double delay_r = 0.0;
        std::shared_ptr<History> initial_history;
        std::function<StateVec(const History&)> output_of_history;
        // Times at which the domain predicate failed on an accepted step
        std::vector<double> domain_violations;
    };

    explicit Trajectory(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    const std::vector<double>& times() const { return d_->times; }
    const std::vector<StateVec>& states() const { return d_->states; }
    const std::vector<StateVec>& outputs() const { return d_->outputs; }
    const std::vector<double>& domain_violations() const { return d_->domain_violations; }
    double t_f() const { return d_->t_f; }
    int dim() const { return d_->n; }
    int out_dim() const { return d_->k; }
    bool is_delay() const { return d_->delay_r > 0.0; }
    double delay_r() const { return d_->delay_r; }

    /// Cubic-Hermite interpolated state; exact at knots.
    StateVec dense(double t) const;

    /// Output evaluated at an arbitrary time via the dense state (ODE) or
    /// the reconstructed history (delay systems).
    StateVec output_at(double t) const;

    /// Reconstruct the delay-system state x_t at time t.
    History history_at(double t) const;

private:
    std::shared_ptr<const Data> d_;
};

StateVec dense_eval(const Trajectory& traj, double t);

Trajectory integrate_ode(const OdeSystem& sys, const StateVec& x0, const IntegratorConfig& cfg);

Trajectory integrate_dde(const DelaySystem& sys, const History& h0, const IntegratorConfig& cfg);

}  // namespace uaos
