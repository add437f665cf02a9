#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uaos/comparison.hpp"
#include "uaos/integrate.hpp"
#include "uaos/system.hpp"

namespace uaos {

/// Nonnegative scalar field over states, optionally carrying the closed-form
/// derivative along the system the certificate is bound to.
struct ScalarField {
    std::function<double(const StateVec&)> eval;
    std::function<double(const StateVec&)> dot;  // nullable
    bool zero_at_origin = true;
};

/// Scalar functional over delay-system histories.
struct HistoryField {
    std::function<double(const History&)> eval;
    std::function<double(const History&)> dot;  // nullable
};

enum class Target { thm1, thm2, prop1, cor1, cor2 };
enum class GrowthSide { upper, lower };  // which one-sided growth bound on dW is checked

std::string target_name(Target t);

/// Bundle of Lyapunov-type data aimed at one theorem's hypothesis set.
struct Certificate {
    Target target = Target::thm1;
    std::string name;
    std::optional<ScalarField> V;
    std::optional<ScalarField> W;
    std::optional<HistoryField> Vh;
    std::optional<HistoryField> Wh;
    std::optional<ComparisonFn> rho;
    std::optional<ComparisonFn> a;
    std::optional<ComparisonFn> b;
    std::optional<ComparisonFn> gamma;
    std::optional<ComparisonFn> zeta;
    bool rho_monotone = true;
    GrowthSide side = GrowthSide::upper;

    /// Throws if a field required by the target theorem is missing or a
    /// comparison function fails its class check.
    void validate() const;
};

struct CheckTol {
    double abs = 1e-6;
    double rel = 1e-4;
};

struct ConditionResult {
    std::string id;
    bool pass = true;
    double margin = 0.0;        // rhs - lhs at the worst sample; negative = violation
    double tol_at_worst = 0.0;  // tolerance applied at the worst sample
    double witness_t = 0.0;     // NaN when the worst sample is a static state
    StateVec witness_state;
    long samples = 0;
    std::string note;
};

struct CheckReport {
    std::string system;
    std::string certificate;
    std::vector<ConditionResult> conditions;
    bool overall = true;

    const ConditionResult* find(const std::string& id) const;
};

inline constexpr double kDiniSteps[] = {1e-3, 1e-4, 1e-5};

/// Conservative forward-difference estimate of the upper-right Dini
/// derivative of F along the trajectory: max over the step list of
/// (F(phi(t+h)) - F(phi(t))) / h.
double dini_derivative(const std::function<double(const StateVec&)>& F,
                       const Trajectory& traj, double t,
                       const std::vector<double>& h_list = {1e-3, 1e-4, 1e-5});
double dini_derivative(const ScalarField& F, const Trajectory& traj, double t,
                       const std::vector<double>& h_list = {1e-3, 1e-4, 1e-5});
double dini_derivative_history(const std::function<double(const History&)>& F,
                               const Trajectory& traj, double t,
                               const std::vector<double>& h_list = {1e-3, 1e-4, 1e-5});

CheckReport check_thm1(const OdeSystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol = {},
                       std::uint64_t seed = 1);

CheckReport check_thm2(const OdeSystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol = {},
                       std::uint64_t seed = 1);

CheckReport check_prop1(const OdeSystem& sys, const Certificate& cert,
                        const std::vector<Trajectory>& trajs, CheckTol tol = {});
CheckReport check_prop1(const DelaySystem& sys, const Certificate& cert,
                        const std::vector<Trajectory>& trajs, CheckTol tol = {});

CheckReport check_cor1(const DelaySystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol = {},
                       std::uint64_t seed = 1);

CheckReport check_cor2(const DelaySystem& sys, const Certificate& cert, double R, int N,
                       const std::vector<Trajectory>& trajs, CheckTol tol = {},
                       std::uint64_t seed = 1);

}  // namespace uaos
