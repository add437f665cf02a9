#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "uaos/system.hpp"

namespace uaos {

/// The bounded interaction nonlinearity used by example1/example2.
/// Selected by a selector string: "sin" -> sin(u*v), "tanh" -> tanh(u+v),
/// "const:<c>" -> the constant c.
struct GFun {
    std::function<double(double, double)> f;
    double bound = 1.0;  // recorded sup bound R_g
    int kind = 0;        // 0 sin, 1 tanh, 2 const
    double const_value = 0.0;
};

GFun make_g(const std::string& spec);
GFun g_from_params(const std::map<std::string, double>& params);

using BuiltinSystem = std::variant<OdeSystem, DelaySystem>;

/// Construct a catalog system by name. Recognized names:
///   example1, example2, decoupled_linear, adaptive_basic,
///   adaptive_redesigned, spike_demo
/// Missing parameters take documented defaults. example2 evaluates its
/// feasibility conditions at construction and records lambda/K in params;
/// set params["skip_feasibility"]=1 to construct an infeasible instance
/// for violation experiments.
BuiltinSystem builtin(const std::string& name,
                      const std::map<std::string, double>& params = {},
                      const std::string& g_spec = "sin");

std::vector<std::string> catalog_names();

/// Composite-Simpson value of the exponentially weighted history integral
/// int_{-r}^{0} exp(sigma*s) * x1(s)^2 ds.
double weighted_history_integral(const History& h, double sigma, int intervals = 512);

/// The two Lyapunov functionals used by the delay example; params must carry
/// the constants recorded by builtin("example2", ...).
double example2_V(const History& h, const std::map<std::string, double>& params);
double example2_W(const History& h, const std::map<std::string, double>& params);

/// Triangular spike train: unit-height spikes centred at t = i (i >= 1) with
/// half-width 2^-i; integral over [0, inf) equals 1.
double spike_train_value(double t);

}  // namespace uaos
