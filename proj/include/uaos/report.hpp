#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "uaos/barbalat.hpp"
#include "uaos/certificate.hpp"
#include "uaos/convergence.hpp"
#include "uaos/integrate.hpp"

namespace uaos {

inline constexpr int kSchemaVersion = 1;

/// CSV rows `t,x1..xn,y1..yk` at the trajectory knots, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

/// CSV rows `sample_id,x0_norm,T_emp` for a sweep (empty T_emp = not converged).
std::string sweep_csv(const ConvergenceReport& rep);

nlohmann::json to_json(const ConditionResult& c);
nlohmann::json to_json(const CheckReport& rep);
nlohmann::json to_json(const AnalyticBound& b);
nlohmann::json to_json(const ConvergenceReport& rep);
nlohmann::json to_json(const EnvelopeTable& t);
nlohmann::json to_json(const QucReport& rep);
nlohmann::json to_json(const Lemma3Report& rep);

/// Wraps a payload into the versioned report envelope with the resolved
/// run configuration embedded.
nlohmann::json make_report(const std::string& kind, nlohmann::json config,
                           nlohmann::json payload);

/// Minimal SVG line chart: one polyline per series over a shared time axis.
struct SvgSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> v;
};
std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title,
                       int width = 800, int height = 480);

void write_file(const std::string& path, const std::string& content);

}  // namespace uaos
