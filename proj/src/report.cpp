#include "uaos/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uaos {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= traj.dim(); ++i) os << ",x" << i;
    for (int i = 1; i <= traj.out_dim(); ++i) os << ",y" << i;
    os << "\n";
    const auto& ts = traj.times();
    for (std::size_t j = 0; j < ts.size(); ++j) {
        os << num(ts[j]);
        for (double v : traj.states()[j]) os << "," << num(v);
        for (double v : traj.outputs()[j]) os << "," << num(v);
        os << "\n";
    }
    return os.str();
}

std::string sweep_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "sample_id,x0_norm,T_emp\n";
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
        const auto& s = rep.per_sample[i];
        os << i << "," << num(s.x0_norm) << ","
           << (s.T_emp ? num(*s.T_emp) : std::string()) << "\n";
    }
    return os.str();
}

nlohmann::json to_json(const ConditionResult& c) {
    nlohmann::json j{{"id", c.id},
                     {"verdict", c.pass ? "pass" : "fail"},
                     {"margin", c.margin},
                     {"tol_at_worst", c.tol_at_worst},
                     {"samples", c.samples}};
    if (std::isfinite(c.witness_t)) j["witness_t"] = c.witness_t;
    if (!c.witness_state.empty()) j["witness_state"] = c.witness_state;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

nlohmann::json to_json(const CheckReport& rep) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : rep.conditions) conds.push_back(to_json(c));
    return {{"system", rep.system},
            {"certificate", rep.certificate},
            {"conditions", conds},
            {"overall", rep.overall ? "pass" : "fail"}};
}

nlohmann::json to_json(const AnalyticBound& b) {
    return {{"T", b.T},          {"sup_V", b.sup_V},         {"sup_W", b.sup_W},
            {"rho_tilde", b.rho_tilde}, {"a_eps", b.a_eps},
            {"inflation", b.inflation}, {"samples", b.samples}};
}

nlohmann::json to_json(const ConvergenceReport& rep) {
    nlohmann::json j{{"system", rep.system},   {"eps", rep.eps},
                     {"R", rep.R},             {"seed", rep.seed},
                     {"horizon", rep.horizon}, {"T_emp_sup", rep.T_emp_sup},
                     {"verdict", rep.verdict}, {"samples", rep.per_sample.size()}};
    if (rep.bound) j["T_analytic"] = to_json(*rep.bound);
    if (rep.witness >= 0) j["witness_sample"] = rep.witness;
    return j;
}

nlohmann::json to_json(const EnvelopeTable& t) {
    return {{"radii", t.radii},
            {"times", t.times},
            {"zeta_hat", t.zeta_hat},
            {"M_hat", t.M_hat}};
}

nlohmann::json to_json(const QucReport& rep) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& e : rep.per_eps) {
        nlohmann::json je{{"eps", e.eps}, {"quc", e.ok}};
        if (e.ok)
            je["delta"] = e.delta;
        else
            je["witness"] = {{"t0", e.witness_t0}, {"t", e.witness_t}};
        per.push_back(je);
    }
    return {{"signal", rep.name},
            {"dt", rep.dt},
            {"horizon", rep.horizon},
            {"per_eps", per},
            {"quc", rep.quc}};
}

nlohmann::json to_json(const Lemma3Report& rep) {
    return {{"signal", rep.signal},
            {"integral", rep.integral},
            {"integral_finite", rep.integral_finite},
            {"tail_growth_frac", rep.tail_growth_frac},
            {"quc_f", to_json(rep.quc_f)},
            {"quc_neg_f", to_json(rep.quc_neg_f)},
            {"rho_monotone", rep.rho_monotone},
            {"f_sup", rep.f_sup},
            {"hypotheses_met", rep.hypotheses_met},
            {"tail_sup", rep.tail_sup},
            {"tail_window_frac", rep.tail_window_frac},
            {"conclusion", rep.conclusion}};
}

nlohmann::json make_report(const std::string& kind, nlohmann::json config,
                           nlohmann::json payload) {
    return {{"schema_version", kSchemaVersion},
            {"kind", kind},
            {"config", std::move(config)},
            {"result", std::move(payload)}};
}

std::string render_svg(const std::vector<SvgSeries>& series, const std::string& title,
                       int width, int height) {
    const int ml = 50, mr = 10, mt = 30, mb = 30;
    double tmin = 0, tmax = 1, vmin = 0, vmax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (first) {
                tmin = tmax = s.t[i];
                vmin = vmax = s.v[i];
                first = false;
            }
            tmin = std::min(tmin, s.t[i]);
            tmax = std::max(tmax, s.t[i]);
            vmin = std::min(vmin, s.v[i]);
            vmax = std::max(vmax, s.v[i]);
        }
    if (tmax <= tmin) tmax = tmin + 1;
    if (vmax <= vmin) vmax = vmin + 1;
    auto X = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (width - ml - mr); };
    auto Y = [&](double v) {
        return height - mb - (v - vmin) / (vmax - vmin) * (height - mt - mb);
    };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
       << height << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14'>"
       << title << "</text>\n";
    os << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr
       << "' y2='" << height - mb << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
       << height - mb << "' stroke='black'/>\n";
    int ci = 0;
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << colors[ci % 8] << "' points='";
        for (std::size_t i = 0; i < s.t.size(); ++i)
            os << X(s.t[i]) << "," << Y(s.v[i]) << " ";
        os << "'/>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

}  // namespace uaos
