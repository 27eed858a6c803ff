#include "lorenz_dcx/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include "lorenz_dcx/parse.hpp"

namespace ldcx {

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json complex_json(const Complexd& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json state_json(const State3d& s) { return json::array({complex_json(s[0]), complex_json(s[1]), complex_json(s[2])}); }

json params_json(const SystemParamsd& p) {
  return {{"a", complex_json(p.a)}, {"b", complex_json(p.b)}, {"r", complex_json(p.r)}, {"dt", p.dt}};
}

json spectrum_json(const Spectrum3<double>& ev) {
  json out = json::array();
  for (const auto& l : ev) {
    json e = complex_json(l);
    e["modulus"] = std::abs(l);
    out.push_back(e);
  }
  return out;
}

json equilibrium_json(const EquilibriumReport<double>& rep) {
  return {{"point", state_json(rep.point)},
          {"residual", rep.residual},
          {"eigenvalues", spectrum_json(rep.eigenvalues)},
          {"paper_stable", rep.paper_stable},
          {"modulus_stable", rep.modulus_stable},
          {"map_eigenvalues", spectrum_json(rep.map_eigenvalues)},
          {"map_stable", rep.map_stable}};
}

json lyapunov_json(const LyapunovEstimate& est) {
  const auto& e = est.exponents;
  return {{"exponents", e},
          {"pairs", json::array({json::array({e[0], e[1]}), json::array({e[2], e[3]}), json::array({e[4], e[5]})})},
          {"largest", est.largest},
          {"verdict", to_string(verdict(est))},
          {"standard_error", est.standard_error},
          {"burn_in", est.settings.burn_in},
          {"interval", est.settings.interval},
          {"window", est.settings.window},
          {"total_steps", est.settings.total},
          {"averaged_steps", est.averaged_steps},
          {"finite_time_windows", est.finite_time_series.size()},
          {"divergence_step", est.divergence_step < 0 ? json(nullptr) : json(est.divergence_step)}};
}

json evidence_json(const Evidence& ev) {
  return {{"final_residual", ev.final_residual},
          {"convergence_mode", ev.convergence_mode.empty() ? json(nullptr) : json(ev.convergence_mode)},
          {"period", optional_json(ev.period)},
          {"period_exceeds_max", ev.period_exceeds_max},
          {"period_max", ev.period_max},
          {"largest_exponent", optional_json(ev.largest_exponent)},
          {"exponent_verdict", ev.exponent_verdict ? json(to_string(*ev.exponent_verdict)) : json(nullptr)},
          {"exponent_standard_error", optional_json(ev.exponent_standard_error)},
          {"positive_run", ev.positive_run},
          {"late_window_max", optional_json(ev.late_window_max)},
          {"finite_time_signature", ev.finite_time_signature}};
}

json label_json(const RegimeLabel& label) {
  json out = {{"kind", to_string(label.kind)},
              {"text", to_string(label)},
              {"target", label.target ? state_json(*label.target) : json(nullptr)},
              {"period", label.period > 0 ? json(label.period) : json(nullptr)},
              {"divergence_step", label.divergence_step >= 0 ? json(label.divergence_step) : json(nullptr)},
              {"evidence", evidence_json(label.evidence)}};
  if (label.kind == RegimeKind::quasi_periodic) {
    out["note"] = "operational: bounded, not settling, no period up to period_max, neutral largest exponent";
  }
  return out;
}

json tolerances_json(const ClassifierTolerances& tol) {
  return {{"convergence", tol.convergence},
          {"asymptotic", tol.asymptotic},
          {"recurrence", tol.recurrence},
          {"sink_grouping", tol.sink_grouping},
          {"cell_size", tol.cell_size},
          {"cell_overlap", tol.cell_overlap},
          {"period_max", tol.period_max},
          {"min_samples", tol.min_samples},
          {"min_positive_windows", tol.min_positive_windows},
          {"exponent_magnitude", tol.exponent.magnitude},
          {"exponent_significance", tol.exponent.significance}};
}

json ensemble_json(const EnsembleResult& ens) {
  json groups = json::array();
  for (const auto& g : ens.groups) {
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(g.fingerprint.hash));
    groups.push_back({{"kind", to_string(g.fingerprint.kind)},
                      {"label", to_string(g.label)},
                      {"terminal", g.fingerprint.terminal ? state_json(*g.fingerprint.terminal) : json(nullptr)},
                      {"cells", g.fingerprint.cells.size()},
                      {"cell_hash", hash},
                      {"members", g.members}});
  }
  json labels = json::array();
  for (const auto& l : ens.labels) labels.push_back(to_string(l));
  return {{"members", ens.labels.size()}, {"member_labels", labels}, {"groups", groups}};
}

json scenario_json(const ScenarioResult& res) {
  const Scenario& sc = res.scenario;
  json ensemble_initials = json::array();
  for (const auto& s : sc.ensemble) ensemble_initials.push_back(state_json(s));
  return {{"id", sc.id},
          {"label", sc.label},
          {"note", sc.note},
          {"reference_only", sc.reference_only},
          {"basin_sensitive", sc.basin_sensitive},
          {"params", sc.reference_only && sc.steps == 0 ? json(nullptr) : params_json(sc.params)},
          {"initial", state_json(sc.initial)},
          {"extra_initials", ensemble_initials},
          {"steps", sc.steps},
          {"stride", sc.stride},
          {"tolerance", sc.tolerance},
          {"expected", sc.expected_text},
          {"status", to_string(res.status)},
          {"computed", res.computed ? label_json(*res.computed) : json(nullptr)},
          {"lyapunov", res.lyapunov ? lyapunov_json(*res.lyapunov) : json(nullptr)},
          {"ensemble", res.ensemble ? ensemble_json(*res.ensemble) : json(nullptr)},
          {"target_distance", optional_json(res.target_distance)},
          {"detail", res.detail},
          {"warnings", res.warnings},
          {"orbit_csv", res.orbit_csv.empty() ? json(nullptr) : json(res.orbit_csv)}};
}

json report_json(const ReproductionReport& rep) {
  json scenarios = json::array();
  for (const auto& r : rep.results) scenarios.push_back(scenario_json(r));
  return {{"suite", rep.suite},
          {"summary",
           {{"matched", rep.matched},
            {"mismatched", rep.mismatched},
            {"warnings", rep.warned},
            {"errors", rep.errored},
            {"skipped", rep.skipped},
            {"total", rep.total()}}},
          {"tolerances", tolerances_json(rep.tolerances)},
          {"scenarios", scenarios}};
}

std::string summary_text(const ReproductionReport& rep, const std::string& timestamp) {
  std::ostringstream out;
  out << "# suite " << rep.suite << " run " << timestamp << '\n';
  out << "matched " << rep.matched << '/' << rep.total() << " (mismatched " << rep.mismatched << ", warnings "
      << rep.warned << ", errors " << rep.errored << ", skipped " << rep.skipped << ")\n\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-20s %-9s %-40s %s\n", "id", "status", "expected", "computed");
  out << line;
  for (const auto& r : rep.results) {
    const std::string computed = r.computed ? to_string(*r.computed) : "-";
    const std::string expected = r.scenario.expected_text.empty() ? "-" : r.scenario.expected_text;
    std::snprintf(line, sizeof line, "%-20s %-9s %-40s %s\n", r.scenario.id.c_str(), to_string(r.status),
                  expected.c_str(), computed.c_str());
    out << line;
  }
  bool header = false;
  for (const auto& r : rep.results) {
    if (r.status == Status::match && r.warnings.empty()) continue;
    if (r.status == Status::skipped) continue;
    if (!header) out << "\nnotes\n", header = true;
    if (!r.detail.empty() && r.status != Status::match) out << "  " << r.scenario.id << ": " << r.detail << '\n';
    for (const auto& w : r.warnings) out << "  " << r.scenario.id << ": warning: " << w << '\n';
  }
  return out.str();
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
  out << "k,re_x,im_x,re_y,im_y,re_z,im_z\n";
  for (const auto& s : orbit.samples) {
    out << s.k;
    for (int i = 0; i < 3; ++i) out << ',' << format_real(s.state[i].real()) << ',' << format_real(s.state[i].imag());
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, const LyapunovEstimate& est) {
  out << "k,lambda_max\n";
  for (const auto& [k, v] : est.finite_time_series) out << k << ',' << format_real(v) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace ldcx
