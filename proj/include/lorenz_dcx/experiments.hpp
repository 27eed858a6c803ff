#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lorenz_dcx/classifier.hpp"
#include "lorenz_dcx/map.hpp"
#include "lorenz_dcx/types.hpp"

namespace ldcx {

// Expected-label grammar used by suite files:
//
//   converges_to [state]        any sink, or the given one within the row tolerance
//   transient_chaos [state]     likewise for the sink the orbit settles on
//   periodic [(p)]
//   quasi_periodic | chaotic | divergent
//   high_period                 periodic with p ≥ 2, or quasi_periodic past P_max
//   coexisting(n)               ensemble rows: n distinct attractor groups
struct ExpectedLabel {
  enum class Kind { converges_to, periodic, quasi_periodic, transient_chaos, chaotic, divergent, high_period, coexisting };
  Kind kind = Kind::converges_to;
  std::optional<State3d> target;
  std::optional<std::int64_t> period;
  int groups = 0;
};

ExpectedLabel parse_expected(std::string_view text);
std::string to_string(const ExpectedLabel& e);

struct Scenario {
  std::string id;
  std::string label;
  SystemParamsd params;
  State3d initial = State3d::Zero();
  std::int64_t steps = 0;
  std::int64_t stride = 1000;
  std::optional<ExpectedLabel> expected;
  std::string expected_text;
  std::string note;
  bool reference_only = false;
  /// Initial state was chosen by the suite; a mismatch becomes a warning.
  bool basin_sensitive = false;
  /// Extra initial states; a non-empty list makes this an ensemble row.
  std::vector<State3d> ensemble;
  /// A fixed point quoted alongside the row, checked against the map.
  std::optional<State3d> stated_fixed_point;
  /// Distance allowed between computed and expected sinks.
  double tolerance = 1e-2;
  int line = 0;
};

/// Parses a suite: stanzas of key=value lines. Recognized keys are a, b, r,
/// dt, x0, y0, z0, steps, label, expected, plus id, note, stride, tolerance,
/// reference_only, basin_sensitive, ensemble (states separated by ';') and
/// stated_fixed_point. Missing ids become "<prefix>-rowNN"; reference rows
/// need no parameters.
std::vector<Scenario> parse_suite(std::string_view text, std::string_view prefix = "scenario");
std::vector<Scenario> load_suite(const std::filesystem::path& path);

enum class Status { match, mismatch, warning, error, skipped };

const char* to_string(Status s);

struct ScenarioResult {
  Scenario scenario;
  Status status = Status::skipped;
  std::optional<RegimeLabel> computed;
  std::optional<LyapunovEstimate> lyapunov;
  std::optional<EnsembleResult> ensemble;
  /// Distance from the computed sink to the expected target, when both exist.
  std::optional<double> target_distance;
  std::string detail;
  std::vector<std::string> warnings;
  /// Orbit CSV path relative to the report directory.
  std::string orbit_csv;
};

struct ReproductionReport {
  std::string suite;
  ClassifierTolerances tolerances{};
  /// Sorted by scenario id.
  std::vector<ScenarioResult> results;
  int matched = 0;
  int mismatched = 0;
  int warned = 0;
  int errored = 0;
  int skipped = 0;
  /// Scored scenarios (all but reference rows).
  int total() const { return matched + mismatched + warned + errored; }
  /// No hard mismatch or error.
  bool ok() const { return mismatched == 0 && errored == 0; }
};

struct SuiteOptions {
  /// Report, summary and orbit CSVs land here; empty writes nothing.
  std::filesystem::path out_dir;
  /// 0 reads LORENZ_DCX_WORKERS.
  std::size_t workers = 0;
  ClassifierTolerances tolerances{};
  LyapunovSettings lyapunov{};
};

/// Compares a computed label (or ensemble) against an expectation.
bool matches(const ExpectedLabel& expected, const RegimeLabel& computed, double tolerance,
             std::optional<double>* distance = nullptr);

/// Runs one scenario; failures are captured in the result, never thrown.
ScenarioResult run_scenario(const Scenario& sc, const SuiteOptions& opt, Orbit* orbit_out = nullptr);

ReproductionReport run_suite(const std::vector<Scenario>& scenarios, std::string suite_name,
                             const SuiteOptions& opt = {});
ReproductionReport run_suite(const std::filesystem::path& suite_file, const SuiteOptions& opt = {});

/// Returns a warning when `stated` is not an equilibrium of the map, noting
/// whether it matches the (±√b√(r+1), ±√b√(r+1), r+1) pattern.
std::optional<std::string> check_stated_fixed_point(const SystemParamsd& params, const State3d& stated,
                                                    double tolerance);

/// `n` states whose components are drawn independently and uniformly from
/// the complex disk of `radius`, from a seeded mt19937_64 (53-bit uniforms,
/// so the draws are identical on every platform).
std::vector<State3d> ball_ensemble(std::size_t n, std::uint64_t seed, double radius = 1.0);

enum class PlotMode { complex_plane, components, three_d };

PlotMode parse_plot_mode(std::string_view text);

/// Writes plot-ready CSVs next to `stem` and returns their paths:
/// complex_plane → <stem>_{x,y,z}_plane.csv (re,im); components →
/// <stem>_{x,y,z}.csv (k,re,im); three_d → <stem>_re.csv and <stem>_im.csv.
std::vector<std::filesystem::path> export_plot_data(const Orbit& orbit, PlotMode mode,
                                                    const std::filesystem::path& stem);

}  // namespace ldcx
