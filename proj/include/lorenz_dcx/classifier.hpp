#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorenz_dcx/lyapunov.hpp"
#include "lorenz_dcx/map.hpp"
#include "lorenz_dcx/types.hpp"

namespace ldcx {

/// Classifier knobs. Distances are max-component complex moduli.
struct ClassifierTolerances {
  /// Settled sink: tail deviation from the final state below this·(1+|final|).
  double convergence = 1e-6;
  /// Still-approaching sink: first tail window within this·(1+|final|).
  double asymptotic = 1e-2;
  /// Period recurrence residual, relative to 1 + tail max.
  double recurrence = 1e-6;
  double sink_grouping = 1e-4;
  /// Edge of the coarse cells (per real axis) used to fingerprint bounded orbits.
  double cell_size = 0.5;
  /// Two cell sets belong to one attractor above this Jaccard overlap.
  double cell_overlap = 0.5;
  std::int64_t period_max = 50000;
  std::int64_t min_samples = 10000;
  /// Consecutive positive finite-time windows needed for a chaotic phase.
  int min_positive_windows = 5;
  ExponentThresholds exponent{};
};

enum class RegimeKind { converges_to, periodic, quasi_periodic, transient_chaos, chaotic, divergent };

const char* to_string(RegimeKind k);

struct Evidence {
  /// Max deviation from the final state over the convergence window.
  double final_residual = 0;
  /// "settled", "asymptotic" or "contracting" for sink labels.
  std::string convergence_mode;
  std::optional<std::int64_t> period;
  bool period_exceeds_max = false;
  std::int64_t period_max = 0;
  std::optional<double> largest_exponent;
  std::optional<ExponentVerdict> exponent_verdict;
  std::optional<double> exponent_standard_error;
  /// Longest run of positive finite-time windows and the last-quarter maximum.
  int positive_run = 0;
  std::optional<double> late_window_max;
  /// "positive-then-negative", "negative", "positive", "mixed" or "none".
  std::string finite_time_signature = "none";
};

struct RegimeLabel {
  RegimeKind kind = RegimeKind::quasi_periodic;
  /// Sink for converges_to, and for transient_chaos ending on a sink.
  std::optional<State3d> target;
  std::int64_t period = 0;
  std::int64_t divergence_step = -1;
  Evidence evidence;
};

/// "converges_to (x, y, z)", "periodic(7)", "divergent(1234)", "chaotic", ...
std::string to_string(const RegimeLabel& label);

/// Smallest p in [1, p_max] whose recurrence residual max ‖s_k − s_{k−p}‖ over
/// the last p_max states stays below tol·(1 + tail max). Requires
/// tail.size() ≥ 3·p_max.
std::optional<std::int64_t> detect_period(const std::vector<State3d>& tail, std::int64_t p_max,
                                          double tol = 1e-6);

/// Decision cascade: divergent; settled or asymptotic sink; periodic; then the
/// exponent verdict (chaotic, contracting sink or quasi-periodic). A sink or
/// cycle preceded by a sustained positive finite-time phase becomes
/// transient_chaos. Uses the full-resolution tail when the orbit carries one.
///
/// Throws InsufficientDataError for fewer than tol.min_samples states, and
/// Error if a bounded, non-settling orbit arrives without exponent evidence.
RegimeLabel classify(const Orbit& orbit, const LyapunovEstimate* lyap = nullptr,
                     const ClassifierTolerances& tol = {});

/// Tail length that lets classify use its defaults on a run of `steps` steps.
std::int64_t default_tail_length(std::int64_t steps, const ClassifierTolerances& tol = {});

struct Analysis {
  Orbit orbit;
  std::optional<LyapunovEstimate> lyapunov;
  RegimeLabel label;
};

/// iterate, then spectrum when the orbit stays bounded, then classify. A zero
/// cfg.tail_length is replaced by default_tail_length.
Analysis analyze(const SystemParamsd& params, OrbitConfig cfg, const ClassifierTolerances& tol = {},
                 const LyapunovSettings& settings = {});

struct AttractorFingerprint {
  RegimeKind kind = RegimeKind::divergent;
  /// Terminal state for sinks.
  std::optional<State3d> terminal;
  /// Sorted distinct coarse cells visited by the tail of a bounded orbit.
  std::vector<std::uint64_t> cells;
  /// Hash of `cells`, 0 when empty.
  std::uint64_t hash = 0;
};

AttractorFingerprint fingerprint(const Orbit& orbit, const RegimeLabel& label,
                                 const ClassifierTolerances& tol = {});

/// Sinks within tol.sink_grouping, bounded orbits whose cell sets overlap by
/// at least tol.cell_overlap, and all divergent orbits match.
bool same_attractor(const AttractorFingerprint& u, const AttractorFingerprint& v,
                    const ClassifierTolerances& tol = {});

struct AttractorGroup {
  AttractorFingerprint fingerprint;
  /// Ensemble indices, ascending; the first is the representative.
  std::vector<std::size_t> members;
  RegimeLabel label;
};

struct EnsembleResult {
  std::vector<RegimeLabel> labels;
  /// Ordered by first member index.
  std::vector<AttractorGroup> groups;
};

/// Classifies every member (concurrently, capped by LORENZ_DCX_WORKERS) and
/// groups them by fingerprint. cfg.initial is ignored.
EnsembleResult coexisting_attractors(const SystemParamsd& params, const std::vector<State3d>& ensemble,
                                     const OrbitConfig& cfg, const ClassifierTolerances& tol = {},
                                     const LyapunovSettings& settings = {});

}  // namespace ldcx
