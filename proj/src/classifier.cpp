#include "lorenz_dcx/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lorenz_dcx/parallel.hpp"

namespace ldcx {

const char* to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::converges_to: return "converges_to";
    case RegimeKind::periodic: return "periodic";
    case RegimeKind::quasi_periodic: return "quasi_periodic";
    case RegimeKind::transient_chaos: return "transient_chaos";
    case RegimeKind::chaotic: return "chaotic";
    case RegimeKind::divergent: return "divergent";
  }
  return "quasi_periodic";
}

namespace {

// Display form: 8 significant digits, parts below 1e-12 of the modulus dropped.
std::string short_complex(const Complexd& z) {
  const double cut = 1e-12 * std::max(1.0, std::abs(z));
  const double re = std::abs(z.real()) < cut ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < cut ? 0.0 : z.imag();
  char buf[64];
  if (im == 0.0) {
    std::snprintf(buf, sizeof buf, "%.8g", re);
  } else if (re == 0.0) {
    std::snprintf(buf, sizeof buf, "%.8gi", im);
  } else {
    std::snprintf(buf, sizeof buf, "%.8g%+.8gi", re, im);
  }
  return buf;
}

std::string short_state(const State3d& s) {
  return "(" + short_complex(s[0]) + ", " + short_complex(s[1]) + ", " + short_complex(s[2]) + ")";
}

// Max deviation from `ref` over seq[first, last).
double max_deviation(const std::vector<State3d>& seq, std::size_t first, std::size_t last,
                     const State3d& ref) {
  double d = 0;
  for (std::size_t i = first; i < last; ++i) d = std::max(d, max_distance<double>(seq[i], ref));
  return d;
}

struct WindowSummary {
  int positive_run = 0;
  std::optional<double> late_max;
  std::string signature = "none";
};

WindowSummary summarize_windows(const LyapunovEstimate& lyap, const ClassifierTolerances& tol) {
  WindowSummary w;
  const auto& series = lyap.finite_time_series;
  if (series.empty()) return w;
  const double mag = tol.exponent.magnitude;
  int run = 0;
  for (const auto& [k, v] : series) {
    run = v > mag ? run + 1 : 0;
    w.positive_run = std::max(w.positive_run, run);
  }
  const std::int64_t end = series.back().first + lyap.settings.window;
  const std::int64_t late_start = end - end / 4;
  double late_max = -INFINITY, late_sum = 0;
  int late_count = 0;
  for (const auto& [k, v] : series) {
    if (k < late_start) continue;
    late_max = std::max(late_max, v);
    late_sum += v;
    ++late_count;
  }
  if (late_count == 0) {
    late_max = late_sum = series.back().second;
    late_count = 1;
  }
  w.late_max = late_max;
  if (late_max <= mag) {
    w.signature = w.positive_run >= tol.min_positive_windows ? "positive-then-negative" : "negative";
  } else {
    w.signature = late_sum / late_count > mag ? "positive" : "mixed";
  }
  return w;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h ^ (h >> 29);
}

}  // namespace

std::string to_string(const RegimeLabel& label) {
  switch (label.kind) {
    case RegimeKind::converges_to:
      return "converges_to " + short_state(label.target.value_or(State3d::Zero()));
    case RegimeKind::periodic: return "periodic(" + std::to_string(label.period) + ")";
    case RegimeKind::divergent: return "divergent(" + std::to_string(label.divergence_step) + ")";
    case RegimeKind::transient_chaos:
      if (label.target) return "transient_chaos " + short_state(*label.target);
      if (label.period > 0) return "transient_chaos periodic(" + std::to_string(label.period) + ")";
      return "transient_chaos";
    default: return to_string(label.kind);
  }
}

std::optional<std::int64_t> detect_period(const std::vector<State3d>& tail, std::int64_t p_max,
                                          double tol) {
  if (p_max < 1) return std::nullopt;
  const auto n = static_cast<std::int64_t>(tail.size());
  if (n < 3 * p_max) throw InsufficientDataError("period detection needs a tail of at least 3*P_max states");
  double scale = 0;
  for (const auto& s : tail) scale = std::max(scale, max_modulus<double>(s));
  const double limit = tol * (1 + scale);
  const State3d& last = tail[static_cast<std::size_t>(n - 1)];
  for (std::int64_t p = 1; p <= p_max; ++p) {
    // Cheap candidate test on the newest state before the full window check.
    if (!(max_distance<double>(last, tail[static_cast<std::size_t>(n - 1 - p)]) < limit)) continue;
    bool ok = true;
    for (std::int64_t k = n - p_max; k < n && ok; ++k) {
      ok = max_distance<double>(tail[static_cast<std::size_t>(k)], tail[static_cast<std::size_t>(k - p)]) < limit;
    }
    if (ok) return p;
  }
  return std::nullopt;
}

RegimeLabel classify(const Orbit& orbit, const LyapunovEstimate* lyap, const ClassifierTolerances& tol) {
  RegimeLabel label;
  if (orbit.diverged()) {
    label.kind = RegimeKind::divergent;
    label.divergence_step = orbit.divergence_step;
    return label;
  }

  std::vector<State3d> sampled;
  std::int64_t spacing = 1;
  if (orbit.tail.empty()) {
    sampled.reserve(orbit.samples.size());
    for (const auto& s : orbit.samples) sampled.push_back(s.state);
    spacing = orbit.record_stride;
  }
  const std::vector<State3d>& seq = orbit.tail.empty() ? sampled : orbit.tail;
  if (static_cast<std::int64_t>(seq.size()) < tol.min_samples) {
    throw InsufficientDataError("classification needs at least " + std::to_string(tol.min_samples) +
                                " states, have " + std::to_string(seq.size()));
  }

  Evidence& ev = label.evidence;
  if (lyap) {
    ev.largest_exponent = lyap->largest;
    ev.exponent_verdict = verdict(*lyap, tol.exponent);
    ev.exponent_standard_error = lyap->standard_error;
    const auto w = summarize_windows(*lyap, tol);
    ev.positive_run = w.positive_run;
    ev.late_window_max = w.late_max;
    ev.finite_time_signature = w.signature;
  }

  const State3d& final_state = seq.back();
  const double scale = 1 + max_modulus<double>(final_state);
  const std::size_t n = seq.size();
  const auto tenth = static_cast<std::size_t>(
      std::max<std::int64_t>(4, (orbit.steps_completed / 10 + spacing - 1) / spacing));
  const std::size_t window = std::min(n, tenth);
  ev.final_residual = max_deviation(seq, n - window, n, final_state);

  const auto upgrade = [&](RegimeLabel out) {
    if (ev.finite_time_signature == "positive-then-negative") out.kind = RegimeKind::transient_chaos;
    return out;
  };

  if (ev.final_residual < tol.convergence * scale) {
    label.kind = RegimeKind::converges_to;
    label.target = final_state;
    ev.convergence_mode = "settled";
    return upgrade(label);
  }

  // Slow approach: distance to the final state shrinks across four tail windows.
  {
    const std::size_t q = window / 4;
    double prev = INFINITY;
    bool shrinking = q > 0;
    double first = 0;
    for (std::size_t i = 0; i < 4 && shrinking; ++i) {
      const std::size_t lo = n - window + i * q;
      const double d = max_deviation(seq, lo, i == 3 ? n : lo + q, final_state);
      if (i == 0) first = d;
      shrinking = d < prev * (1 - 1e-3);
      prev = d;
    }
    if (shrinking && first < tol.asymptotic * scale) {
      label.kind = RegimeKind::converges_to;
      label.target = final_state;
      ev.convergence_mode = "asymptotic";
      return upgrade(label);
    }
  }

  const std::int64_t p_max = std::min<std::int64_t>(tol.period_max, static_cast<std::int64_t>(n) / 3);
  ev.period_max = p_max;
  const auto period = detect_period(seq, p_max, tol.recurrence);
  if (period) {
    ev.period = *period;
    if (*period == 1) {
      label.kind = RegimeKind::converges_to;
      label.target = final_state;
      ev.convergence_mode = "recurrent";
    } else {
      label.kind = RegimeKind::periodic;
      label.period = *period;
    }
    return upgrade(label);
  }
  ev.period_exceeds_max = true;

  if (!lyap) throw Error("bounded orbit without a settled tail needs Lyapunov evidence");
  switch (*ev.exponent_verdict) {
    case ExponentVerdict::positive:
      label.kind = RegimeKind::chaotic;
      break;
    case ExponentVerdict::negative:
      label.kind = RegimeKind::converges_to;
      label.target = final_state;
      ev.convergence_mode = "contracting";
      break;
    case ExponentVerdict::neutral:
      label.kind = RegimeKind::quasi_periodic;
      break;
  }
  return label;
}

std::int64_t default_tail_length(std::int64_t steps, const ClassifierTolerances& tol) {
  return std::min(steps, std::max({tol.min_samples, steps / 10, 3 * tol.period_max}));
}

Analysis analyze(const SystemParamsd& params, OrbitConfig cfg, const ClassifierTolerances& tol,
                 const LyapunovSettings& settings) {
  if (cfg.tail_length == 0) cfg.tail_length = default_tail_length(cfg.steps, tol);
  Analysis out;
  out.orbit = iterate(params, cfg);
  if (!out.orbit.diverged() && cfg.steps >= 10 * settings.interval) {
    out.lyapunov = spectrum(params, cfg, settings);
  }
  out.label = classify(out.orbit, out.lyapunov ? &*out.lyapunov : nullptr, tol);
  return out;
}

AttractorFingerprint fingerprint(const Orbit& orbit, const RegimeLabel& label, const ClassifierTolerances& tol) {
  AttractorFingerprint fp;
  fp.kind = label.kind;
  if (label.kind == RegimeKind::divergent) return fp;
  if (label.target) {
    fp.terminal = label.target;
    return fp;
  }
  std::vector<State3d> sampled;
  if (orbit.tail.empty()) {
    for (const auto& s : orbit.samples) sampled.push_back(s.state);
  }
  const std::vector<State3d>& seq = orbit.tail.empty() ? sampled : orbit.tail;
  fp.cells.reserve(seq.size());
  for (const auto& s : seq) {
    std::uint64_t h = 0;
    for (int i = 0; i < 3; ++i) {
      h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(s[i].real() / tol.cell_size))));
      h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(s[i].imag() / tol.cell_size))));
    }
    fp.cells.push_back(h);
  }
  std::sort(fp.cells.begin(), fp.cells.end());
  fp.cells.erase(std::unique(fp.cells.begin(), fp.cells.end()), fp.cells.end());
  for (const auto c : fp.cells) fp.hash = mix(fp.hash, c);
  return fp;
}

bool same_attractor(const AttractorFingerprint& u, const AttractorFingerprint& v, const ClassifierTolerances& tol) {
  const bool ud = u.kind == RegimeKind::divergent, vd = v.kind == RegimeKind::divergent;
  if (ud || vd) return ud && vd;
  if (u.terminal || v.terminal) {
    return u.terminal && v.terminal && max_distance<double>(*u.terminal, *v.terminal) < tol.sink_grouping;
  }
  if (u.cells.empty() || v.cells.empty()) return false;
  std::size_t common = 0;
  auto i = u.cells.begin(), j = v.cells.begin();
  while (i != u.cells.end() && j != v.cells.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common, ++i, ++j;
    }
  }
  const std::size_t total = u.cells.size() + v.cells.size() - common;
  return static_cast<double>(common) >= tol.cell_overlap * static_cast<double>(total);
}

EnsembleResult coexisting_attractors(const SystemParamsd& params, const std::vector<State3d>& ensemble,
                                     const OrbitConfig& cfg, const ClassifierTolerances& tol,
                                     const LyapunovSettings& settings) {
  if (ensemble.size() < 2) throw Error("an ensemble needs at least two initial states");
  std::vector<RegimeLabel> labels(ensemble.size());
  std::vector<AttractorFingerprint> prints(ensemble.size());
  parallel_for(ensemble.size(), worker_count(ensemble.size()), [&](std::size_t i) {
    OrbitConfig member = cfg;
    member.initial = ensemble[i];
    const Analysis a = analyze(params, member, tol, settings);
    labels[i] = a.label;
    prints[i] = fingerprint(a.orbit, a.label, tol);
  });

  EnsembleResult out;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    auto it = std::find_if(out.groups.begin(), out.groups.end(), [&](const AttractorGroup& g) {
      return same_attractor(g.fingerprint, prints[i], tol);
    });
    if (it == out.groups.end()) {
      out.groups.push_back({prints[i], {i}, labels[i]});
    } else {
      it->members.push_back(i);
    }
  }
  out.labels = std::move(labels);
  return out;
}

}  // namespace ldcx
