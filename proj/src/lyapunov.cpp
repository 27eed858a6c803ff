#include "lorenz_dcx/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/QR>

namespace ldcx {

const char* to_string(ExponentVerdict v) {
  switch (v) {
    case ExponentVerdict::positive: return "positive";
    case ExponentVerdict::negative: return "negative";
    case ExponentVerdict::neutral: return "neutral";
  }
  return "neutral";
}

ExponentVerdict verdict(const LyapunovEstimate& est, const ExponentThresholds& th) {
  if (est.largest > th.magnitude && est.largest > th.significance * est.standard_error) {
    return ExponentVerdict::positive;
  }
  if (est.largest < -th.magnitude) return ExponentVerdict::negative;
  return ExponentVerdict::neutral;
}

namespace {

std::int64_t round_up(std::int64_t n, std::int64_t m) { return (n + m - 1) / m * m; }

}  // namespace

LyapunovEstimate spectrum(const SystemParamsd& params, const OrbitConfig& cfg,
                          const LyapunovSettings& settings) {
  validate(params);
  validate(cfg);
  const std::int64_t interval = settings.interval;
  const std::int64_t total = cfg.steps;
  if (interval < 1) throw Error("reorthonormalization interval must be positive");
  if (total < 10 * interval) throw Error("total steps must be at least 10 reorthonormalization intervals");

  LyapunovEstimate est;
  const std::int64_t burn_in =
      settings.burn_in < 0 ? total / 5 / interval * interval : round_up(settings.burn_in, interval);
  if (burn_in >= total) throw Error("burn-in must be shorter than the run");
  const std::int64_t window_request =
      settings.window > 0 ? settings.window
                          : std::max<std::int64_t>(1000, std::llround(1.0 / params.dt));
  const std::int64_t window = round_up(window_request, interval);
  est.settings = {burn_in, total, interval, window};

  State3d s = cfg.initial;
  Matrix6d frame = Matrix6d::Identity();
  std::array<double, 6> sums{};
  double window_sum = 0;
  std::int64_t window_fill = 0;

  for (std::int64_t k = 0; k < total; ++k) {
    frame = real_lift(map_jacobian(params, s)) * frame;
    s = step(params, s);
    const std::int64_t done = k + 1;
    if (exceeds(s, cfg.divergence_threshold) || !frame.allFinite()) {
      if (done <= burn_in) throw DivergentOrbitError(done);
      est.divergence_step = done;
      break;
    }
    if (done % interval != 0) continue;

    const Eigen::HouseholderQR<Matrix6d> qr(frame);
    const auto diag = qr.matrixQR().diagonal();
    frame = qr.householderQ();
    if (done > burn_in) {
      for (int i = 0; i < 6; ++i) sums[i] += std::log(std::abs(diag[i]));
      est.averaged_steps += interval;
    }
    window_sum += std::log(std::abs(diag[0]));
    window_fill += interval;
    if (window_fill == window) {
      est.finite_time_series.emplace_back(done - window, window_sum / static_cast<double>(window));
      window_sum = 0;
      window_fill = 0;
    }
  }

  if (est.averaged_steps == 0) throw DivergentOrbitError(est.divergence_step);
  for (int i = 0; i < 6; ++i) est.exponents[i] = sums[i] / static_cast<double>(est.averaged_steps);
  std::sort(est.exponents.begin(), est.exponents.end(), std::greater<>());
  est.largest = est.exponents[0];

  const std::int64_t averaged_end = burn_in + est.averaged_steps;
  const std::int64_t last_quarter = averaged_end - est.averaged_steps / 4;
  std::vector<double> tail;
  for (const auto& [start, value] : est.finite_time_series) {
    if (start >= last_quarter && start + window <= averaged_end) tail.push_back(value);
  }
  if (tail.size() >= 2) {
    double mean = 0;
    for (double v : tail) mean += v;
    mean /= static_cast<double>(tail.size());
    double ss = 0;
    for (double v : tail) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(tail.size() - 1));
    est.standard_error = sd / std::sqrt(static_cast<double>(tail.size()));
  }
  return est;
}

std::vector<std::pair<std::int64_t, double>> finite_time_largest(const SystemParamsd& params,
                                                                 const OrbitConfig& cfg,
                                                                 std::int64_t window) {
  if (window < 1000) throw Error("finite-time window must be at least 1000 steps");
  LyapunovSettings settings;
  settings.window = window;
  return spectrum(params, cfg, settings).finite_time_series;
}

}  // namespace ldcx
