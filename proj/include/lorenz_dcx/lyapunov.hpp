#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lorenz_dcx/equilibria.hpp"
#include "lorenz_dcx/types.hpp"

namespace ldcx {

/// Real 6x6 representation of a complex 3x3 matrix: each entry α + βi becomes
/// the block [[α, -β], [β, α]].
template <typename Scalar>
Matrix6<Scalar> real_lift(const Matrix3c<Scalar>& m) {
  Matrix6<Scalar> out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Scalar re = m(i, j).real(), im = m(i, j).imag();
      out.template block<2, 2>(2 * i, 2 * j) << re, -im, im, re;
    }
  }
  return out;
}

/// Image of a tangent vector under the linearized map at `s`.
template <typename Scalar>
Vector6<Scalar> tangent_step(const SystemParams<Scalar>& p, const State3<Scalar>& s,
                             const Vector6<Scalar>& v) {
  return real_lift(map_jacobian(p, s)) * v;
}

struct LyapunovSettings {
  /// Steps discarded before averaging; negative selects 20% of the run.
  std::int64_t burn_in = -1;
  /// Steps between QR reorthonormalizations of the tangent frame.
  std::int64_t interval = 10;
  /// Finite-time window length; 0 selects max(1000, 1/dt).
  std::int64_t window = 0;
};

struct ExponentThresholds {
  /// |λ| below this (nats/step) is neutral.
  double magnitude = 5e-6;
  /// A positive exponent must also exceed this many standard errors.
  double significance = 3.0;
};

enum class ExponentVerdict { positive, negative, neutral };

const char* to_string(ExponentVerdict v);

struct LyapunovEstimate {
  /// Per-step exponents of the 6-real-dimensional lift, descending.
  std::array<double, 6> exponents{};
  double largest = 0;
  /// (window start k, windowed largest exponent) over the whole run.
  std::vector<std::pair<std::int64_t, double>> finite_time_series;
  struct {
    std::int64_t burn_in = 0;
    std::int64_t total = 0;
    std::int64_t interval = 0;
    std::int64_t window = 0;
  } settings;
  /// Standard error of the largest exponent from the last-quarter windows.
  double standard_error = 0;
  /// Post-burn-in steps the averages cover.
  std::int64_t averaged_steps = 0;
  /// Set when the orbit diverged after burn-in; averages stop there.
  std::int64_t divergence_step = -1;
};

ExponentVerdict verdict(const LyapunovEstimate& est, const ExponentThresholds& th = {});

/// Benettin-style estimate: the orbit and a 6-vector tangent frame evolve
/// together, the frame is QR-reorthonormalized every `interval` steps and the
/// log diagonal of R accumulates after burn-in.
///
/// Throws DivergentOrbitError if the orbit leaves cfg.divergence_threshold
/// before burn-in ends; a later divergence truncates the averages.
LyapunovEstimate spectrum(const SystemParamsd& params, const OrbitConfig& cfg,
                          const LyapunovSettings& settings = {});

/// Windowed largest exponent series; window must be at least 1000 steps.
std::vector<std::pair<std::int64_t, double>> finite_time_largest(const SystemParamsd& params,
                                                                 const OrbitConfig& cfg,
                                                                 std::int64_t window);

}  // namespace ldcx
