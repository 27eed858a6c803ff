#pragma once

#include <cstdint>
#include <vector>

#include "lorenz_dcx/types.hpp"

namespace ldcx {

/// One forward-Euler step of the Lorenz system,
///
///   x' = x + a(y - x) dt
///   y' = y + (-x z + r x - y) dt
///   z' = z + (x y - b z) dt
///
/// evaluated left to right with dt multiplied last. Works for any field type
/// (real or complex) so the real restriction shares the exact expression.
template <typename Field, typename Real>
Eigen::Matrix<Field, 3, 1> lorenz_step(const Field& a, const Field& b, const Field& r, Real dt,
                                       const Eigen::Matrix<Field, 3, 1>& s) {
  const Field& x = s[0];
  const Field& y = s[1];
  const Field& z = s[2];
  Eigen::Matrix<Field, 3, 1> out;
  out[0] = x + a * (y - x) * dt;
  out[1] = y + (-x * z + r * x - y) * dt;
  out[2] = z + (x * y - b * z) * dt;
  return out;
}

template <typename Scalar>
State3<Scalar> step(const SystemParams<Scalar>& p, const State3<Scalar>& s) {
  return lorenz_step(p.a, p.b, p.r, p.dt, s);
}

template <typename Scalar>
RealState3<Scalar> step_real(const RealSystemParams<Scalar>& p, const RealState3<Scalar>& s) {
  return lorenz_step(p.a, p.b, p.r, p.dt, s);
}

/// Checked real restriction: rejects nonzero imaginary parts in params or state.
RealState3d step_real(const SystemParamsd& p, const State3d& s);

/// (x, y, z) -> (-x, -y, z); the map commutes with it exactly.
template <typename Scalar>
State3<Scalar> apply_symmetry(const State3<Scalar>& s) {
  return {-s[0], -s[1], s[2]};
}

enum class Termination { completed, diverged };

struct OrbitSample {
  std::int64_t k;
  State3d state;
};

struct Orbit {
  SystemParamsd params;
  std::int64_t record_stride = 1;
  /// Samples at k = 0, stride, 2·stride, ... (k = 0 is the initial state).
  std::vector<OrbitSample> samples;
  Termination terminated_by = Termination::completed;
  /// Index of the first state that exceeded the threshold or went non-finite.
  std::int64_t divergence_step = -1;
  /// Number of steps applied before termination.
  std::int64_t steps_completed = 0;
  /// State after the last completed step (the last finite state when diverged).
  State3d final_state = State3d::Zero();
  /// Full-resolution trailing states; tail[i] is the state at k = tail_start + i.
  std::vector<State3d> tail;
  std::int64_t tail_start = 0;

  bool diverged() const { return terminated_by == Termination::diverged; }
};

/// True when the state has left the bounded region: a non-finite component or
/// a component modulus above the threshold.
bool exceeds(const State3d& s, double threshold);

Orbit iterate(const SystemParamsd& params, const OrbitConfig& cfg);

}  // namespace ldcx
