#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "lorenz_dcx/error.hpp"

namespace ldcx {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// A point (x, y, z) in complex 3-space.
template <typename Scalar>
using State3 = Eigen::Matrix<std::complex<Scalar>, 3, 1>;

/// A point of the real restriction of the map.
template <typename Scalar>
using RealState3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;

template <typename Scalar>
using Vector3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;

/// Tangent vectors live in the 6-real-dimensional lift of complex 3-space,
/// ordered (re x, im x, re y, im y, re z, im z).
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;

template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

using Complexd = Complex<double>;
using State3d = State3<double>;
using RealState3d = RealState3<double>;
using Matrix3cd = Matrix3c<double>;
using Vector3cd = Vector3c<double>;
using Vector6d = Vector6<double>;
using Matrix6d = Matrix6<double>;

/// Parameters (a, b, r, dt) of the discrete map. dt is a positive real step.
template <typename Scalar>
struct SystemParams {
  Complex<Scalar> a{};
  Complex<Scalar> b{};
  Complex<Scalar> r{};
  Scalar dt{};
};

/// Parameters of the real restriction (all imaginary parts exactly zero).
template <typename Scalar>
struct RealSystemParams {
  Scalar a{};
  Scalar b{};
  Scalar r{};
  Scalar dt{};
};

using SystemParamsd = SystemParams<double>;
using RealSystemParamsd = RealSystemParams<double>;

struct OrbitConfig {
  State3d initial = State3d::Zero();
  std::int64_t steps = 1;
  std::int64_t record_stride = 1;
  double divergence_threshold = 1e6;
  /// Number of trailing states kept at full resolution (stride 1) for
  /// period detection and fingerprinting. 0 disables the tail buffer.
  std::int64_t tail_length = 0;
};

template <typename Scalar>
bool is_finite(const Complex<Scalar>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <typename Scalar>
bool is_finite(const State3<Scalar>& s) {
  return is_finite(s[0]) && is_finite(s[1]) && is_finite(s[2]);
}

/// Largest component modulus, max(|x|, |y|, |z|).
template <typename Scalar>
Scalar max_modulus(const State3<Scalar>& s) {
  return std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
}

/// Largest component modulus of a difference, ‖s - t‖∞ over complex components.
template <typename Scalar>
Scalar max_distance(const State3<Scalar>& s, const State3<Scalar>& t) {
  return max_modulus<Scalar>(s - t);
}

template <typename Scalar>
void validate(const SystemParams<Scalar>& p) {
  if (!is_finite(p.a)) throw ParseError("a", "", "must be finite");
  if (!is_finite(p.b)) throw ParseError("b", "", "must be finite");
  if (!is_finite(p.r)) throw ParseError("r", "", "must be finite");
  if (!std::isfinite(p.dt) || !(p.dt > 0)) throw ParseError("dt", "", "dt must be positive");
}

inline void validate(const OrbitConfig& cfg) {
  if (!is_finite(cfg.initial)) throw Error("initial state must be finite");
  if (cfg.steps < 1) throw Error("steps must be positive");
  if (cfg.record_stride < 1) throw Error("record_stride must be positive");
  if (cfg.record_stride > cfg.steps) throw Error("record_stride must not exceed steps");
  if (!(cfg.divergence_threshold > 0)) throw Error("divergence_threshold must be positive");
  if (cfg.tail_length < 0 || cfg.tail_length > cfg.steps) {
    throw Error("tail_length must lie in [0, steps]");
  }
}

}  // namespace ldcx
