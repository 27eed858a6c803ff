#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/LU>

#include "lorenz_dcx/types.hpp"

namespace ldcx {

/// Monic cubic t^3 + c2 t^2 + c1 t + c0.
template <typename Scalar>
struct Cubic {
  Complex<Scalar> c2, c1, c0;

  Complex<Scalar> operator()(const Complex<Scalar>& t) const { return ((t + c2) * t + c1) * t + c0; }
  Complex<Scalar> derivative(const Complex<Scalar>& t) const {
    return (Scalar(3) * t + Scalar(2) * c2) * t + c1;
  }
};

/// Characteristic polynomial det(tI - m), coefficients from trace, principal
/// 2x2 minors and determinant.
template <typename Scalar>
Cubic<Scalar> characteristic_cubic(const Matrix3c<Scalar>& m) {
  const auto minor = [&](int i, int j) { return m(i, i) * m(j, j) - m(i, j) * m(j, i); };
  return {-m.trace(), minor(0, 1) + minor(0, 2) + minor(1, 2), -m.determinant()};
}

/// Principal cube root (argument in (-π/3, π/3]).
template <typename Scalar>
Complex<Scalar> principal_cbrt(const Complex<Scalar>& w) {
  if (w == Complex<Scalar>{}) return {};
  return std::polar(std::cbrt(std::abs(w)), std::arg(w) / Scalar(3));
}

/// Roots of a monic cubic by the complex Cardano formula, each refined by one
/// Newton step (kept only if it lowers the residual).
template <typename Scalar>
std::array<Complex<Scalar>, 3> cardano_roots(const Cubic<Scalar>& f) {
  using C = Complex<Scalar>;
  const C shift = f.c2 / Scalar(3);
  // t = u - c2/3 gives u^3 + p u + q.
  const C p = f.c1 - f.c2 * shift;
  const C q = Scalar(2) * shift * shift * shift - shift * f.c1 + f.c0;
  const C disc = std::sqrt(q * q / Scalar(4) + p * p * p / Scalar(27));
  const C w_plus = -q / Scalar(2) + disc;
  const C w_minus = -q / Scalar(2) - disc;
  const C u = principal_cbrt(std::abs(w_plus) >= std::abs(w_minus) ? w_plus : w_minus);
  const C v = u == C{} ? C{} : -p / (Scalar(3) * u);

  const C omega = std::polar(Scalar(1), Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(3));
  const C omega2 = std::conj(omega);
  std::array<C, 3> roots{u + v - shift, omega * u + omega2 * v - shift,
                         omega2 * u + omega * v - shift};
  for (auto& t : roots) {
    const C d = f.derivative(t);
    if (d == C{}) continue;
    const C polished = t - f(t) / d;
    if (std::abs(f(polished)) <= std::abs(f(t))) t = polished;
  }
  return roots;
}

}  // namespace ldcx
