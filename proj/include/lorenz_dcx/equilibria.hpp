#pragma once

#include <array>
#include <cmath>

#include "lorenz_dcx/cubic.hpp"
#include "lorenz_dcx/map.hpp"
#include "lorenz_dcx/types.hpp"

namespace ldcx {

template <typename Scalar>
using Spectrum3 = std::array<Complex<Scalar>, 3>;

/// Square root with argument in (-π/2, π/2]; a negative real maps to +i·√|x|
/// regardless of the sign of its zero imaginary part.
template <typename Scalar>
Complex<Scalar> principal_sqrt(Complex<Scalar> z) {
  if (z.imag() == Scalar(0)) z.imag(Scalar(0));
  return std::sqrt(z);
}

/// The equilibria (0,0,0), (-s,-s,r-1), (s,s,r-1) with s = √b·√(r-1),
/// two sequential principal roots.
template <typename Scalar>
std::array<State3<Scalar>, 3> fixed_points(const SystemParams<Scalar>& p) {
  const Complex<Scalar> one(1);
  const Complex<Scalar> zbar = -one + p.r;
  const Complex<Scalar> s = principal_sqrt(p.b) * principal_sqrt(zbar);
  // Negation must not leave -0 parts behind.
  const auto neg = [](const Complex<Scalar>& z) {
    return Complex<Scalar>(z.real() == Scalar(0) ? Scalar(0) : -z.real(), z.imag() == Scalar(0) ? Scalar(0) : -z.imag());
  };
  return {State3<Scalar>::Zero(), State3<Scalar>(neg(s), neg(s), zbar), State3<Scalar>(s, s, zbar)};
}

/// The displayed stability matrix
///   [[1 + a dt, -a dt, 0], [(r + z) dt, 1 - dt, x dt], [y dt, x dt, 1 - b dt]]
/// used for the published eigenvalue lists and the Re λ > 0 criterion.
template <typename Scalar>
Matrix3c<Scalar> jacobian_at(const SystemParams<Scalar>& p, const State3<Scalar>& s) {
  using C = Complex<Scalar>;
  const C one(1);
  const Scalar dt = p.dt;
  Matrix3c<Scalar> j;
  j << one + p.a * dt, -p.a * dt, C{},
       (p.r + s[2]) * dt, one - dt, s[0] * dt,
       s[1] * dt, s[0] * dt, one - p.b * dt;
  return j;
}

/// Exact derivative of `step`:
///   [[1 - a dt, a dt, 0], [(r - z) dt, 1 - dt, -x dt], [y dt, x dt, 1 - b dt]].
template <typename Scalar>
Matrix3c<Scalar> map_jacobian(const SystemParams<Scalar>& p, const State3<Scalar>& s) {
  using C = Complex<Scalar>;
  const C one(1);
  const Scalar dt = p.dt;
  Matrix3c<Scalar> j;
  j << one - p.a * dt, p.a * dt, C{},
       (p.r - s[2]) * dt, one - dt, -s[0] * dt,
       s[1] * dt, s[0] * dt, one - p.b * dt;
  return j;
}

/// Descending modulus; near-equal moduli (relative 1e-12) fall back to
/// descending real part, then descending imaginary part.
template <typename Scalar>
void sort_spectrum(Spectrum3<Scalar>& ev) {
  const auto before = [](const Complex<Scalar>& u, const Complex<Scalar>& v) {
    const Scalar mu = std::abs(u), mv = std::abs(v);
    const Scalar tol = Scalar(1e-12) * std::max({Scalar(1), mu, mv});
    if (std::abs(mu - mv) > tol) return mu > mv;
    if (std::abs(u.real() - v.real()) > tol) return u.real() > v.real();
    return u.imag() > v.imag();
  };
  for (int i = 1; i < 3; ++i) {
    for (int j = i; j > 0 && before(ev[j], ev[j - 1]); --j) std::swap(ev[j], ev[j - 1]);
  }
}

/// Eigenvalues of a 3x3 complex matrix. The matrix is shifted by trace/3
/// before the characteristic cubic is formed, so clustered spectra near the
/// identity keep their absolute accuracy.
template <typename Scalar>
Spectrum3<Scalar> eigenvalues3(const Matrix3c<Scalar>& m) {
  const Complex<Scalar> sigma = m.trace() / Scalar(3);
  const Matrix3c<Scalar> shifted = m - sigma * Matrix3c<Scalar>::Identity();
  auto ev = cardano_roots(characteristic_cubic(shifted));
  for (auto& e : ev) e += sigma;
  sort_spectrum(ev);
  return ev;
}

/// {1 - b dt, ½(2 - dt + a dt ∓ dt √(1 + 2a + a² - 4ar))}, in that order.
template <typename Scalar>
Spectrum3<Scalar> origin_eigenvalues_closed_form(const SystemParams<Scalar>& p) {
  using C = Complex<Scalar>;
  const C one(1);
  const Scalar dt = p.dt;
  const C root = principal_sqrt(one + Scalar(2) * p.a + p.a * p.a - Scalar(4) * p.a * p.r);
  const C base = Scalar(2) - dt + p.a * dt;
  return {one - p.b * dt, (base - dt * root) / Scalar(2), (base + dt * root) / Scalar(2)};
}

template <typename Scalar>
struct EquilibriumReport {
  State3<Scalar> point;
  /// Spectrum of the displayed matrix (`jacobian_at`), sorted.
  Spectrum3<Scalar> eigenvalues;
  /// All Re λ > 0 on `eigenvalues`.
  bool paper_stable = false;
  /// All |λ| < 1 on `eigenvalues`.
  bool modulus_stable = false;
  Scalar residual = 0;
  /// Spectrum of the exact derivative (`map_jacobian`) and its |λ| < 1 verdict.
  Spectrum3<Scalar> map_eigenvalues;
  bool map_stable = false;
};

template <typename Scalar>
Scalar fixed_point_residual(const SystemParams<Scalar>& p, const State3<Scalar>& s) {
  return max_distance<Scalar>(step(p, s), s);
}

template <typename Scalar>
EquilibriumReport<Scalar> classify_equilibrium(const SystemParams<Scalar>& p,
                                               const State3<Scalar>& point) {
  const Scalar residual = fixed_point_residual(p, point);
  if (!(residual < Scalar(1e-9) * (Scalar(1) + max_modulus(point)))) {
    throw NotEquilibriumError(static_cast<double>(residual));
  }
  EquilibriumReport<Scalar> rep;
  rep.point = point;
  rep.residual = residual;
  rep.eigenvalues = eigenvalues3(jacobian_at(p, point));
  rep.map_eigenvalues = eigenvalues3(map_jacobian(p, point));
  const auto all = [](const Spectrum3<Scalar>& ev, auto pred) {
    return pred(ev[0]) && pred(ev[1]) && pred(ev[2]);
  };
  rep.paper_stable = all(rep.eigenvalues, [](const auto& l) { return l.real() > 0; });
  rep.modulus_stable = all(rep.eigenvalues, [](const auto& l) { return std::abs(l) < 1; });
  rep.map_stable = all(rep.map_eigenvalues, [](const auto& l) { return std::abs(l) < 1; });
  return rep;
}

template <typename Scalar>
struct ConvergenceCondition {
  Scalar r_modulus;
  Scalar bound;
  bool holds;
};

/// |r| against |a (a + b + 3) / (a - b - 1)|.
template <typename Scalar>
ConvergenceCondition<Scalar> convergence_condition(const SystemParams<Scalar>& p) {
  const Complex<Scalar> den = p.a - p.b - Scalar(1);
  if (den == Complex<Scalar>{}) throw DegenerateBoundError();
  const Scalar bound = std::abs(p.a * (p.a + p.b + Scalar(3)) / den);
  const Scalar rm = std::abs(p.r);
  return {rm, bound, rm < bound};
}

}  // namespace ldcx
