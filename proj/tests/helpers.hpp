#pragma once

#include <complex>
#include <bit>
#include <cstdint>
#include <random>

#include "lorenz_dcx/types.hpp"

namespace ldcx::test {

inline Complexd uniform_complex(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double re = u(rng);
  return {re, u(rng)};
}

inline State3d uniform_state(std::mt19937_64& rng, double lo, double hi) {
  State3d s;
  for (int i = 0; i < 3; ++i) s[i] = uniform_complex(rng, lo, hi);
  return s;
}

inline SystemParamsd params(Complexd a, Complexd b, Complexd r, double dt) { return {a, b, r, dt}; }

inline bool bit_equal(const Complexd& u, const Complexd& v) {
  return std::bit_cast<std::uint64_t>(u.real()) == std::bit_cast<std::uint64_t>(v.real()) &&
         std::bit_cast<std::uint64_t>(u.imag()) == std::bit_cast<std::uint64_t>(v.imag());
}

inline bool bit_equal(const State3d& u, const State3d& v) {
  return bit_equal(u[0], v[0]) && bit_equal(u[1], v[1]) && bit_equal(u[2], v[2]);
}

}  // namespace ldcx::test

#include <algorithm>
#include <array>

namespace ldcx::test {

/// Largest pairwise distance under the best matching of two 3-sets.
inline double set_distance(const std::array<Complexd, 3>& u, const std::array<Complexd, 3>& v) {
  std::array<int, 3> perm{0, 1, 2};
  double best = 1e300;
  do {
    double worst = 0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(u[i] - v[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace ldcx::test
