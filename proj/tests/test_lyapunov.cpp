#include <doctest.h>

#include <numeric>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "lorenz_dcx/lyapunov.hpp"
#include "lorenz_dcx/map.hpp"

using namespace ldcx;
using test::params;

namespace {

const State3d default_initial(Complexd(0.1, 0.2), Complexd(0.3, 0.4), Complexd(1, 2));

OrbitConfig config(const State3d& initial, std::int64_t steps) {
  OrbitConfig cfg;
  cfg.initial = initial;
  cfg.steps = steps;
  cfg.record_stride = std::min<std::int64_t>(1000, steps);
  return cfg;
}

Vector6<double> lift(const State3d& v) {
  Vector6<double> out;
  for (int i = 0; i < 3; ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

// Mean of 2 log|det J| along the orbit over the averaged steps.
double mean_log_volume(const SystemParamsd& p, const OrbitConfig& cfg, const LyapunovEstimate& est) {
  State3d s = cfg.initial;
  double sum = 0;
  const std::int64_t end = est.settings.burn_in + est.averaged_steps;
  for (std::int64_t k = 0; k < end; ++k) {
    if (k >= est.settings.burn_in) sum += 2.0 * std::log(std::abs(map_jacobian(p, s).determinant()));
    s = step(p, s);
  }
  return sum / static_cast<double>(est.averaged_steps);
}

}  // namespace

TEST_CASE("real lift represents complex multiplication") {
  const auto p = params({1, 2}, {0.5, -1}, {3, 4}, 0.01);
  const State3d s(Complexd(1, 1), Complexd(2, -1), Complexd(0.5, 0.5));
  const State3d v(Complexd(0.3, -0.2), Complexd(-0.1, 0.4), Complexd(0.2, 0.1));
  const State3d jv = map_jacobian(p, s) * v;
  CHECK((tangent_step(p, s, lift(v)) - lift(jv)).norm() < 1e-15);
  CHECK(tangent_step(p, s, Vector6<double>(Vector6<double>::Zero())).isZero());
}

TEST_CASE("tangent step stretches eigenvectors by their eigenvalue modulus") {
  const auto p = params(10, 8.0 / 3.0, 5, 0.005);
  const auto fp = fixed_points(p)[2];
  Eigen::ComplexEigenSolver<Matrix3c<double>> es(map_jacobian(p, fp));
  for (int i = 0; i < 3; ++i) {
    const State3d v = es.eigenvectors().col(i);
    const auto lv = lift(v);
    const auto out = tangent_step(p, fp, lv);
    CHECK(std::abs(out.norm() / lv.norm() - std::abs(es.eigenvalues()[i])) < 1e-12);
    CHECK((out - lift(State3d(es.eigenvalues()[i] * v))).norm() < 1e-12);
  }
}

TEST_CASE("a = 0 leaves x invariant with unit multiplier") {
  const auto p = params(0, {0.8491, 0.934}, {7, 1}, 0.00005);
  const State3d s = default_initial;
  const auto j = map_jacobian(p, s);
  CHECK(j(0, 0) == Complexd(1));
  CHECK(j(0, 1) == Complexd(0));
  Vector6<double> ex = Vector6<double>::Zero();
  ex[0] = 1;
  CHECK(tangent_step(p, s, ex)[0] == 1.0);

  const auto est = spectrum(p, config(default_initial, 400000));
  int neutral = 0;
  for (double e : est.exponents) neutral += std::abs(e) < 1e-6;
  CHECK(neutral >= 2);
  CHECK(std::abs(est.largest) < 1e-6);
}

TEST_CASE("exponent sum equals the mean log volume change") {
  struct Regime {
    SystemParamsd p;
    State3d initial;
  };
  const Regime regimes[] = {
      {params(10, 8.0 / 3.0, 10, 0.0005), default_initial},
      {params(10, 8.0 / 3.0, 26, 0.0005), State3d(0.1, 0.3, 1)},
      {params(0.256, -0.3, 0, 0.0005), State3d(-0.1, 0.1, -2)},
  };
  for (const auto& reg : regimes) {
    const auto cfg = config(reg.initial, 200000);
    const auto est = spectrum(reg.p, cfg);
    REQUIRE(est.divergence_step < 0);
    const double sum = std::accumulate(est.exponents.begin(), est.exponents.end(), 0.0);
    const double volume = mean_log_volume(reg.p, cfg, est);
    CHECK(std::abs(sum - volume) <= 1e-3 * std::abs(volume));
  }
}

TEST_CASE("exponents at a sink pair up with the map eigenvalue moduli") {
  const auto p = params(10, 8.0 / 3.0, 10, 0.0005);
  const auto est = spectrum(p, config(State3d(0.1, 0.3, 0.5), 2000000));
  const auto fp = fixed_points(p);
  const State3d sink = iterate(p, config(State3d(0.1, 0.3, 0.5), 2000000)).final_state;
  const auto& target = max_distance<double>(sink, fp[1]) < max_distance<double>(sink, fp[2]) ? fp[1] : fp[2];
  const auto mu = eigenvalues3(map_jacobian(p, target));
  for (int i = 0; i < 3; ++i) {
    const double expected = std::log(std::abs(mu[i]));
    CHECK(std::abs(est.exponents[2 * i] - expected) < 1e-4);
    CHECK(std::abs(est.exponents[2 * i + 1] - expected) < 1e-4);
    CHECK(std::abs(est.exponents[2 * i] - expected) < 1e-3 * std::abs(expected));
  }
  CHECK(verdict(est) == ExponentVerdict::negative);
}

TEST_CASE("reorthonormalization interval does not change the estimate") {
  const auto p = params(10, 8.0 / 3.0, 26, 0.0005);
  const auto cfg = config(State3d(0.1, 0.3, 1), 200000);
  std::vector<double> largest;
  for (std::int64_t interval : {5, 10, 20}) {
    LyapunovSettings s;
    s.interval = interval;
    largest.push_back(spectrum(p, cfg, s).largest);
  }
  CHECK(largest[0] > 0);
  for (double v : largest) CHECK(std::abs(v - largest[1]) < 2e-3 * std::abs(largest[1]));
}

TEST_CASE("chaotic real orbit has a positive exponent") {
  const auto est = spectrum(params(10, 8.0 / 3.0, 26, 0.0005), config(State3d(0.1, 0.3, 1), 2000000));
  CHECK(verdict(est) == ExponentVerdict::positive);
  // Per unit time this is the familiar ~0.9 of the flow.
  CHECK(est.largest / 0.0005 > 0.5);
  CHECK(est.largest / 0.0005 < 1.2);
}

TEST_CASE("verdict is stable when the run doubles") {
  for (double r : {10.0, 18.0}) {
    const auto p = params(10, 8.0 / 3.0, r, 0.0005);
    const auto a = spectrum(p, config(default_initial, 1000000));
    const auto b = spectrum(p, config(default_initial, 2000000));
    CHECK(verdict(a) == verdict(b));
  }
}

TEST_CASE("divergence before burn-in is an error carrying the step") {
  const auto p = params(10, 8.0 / 3.0, 26, 0.0005);
  const auto cfg = config(default_initial, 2000000);
  const auto orbit = iterate(p, cfg);
  REQUIRE(orbit.diverged());
  try {
    spectrum(p, cfg);
    FAIL("no throw");
  } catch (const DivergentOrbitError& e) {
    CHECK(e.step() == orbit.divergence_step);
  }
}

TEST_CASE("finite-time series") {
  const auto p = params(10, 8.0 / 3.0, 2, 0.0005);
  const auto cfg = config(default_initial, 400000);
  const auto series = finite_time_largest(p, cfg, 2000);
  REQUIRE(series.size() == 200);
  CHECK(series.front().first == 0);
  CHECK(series[1].first == 2000);
  for (const auto& [k, v] : series) {
    if (k >= 80000) CHECK(v < 0);
  }
  CHECK_THROWS_AS(finite_time_largest(p, cfg, 999), Error);
}

TEST_CASE("settings validation and defaults") {
  const auto p = params(10, 8.0 / 3.0, 10, 0.0005);
  CHECK_THROWS_AS(spectrum(p, config(default_initial, 50)), Error);
  LyapunovSettings bad;
  bad.interval = 0;
  CHECK_THROWS_AS(spectrum(p, config(default_initial, 1000), bad), Error);
  const auto est = spectrum(p, config(default_initial, 100000));
  CHECK(est.settings.burn_in == 20000);
  CHECK(est.settings.window == 2000);
  CHECK(est.averaged_steps == 80000);
  CHECK(std::is_sorted(est.exponents.rbegin(), est.exponents.rend()));
}
