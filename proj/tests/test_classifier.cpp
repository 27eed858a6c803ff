#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "lorenz_dcx/classifier.hpp"
#include "lorenz_dcx/equilibria.hpp"
#include "lorenz_dcx/experiments.hpp"

using namespace ldcx;
using test::params;

namespace {

const State3d default_initial(Complexd(0.1, 0.2), Complexd(0.3, 0.4), Complexd(1, 2));

OrbitConfig config(const State3d& initial, std::int64_t steps) {
  OrbitConfig cfg;
  cfg.initial = initial;
  cfg.steps = steps;
  cfg.record_stride = 1000;
  return cfg;
}

std::vector<State3d> cycle(int p, std::size_t n) {
  std::vector<State3d> base;
  for (int i = 0; i < p; ++i) base.push_back(State3d(Complexd(std::cos(i), std::sin(i)), i, Complexd(0, i * i)));
  std::vector<State3d> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(base[k % static_cast<std::size_t>(p)]);
  return out;
}

}  // namespace

TEST_CASE("period detection on synthetic tails") {
  CHECK(detect_period(cycle(7, 300), 100) == 7);
  CHECK(detect_period(cycle(1, 300), 100) == 1);
  CHECK(detect_period(cycle(100, 300), 100) == 100);
  // The smallest period wins, never a multiple.
  CHECK(detect_period(cycle(3, 3000), 1000) == 3);

  std::mt19937_64 rng(5);
  std::vector<State3d> noise;
  for (int i = 0; i < 300; ++i) noise.push_back(test::uniform_state(rng, -1, 1));
  CHECK_FALSE(detect_period(noise, 100).has_value());

  CHECK_THROWS_AS(detect_period(cycle(7, 299), 100), InsufficientDataError);
}

TEST_CASE("period detection tolerates noise below the recurrence tolerance") {
  auto tail = cycle(7, 3000);
  std::mt19937_64 rng(9);
  for (auto& s : tail) s += 1e-9 * test::uniform_state(rng, -1, 1);
  CHECK(detect_period(tail, 1000, 1e-6) == 7);
  CHECK_FALSE(detect_period(tail, 1000, 1e-12).has_value());
}

TEST_CASE("r = 3 converges to its nonzero sink") {
  const auto a = analyze(params(10, 8.0 / 3.0, 3, 0.0005), config(default_initial, 400000));
  REQUIRE(a.label.kind == RegimeKind::converges_to);
  const State3d plus(2.3094, 2.3094, 2), minus(-2.3094, -2.3094, 2);
  CHECK(std::min(max_distance<double>(*a.label.target, plus), max_distance<double>(*a.label.target, minus)) < 1e-4);
  CHECK(a.label.evidence.convergence_mode == "settled");
  CHECK(a.label.evidence.final_residual < 1e-6);
}

TEST_CASE("real r = 26 is chaotic") {
  const auto a = analyze(params(10, 8.0 / 3.0, 26, 0.0005), config(State3d(0.1, 0.3, 1), 2000000));
  CHECK(a.label.kind == RegimeKind::chaotic);
  CHECK(a.label.evidence.period_exceeds_max);
  CHECK(a.label.evidence.exponent_verdict == ExponentVerdict::positive);
}

TEST_CASE("divergent orbits carry their step") {
  const auto a = analyze(params(10, 8.0 / 3.0, {-1, -5}, 0.0005), config(default_initial, 2000000));
  CHECK(a.label.kind == RegimeKind::divergent);
  CHECK(a.label.divergence_step == a.orbit.divergence_step);
  CHECK_FALSE(a.lyapunov.has_value());
  CHECK(to_string(a.label) == "divergent(" + std::to_string(a.orbit.divergence_step) + ")");
}

TEST_CASE("short orbits are rejected") {
  const auto orbit = iterate(params(10, 8.0 / 3.0, 3, 0.0005), config(default_initial, 5000));
  CHECK_THROWS_AS(classify(orbit), InsufficientDataError);
}

TEST_CASE("bounded non-settling orbits need exponent evidence") {
  auto cfg = config(State3d(0.1, 0.3, 1), 200000);
  cfg.tail_length = default_tail_length(cfg.steps);
  ClassifierTolerances tol;
  tol.period_max = 1000;
  const auto orbit = iterate(params(10, 8.0 / 3.0, 26, 0.0005), cfg);
  CHECK_THROWS_AS(classify(orbit, nullptr, tol), Error);
}

TEST_CASE("labels respect the symmetry") {
  for (double r : {10.0, 26.0}) {
    const auto p = params(10, 8.0 / 3.0, r, 0.0005);
    const State3d s(0.1, 0.3, 1);
    const auto u = analyze(p, config(s, 400000));
    const auto v = analyze(p, config(apply_symmetry(s), 400000));
    CHECK(u.label.kind == v.label.kind);
    if (u.label.target) {
      REQUIRE(v.label.target);
      CHECK(*v.label.target == apply_symmetry(*u.label.target));
    }
    CHECK(v.orbit.final_state == apply_symmetry(u.orbit.final_state));
  }
}

TEST_CASE("fingerprint does not depend on the sampling stride") {
  const auto p = params(10, 8.0 / 3.0, 26, 0.0005);
  auto cfg = config(State3d(0.1, 0.3, 1), 400000);
  const auto coarse = analyze(p, cfg);
  cfg.record_stride = 100;
  const auto fine = analyze(p, cfg);
  const auto u = fingerprint(coarse.orbit, coarse.label);
  const auto v = fingerprint(fine.orbit, fine.label);
  CHECK(u.hash == v.hash);
  CHECK(same_attractor(u, v));
}

TEST_CASE("grouping rules") {
  AttractorFingerprint div, sink_a, sink_b, sink_c;
  sink_a.kind = sink_b.kind = sink_c.kind = RegimeKind::converges_to;
  sink_a.terminal = State3d(1, 1, 1);
  sink_b.terminal = State3d(1 + 5e-5, 1, 1);
  sink_c.terminal = State3d(-1, -1, 1);
  CHECK(same_attractor(div, div));
  CHECK_FALSE(same_attractor(div, sink_a));
  CHECK(same_attractor(sink_a, sink_b));
  CHECK_FALSE(same_attractor(sink_a, sink_c));

  AttractorFingerprint u, v;
  u.kind = v.kind = RegimeKind::chaotic;
  u.cells = {1, 2, 3, 4};
  v.cells = {2, 3, 4, 5};
  CHECK(same_attractor(u, v));
  v.cells = {4, 5, 6, 7};
  CHECK_FALSE(same_attractor(u, v));
}

TEST_CASE("r = 5 ensemble settles on the two nonzero sinks") {
  const auto p = params(10, 8.0 / 3.0, 5, 0.005);
  // Real draws: complex ones can leave the basin and diverge within a few hundred steps.
  std::vector<State3d> members;
  for (const auto& s : ball_ensemble(5, 1)) members.push_back(s.real().cast<Complexd>());
  const auto res = coexisting_attractors(p, members, config(State3d(State3d::Zero()), 200000));
  const auto fp = fixed_points(p);
  REQUIRE(res.labels.size() == 5);
  CHECK(res.groups.size() <= 2);
  std::size_t counted = 0;
  for (const auto& g : res.groups) {
    REQUIRE(g.fingerprint.terminal);
    const double d = std::min(max_distance<double>(*g.fingerprint.terminal, fp[1]),
                              max_distance<double>(*g.fingerprint.terminal, fp[2]));
    CHECK(d < 1e-4);
    counted += g.members.size();
  }
  CHECK(counted == 5);
  CHECK_THROWS_AS(coexisting_attractors(p, {State3d(State3d::Zero())}, config(State3d(State3d::Zero()), 20000)), Error);
}

TEST_CASE("very high period row is periodic or beyond the period cap") {
  const auto a = analyze(params(0.277, -0.3, 0, 0.0005), config(State3d(0.1, -0.1, -13), 2000000));
  const bool high = (a.label.kind == RegimeKind::periodic && a.label.period >= 2) ||
                    (a.label.kind == RegimeKind::quasi_periodic && a.label.evidence.period_exceeds_max);
  CHECK(high);
}

TEST_CASE("label text") {
  RegimeLabel l;
  l.kind = RegimeKind::periodic;
  l.period = 7;
  CHECK(to_string(l) == "periodic(7)");
  l.kind = RegimeKind::chaotic;
  CHECK(to_string(l) == "chaotic");
  l.kind = RegimeKind::converges_to;
  l.target = State3d(Complexd(1, 0), Complexd(0, -1), Complexd(2, 3));
  CHECK(to_string(l).rfind("converges_to (", 0) == 0);
}
