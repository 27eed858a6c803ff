#include "lorenz_dcx/map.hpp"

#include "lorenz_dcx/parse.hpp"

namespace ldcx {

RealState3d step_real(const SystemParamsd& p, const State3d& s) {
  const auto real = restrict_to_real(p);
  RealState3d v;
  for (int i = 0; i < 3; ++i) {
    if (s[i].imag() != 0.0) {
      throw ParseError(i == 0 ? "x" : i == 1 ? "y" : "z", format_complex(s[i]),
                       "real restriction requires a zero imaginary part");
    }
    v[i] = s[i].real();
  }
  return step_real(real, v);
}

bool exceeds(const State3d& s, double threshold) {
  const double limit = threshold * threshold;
  for (int i = 0; i < 3; ++i) {
    if (!is_finite(s[i]) || std::norm(s[i]) > limit) return true;
  }
  return false;
}

Orbit iterate(const SystemParamsd& params, const OrbitConfig& cfg) {
  validate(params);
  validate(cfg);

  Orbit orbit;
  orbit.params = params;
  orbit.record_stride = cfg.record_stride;
  orbit.samples.reserve(static_cast<std::size_t>(cfg.steps / cfg.record_stride + 1));
  orbit.tail_start = cfg.steps - cfg.tail_length + 1;
  orbit.tail.reserve(static_cast<std::size_t>(cfg.tail_length));

  State3d s = cfg.initial;
  orbit.samples.push_back({0, s});
  for (std::int64_t k = 1; k <= cfg.steps; ++k) {
    const State3d next = step(params, s);
    if (exceeds(next, cfg.divergence_threshold)) {
      orbit.terminated_by = Termination::diverged;
      orbit.divergence_step = k;
      break;
    }
    s = next;
    orbit.steps_completed = k;
    if (k % cfg.record_stride == 0) orbit.samples.push_back({k, s});
    if (k >= orbit.tail_start) orbit.tail.push_back(s);
  }
  orbit.final_state = s;
  if (orbit.diverged()) {
    orbit.tail.clear();
    orbit.tail_start = 0;
  }
  return orbit;
}

}  // namespace ldcx
