#include "lorenz_dcx/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "lorenz_dcx/equilibria.hpp"
#include "lorenz_dcx/parallel.hpp"
#include "lorenz_dcx/parse.hpp"
#include "lorenz_dcx/report.hpp"

namespace ldcx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_count(std::string_view text, std::string_view key) {
  const auto raw = trim(text);
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec == std::errc{} && end == raw.data() + raw.size()) return v;
  // Accept exact integers written in floating form, e.g. 2e6.
  const double d = parse_real(raw, key);
  if (d != std::floor(d) || std::abs(d) > 9e15) {
    throw ParseError(std::string(key), std::string(raw), "expected an integer");
  }
  return static_cast<std::int64_t>(d);
}

bool parse_flag(std::string_view text, std::string_view key) {
  const auto raw = trim(text);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ParseError(std::string(key), std::string(raw), "expected true or false");
}

const std::set<std::string_view> known_keys = {
    "a", "b", "r", "dt", "x0", "y0", "z0", "steps", "label", "expected", "id", "note", "stride",
    "tolerance", "reference_only", "basin_sensitive", "ensemble", "stated_fixed_point"};

std::string row_id(std::string_view prefix, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", index);
  return std::string(prefix) + "-row" + buf;
}

}  // namespace

ExpectedLabel parse_expected(std::string_view text) {
  const auto raw = trim(text);
  std::size_t n = 0;
  while (n < raw.size() && (std::isalpha(static_cast<unsigned char>(raw[n])) || raw[n] == '_')) ++n;
  const auto name = raw.substr(0, n);
  const auto rest = trim(raw.substr(n));
  using K = ExpectedLabel::Kind;
  ExpectedLabel e;
  const auto no_argument = [&](K k) {
    if (!rest.empty()) throw ParseError("expected", std::string(raw), "unexpected argument");
    e.kind = k;
  };
  const auto paren_int = [&]() -> std::int64_t {
    if (rest.size() < 3 || rest.front() != '(' || rest.back() != ')') {
      throw ParseError("expected", std::string(raw), "expected an integer in parentheses");
    }
    return parse_count(rest.substr(1, rest.size() - 2), "expected");
  };
  if (name == "converges_to" || name == "transient_chaos") {
    e.kind = name == "converges_to" ? K::converges_to : K::transient_chaos;
    if (!rest.empty()) e.target = parse_state(rest, "expected");
  } else if (name == "periodic") {
    e.kind = K::periodic;
    if (!rest.empty()) e.period = paren_int();
  } else if (name == "coexisting") {
    e.kind = K::coexisting;
    e.groups = static_cast<int>(paren_int());
    if (e.groups < 1) throw ParseError("expected", std::string(raw), "group count must be positive");
  } else if (name == "quasi_periodic") {
    no_argument(K::quasi_periodic);
  } else if (name == "chaotic") {
    no_argument(K::chaotic);
  } else if (name == "divergent") {
    no_argument(K::divergent);
  } else if (name == "high_period") {
    no_argument(K::high_period);
  } else {
    throw ParseError("expected", std::string(raw), "unknown regime label");
  }
  return e;
}

std::string to_string(const ExpectedLabel& e) {
  using K = ExpectedLabel::Kind;
  switch (e.kind) {
    case K::converges_to: return e.target ? "converges_to " + format_state(*e.target) : "converges_to";
    case K::transient_chaos: return e.target ? "transient_chaos " + format_state(*e.target) : "transient_chaos";
    case K::periodic: return e.period ? "periodic(" + std::to_string(*e.period) + ")" : "periodic";
    case K::quasi_periodic: return "quasi_periodic";
    case K::chaotic: return "chaotic";
    case K::divergent: return "divergent";
    case K::high_period: return "high_period";
    case K::coexisting: return "coexisting(" + std::to_string(e.groups) + ")";
  }
  return "";
}

std::vector<Scenario> parse_suite(std::string_view text, std::string_view prefix) {
  std::vector<Scenario> out;
  std::set<std::string> ids;
  const auto stanzas = parse_stanzas(text);
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    const KeyValues& kv = stanzas[i];
    for (const auto& e : kv.entries()) {
      if (!known_keys.count(e.key)) throw ParseError(e.key, e.value, "unknown key (line " + std::to_string(e.line) + ")");
    }
    Scenario sc;
    sc.line = kv.first_line();
    sc.id = kv.contains("id") ? std::string(*kv.find("id")) : row_id(prefix, i + 1);
    if (!ids.insert(sc.id).second) throw ParseError("id", sc.id, "duplicate scenario id");
    if (const auto v = kv.find("label")) sc.label = *v;
    if (const auto v = kv.find("note")) sc.note = *v;
    if (const auto v = kv.find("reference_only")) sc.reference_only = parse_flag(*v, "reference_only");
    if (const auto v = kv.find("basin_sensitive")) sc.basin_sensitive = parse_flag(*v, "basin_sensitive");

    const bool needs_run = !sc.reference_only;
    if (needs_run || kv.contains("a")) sc.params = params_from(kv);
    const char* axes[] = {"x0", "y0", "z0"};
    for (int j = 0; j < 3; ++j) {
      if (const auto v = kv.find(axes[j])) {
        sc.initial[j] = parse_complex(*v, axes[j]);
      } else if (needs_run) {
        kv.require(axes[j]);
      }
    }
    if (needs_run || kv.contains("steps")) sc.steps = parse_count(kv.require("steps"), "steps");
    if (needs_run && sc.steps < 1) throw ParseError("steps", std::to_string(sc.steps), "steps must be positive");
    if (const auto v = kv.find("stride")) sc.stride = parse_count(*v, "stride");
    if (sc.steps > 0) sc.stride = std::clamp<std::int64_t>(sc.stride, 1, sc.steps);
    if (const auto v = kv.find("tolerance")) sc.tolerance = parse_real(*v, "tolerance");

    if (const auto v = kv.find("expected")) {
      sc.expected_text = *v;
      sc.expected = parse_expected(*v);
    } else if (needs_run) {
      kv.require("expected");
    }
    if (const auto v = kv.find("stated_fixed_point")) sc.stated_fixed_point = parse_state(*v, "stated_fixed_point");
    if (const auto v = kv.find("ensemble")) {
      std::string_view rest = *v;
      while (!trim(rest).empty()) {
        const auto semi = rest.find(';');
        sc.ensemble.push_back(parse_state(rest.substr(0, semi), "ensemble"));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
    }
    if (sc.expected && sc.expected->kind == ExpectedLabel::Kind::coexisting && sc.ensemble.empty()) {
      throw ParseError("expected", sc.expected_text, "coexisting(n) needs an ensemble");
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<Scenario> load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open suite file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str(), path.stem().string());
}

const char* to_string(Status s) {
  switch (s) {
    case Status::match: return "match";
    case Status::mismatch: return "mismatch";
    case Status::warning: return "warning";
    case Status::error: return "error";
    case Status::skipped: return "skipped";
  }
  return "error";
}

bool matches(const ExpectedLabel& expected, const RegimeLabel& computed, double tolerance,
             std::optional<double>* distance) {
  using K = ExpectedLabel::Kind;
  const auto sink_ok = [&] {
    if (!expected.target) return true;
    if (!computed.target) return false;
    const double d = max_distance<double>(*computed.target, *expected.target);
    if (distance) *distance = d;
    return d <= tolerance;
  };
  switch (expected.kind) {
    case K::converges_to: {
      const bool ok = sink_ok();
      return computed.kind == RegimeKind::converges_to && ok;
    }
    case K::transient_chaos: {
      const bool ok = sink_ok();
      return computed.kind == RegimeKind::transient_chaos && ok;
    }
    case K::periodic:
      return computed.kind == RegimeKind::periodic && (!expected.period || *expected.period == computed.period);
    case K::quasi_periodic: return computed.kind == RegimeKind::quasi_periodic;
    case K::chaotic: return computed.kind == RegimeKind::chaotic;
    case K::divergent: return computed.kind == RegimeKind::divergent;
    case K::high_period:
      return (computed.kind == RegimeKind::periodic && computed.period >= 2) ||
             (computed.kind == RegimeKind::quasi_periodic && computed.evidence.period_exceeds_max);
    case K::coexisting: return false;
  }
  return false;
}

std::optional<std::string> check_stated_fixed_point(const SystemParamsd& params, const State3d& stated,
                                                    double tolerance) {
  const double residual = fixed_point_residual(params, stated);
  if (residual < 1e-9 * (1 + max_modulus<double>(stated))) return std::nullopt;
  const auto points = fixed_points(params);
  double nearest = INFINITY;
  std::size_t which = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = max_distance<double>(points[i], stated);
    if (d < nearest) nearest = d, which = i;
  }
  if (nearest <= tolerance) return std::nullopt;

  std::string msg = "stated fixed point " + format_state(stated) + " is not an equilibrium of the map (one-step residual " +
                    format_real(residual) + "; nearest equilibrium " + format_state(points[which]) +
                    " at distance " + format_real(nearest) + ")";
  // Compare against the (±√b√(r+1), ±√b√(r+1), r+1) pattern.
  const Complexd z1 = params.r + 1.0;
  const Complexd s1 = principal_sqrt(params.b) * principal_sqrt(z1);
  const State3d plus(s1, s1, z1), minus(-s1, -s1, z1);
  const auto close = [&](const State3d& p) {
    return max_distance<double>(p, stated) <= tolerance || max_distance<double>(apply_symmetry(p), stated) <= tolerance;
  };
  if (close(plus) || close(minus)) msg += "; it matches (±√b√(r+1), ±√b√(r+1), r+1) instead";
  return msg;
}

ScenarioResult run_scenario(const Scenario& sc, const SuiteOptions& opt, Orbit* orbit_out) {
  ScenarioResult res;
  res.scenario = sc;
  if (sc.reference_only) {
    res.status = Status::skipped;
    res.detail = "reference only";
    return res;
  }
  try {
    if (sc.stated_fixed_point) {
      if (auto w = check_stated_fixed_point(sc.params, *sc.stated_fixed_point, sc.tolerance)) res.warnings.push_back(*w);
    }
    OrbitConfig cfg;
    cfg.initial = sc.initial;
    cfg.steps = sc.steps;
    cfg.record_stride = sc.stride;
    const ExpectedLabel& expected = *sc.expected;
    bool ok = false;
    if (!sc.ensemble.empty()) {
      std::vector<State3d> members{sc.initial};
      members.insert(members.end(), sc.ensemble.begin(), sc.ensemble.end());
      res.ensemble = coexisting_attractors(sc.params, members, cfg, opt.tolerances, opt.lyapunov);
      res.computed = res.ensemble->labels.front();
      const int groups = static_cast<int>(res.ensemble->groups.size());
      ok = expected.kind == ExpectedLabel::Kind::coexisting
               ? groups == expected.groups
               : matches(expected, *res.computed, sc.tolerance, &res.target_distance);
      res.detail = std::to_string(groups) + " attractor group(s) across " + std::to_string(members.size()) + " members";
      if (orbit_out) *orbit_out = iterate(sc.params, cfg);
    } else {
      Analysis a = analyze(sc.params, cfg, opt.tolerances, opt.lyapunov);
      res.computed = a.label;
      res.lyapunov = std::move(a.lyapunov);
      ok = matches(expected, a.label, sc.tolerance, &res.target_distance);
      if (orbit_out) *orbit_out = std::move(a.orbit);
    }
    if (ok) {
      res.status = Status::match;
    } else {
      res.status = sc.basin_sensitive ? Status::warning : Status::mismatch;
      std::string why = "expected " + sc.expected_text + ", computed " + to_string(*res.computed);
      if (res.target_distance) why += " (target distance " + format_real(*res.target_distance) + ")";
      if (sc.basin_sensitive) why += "; initial state fixed by the suite, basin sensitive";
      res.detail = res.detail.empty() ? why : res.detail + "; " + why;
    }
  } catch (const std::exception& e) {
    res.status = Status::error;
    res.detail = e.what();
  }
  return res;
}

ReproductionReport run_suite(const std::vector<Scenario>& scenarios, std::string suite_name,
                             const SuiteOptions& opt) {
  ReproductionReport rep;
  rep.suite = std::move(suite_name);
  rep.tolerances = opt.tolerances;
  rep.results.resize(scenarios.size());
  const bool write = !opt.out_dir.empty();
  if (write) std::filesystem::create_directories(opt.out_dir / "orbits");

  const std::size_t workers = opt.workers ? opt.workers : worker_count(scenarios.size());
  parallel_for(scenarios.size(), workers, [&](std::size_t i) {
    Orbit orbit;
    ScenarioResult res = run_scenario(scenarios[i], opt, write ? &orbit : nullptr);
    if (write && !orbit.samples.empty()) {
      res.orbit_csv = "orbits/" + res.scenario.id + ".csv";
      std::ofstream csv(opt.out_dir / res.orbit_csv);
      write_orbit_csv(csv, orbit);
    }
    rep.results[i] = std::move(res);
  });

  std::sort(rep.results.begin(), rep.results.end(),
            [](const ScenarioResult& u, const ScenarioResult& v) { return u.scenario.id < v.scenario.id; });
  for (const auto& r : rep.results) {
    switch (r.status) {
      case Status::match: ++rep.matched; break;
      case Status::mismatch: ++rep.mismatched; break;
      case Status::warning: ++rep.warned; break;
      case Status::error: ++rep.errored; break;
      case Status::skipped: ++rep.skipped; break;
    }
  }
  if (write) {
    std::ofstream(opt.out_dir / "report.json") << report_json(rep).dump(2) << '\n';
    std::ofstream(opt.out_dir / "summary.txt") << summary_text(rep, utc_timestamp());
  }
  return rep;
}

ReproductionReport run_suite(const std::filesystem::path& suite_file, const SuiteOptions& opt) {
  return run_suite(load_suite(suite_file), suite_file.stem().string(), opt);
}

std::vector<State3d> ball_ensemble(std::size_t n, std::uint64_t seed, double radius) {
  std::mt19937_64 gen(seed);
  const auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<State3d> out(n);
  for (auto& s : out) {
    for (int i = 0; i < 3; ++i) {
      const double rho = radius * std::sqrt(uniform());
      const double theta = 2 * std::numbers::pi * uniform();
      s[i] = std::polar(rho, theta);
    }
  }
  return out;
}

PlotMode parse_plot_mode(std::string_view text) {
  if (text == "complex_plane") return PlotMode::complex_plane;
  if (text == "components") return PlotMode::components;
  if (text == "three_d") return PlotMode::three_d;
  throw ParseError("plot", std::string(text), "expected complex_plane, components or three_d");
}

std::vector<std::filesystem::path> export_plot_data(const Orbit& orbit, PlotMode mode,
                                                    const std::filesystem::path& stem) {
  if (orbit.samples.empty()) throw InsufficientDataError("orbit has no samples");
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::vector<std::filesystem::path> files;
  const auto open = [&](const std::string& suffix) {
    files.push_back(stem.string() + suffix);
    return std::ofstream(files.back());
  };
  const char* names[] = {"x", "y", "z"};
  switch (mode) {
    case PlotMode::complex_plane:
      for (int v = 0; v < 3; ++v) {
        auto out = open(std::string("_") + names[v] + "_plane.csv");
        out << "re,im\n";
        for (const auto& s : orbit.samples) {
          out << format_real(s.state[v].real()) << ',' << format_real(s.state[v].imag()) << '\n';
        }
      }
      break;
    case PlotMode::components:
      for (int v = 0; v < 3; ++v) {
        auto out = open(std::string("_") + names[v] + ".csv");
        out << "k,re,im\n";
        for (const auto& s : orbit.samples) {
          out << s.k << ',' << format_real(s.state[v].real()) << ',' << format_real(s.state[v].imag()) << '\n';
        }
      }
      break;
    case PlotMode::three_d: {
      auto re = open("_re.csv");
      re << "re_x,re_y,re_z\n";
      for (const auto& s : orbit.samples) {
        re << format_real(s.state[0].real()) << ',' << format_real(s.state[1].real()) << ','
           << format_real(s.state[2].real()) << '\n';
      }
      re.close();
      auto im = open("_im.csv");
      im << "im_x,im_y,im_z\n";
      for (const auto& s : orbit.samples) {
        im << format_real(s.state[0].imag()) << ',' << format_real(s.state[1].imag()) << ','
           << format_real(s.state[2].imag()) << '\n';
      }
      break;
    }
  }
  return files;
}

}  // namespace ldcx
