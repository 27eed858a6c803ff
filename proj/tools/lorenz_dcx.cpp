// lorenz-dcx: command-line front end for the discrete complex Lorenz map.
//
// Exit codes: 0 ok, 1 usage, 2 reproduce mismatch, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "lorenz_dcx/classifier.hpp"
#include "lorenz_dcx/equilibria.hpp"
#include "lorenz_dcx/experiments.hpp"
#include "lorenz_dcx/lyapunov.hpp"
#include "lorenz_dcx/map.hpp"
#include "lorenz_dcx/parse.hpp"
#include "lorenz_dcx/report.hpp"

namespace fs = std::filesystem;
using namespace ldcx;

namespace {

constexpr int kOk = 0, kUsage = 1, kMismatch = 2, kNumeric = 3;

struct Flags {
  std::string a = "10", b = "8/3", r = "28", dt = "0.0005";
  std::string x0 = "0.1+0.2i", y0 = "0.3+0.4i", z0 = "1+2i";
  std::int64_t steps = 2000000;
  std::int64_t stride = 1000;
  std::string out;
  std::string format = "json";
  // Subcommand extras.
  std::string suite;
  std::string plot;
  std::string members;
  std::size_t random_members = 0;
  std::uint64_t seed = 1;
  std::int64_t window = 0;
  int fixed_point = 2;
};

void add_params(CLI::App* cmd, Flags& f) {
  cmd->add_option("--a", f.a, "Prandtl-like parameter a (complex literal)")->capture_default_str();
  cmd->add_option("--b", f.b, "Geometric parameter b (complex literal, e.g. 8/3)")->capture_default_str();
  cmd->add_option("--r", f.r, "Control parameter r (complex literal, e.g. 4+9i)")->capture_default_str();
  cmd->add_option("--dt", f.dt, "Step size (positive real)")->capture_default_str();
}

void add_orbit(CLI::App* cmd, Flags& f) {
  add_params(cmd, f);
  cmd->add_option("--x0", f.x0, "Initial x")->capture_default_str();
  cmd->add_option("--y0", f.y0, "Initial y")->capture_default_str();
  cmd->add_option("--z0", f.z0, "Initial z")->capture_default_str();
  cmd->add_option("--steps", f.steps, "Number of map iterations")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--stride", f.stride, "Record every stride-th state")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_output(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out", f.out, "Output directory (default ./out/<subcommand>/<timestamp>)");
  cmd->add_option("--format", f.format, "Stdout format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

SystemParamsd params_of(const Flags& f) {
  return parse_params("a=" + f.a + "\nb=" + f.b + "\nr=" + f.r + "\ndt=" + f.dt);
}

OrbitConfig config_of(const Flags& f) {
  OrbitConfig cfg;
  cfg.initial = State3d(parse_complex(f.x0, "x0"), parse_complex(f.y0, "y0"), parse_complex(f.z0, "z0"));
  cfg.steps = f.steps;
  cfg.record_stride = std::min(f.stride, f.steps);
  return cfg;
}

fs::path out_dir(const Flags& f, const std::string& sub) {
  const fs::path dir = f.out.empty() ? fs::path("out") / sub / utc_timestamp() : fs::path(f.out);
  fs::create_directories(dir);
  return dir;
}

void emit(const json& doc, const fs::path& dir, const std::string& name) {
  const std::string text = doc.dump(2);
  std::cout << text << '\n';
  if (!dir.empty()) std::ofstream(dir / (name + ".json")) << text << '\n';
}

std::string csv_complex(const Complexd& z) { return format_real(z.real()) + "," + format_real(z.imag()); }

int cmd_simulate(const Flags& f) {
  const auto params = params_of(f);
  const auto cfg = config_of(f);
  const Orbit orbit = iterate(params, cfg);
  const fs::path dir = out_dir(f, "simulate");
  {
    std::ofstream csv(dir / "orbit.csv");
    write_orbit_csv(csv, orbit);
  }
  json files = json::array({"orbit.csv"});
  if (!f.plot.empty()) {
    for (const auto& p : export_plot_data(orbit, parse_plot_mode(f.plot), dir / "plot")) {
      files.push_back(p.filename().string());
    }
  }
  const json doc = {{"params", params_json(params)},
                    {"initial", state_json(cfg.initial)},
                    {"steps", cfg.steps},
                    {"stride", cfg.record_stride},
                    {"terminated_by", orbit.diverged() ? "diverged" : "completed"},
                    {"divergence_step", orbit.diverged() ? json(orbit.divergence_step) : json(nullptr)},
                    {"steps_completed", orbit.steps_completed},
                    {"samples", orbit.samples.size()},
                    {"final_state", state_json(orbit.final_state)},
                    {"files", files}};
  if (f.format == "json") {
    emit(doc, dir, "simulate");
  } else {
    std::cout << "k,re_x,im_x,re_y,im_y,re_z,im_z\n" << orbit.steps_completed;
    for (int i = 0; i < 3; ++i) std::cout << ',' << csv_complex(orbit.final_state[i]);
    std::cout << '\n';
  }
  std::cerr << "wrote " << (dir / "orbit.csv").string() << '\n';
  if (orbit.diverged()) {
    std::cerr << "error: orbit diverged at step " << orbit.divergence_step << " (|component| > "
              << cfg.divergence_threshold << ")\n";
    return kNumeric;
  }
  return kOk;
}

int cmd_fixed_points(const Flags& f) {
  const auto params = params_of(f);
  const auto points = fixed_points(params);
  const fs::path dir = f.out.empty() ? fs::path() : out_dir(f, "fixed-points");
  if (f.format == "csv") {
    std::cout << "index,re_x,im_x,re_y,im_y,re_z,im_z,residual\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::cout << i;
      for (int c = 0; c < 3; ++c) std::cout << ',' << csv_complex(points[i][c]);
      std::cout << ',' << format_real(fixed_point_residual(params, points[i])) << '\n';
    }
    return kOk;
  }
  json list = json::array();
  for (const auto& p : points) list.push_back({{"point", state_json(p)}, {"residual", fixed_point_residual(params, p)}});
  json condition = nullptr;
  try {
    const auto c = convergence_condition(params);
    condition = {{"r_modulus", c.r_modulus}, {"bound", c.bound}, {"holds", c.holds}};
  } catch (const DegenerateBoundError&) {
  }
  emit({{"params", params_json(params)}, {"fixed_points", list}, {"convergence_condition", condition}}, dir,
       "fixed-points");
  return kOk;
}

int cmd_eigen(const Flags& f) {
  const auto params = params_of(f);
  if (f.fixed_point < 0 || f.fixed_point > 2) throw ParseError("fixed-point", std::to_string(f.fixed_point), "expected 0, 1 or 2");
  const auto rep = classify_equilibrium(params, fixed_points(params)[static_cast<std::size_t>(f.fixed_point)]);
  const fs::path dir = f.out.empty() ? fs::path() : out_dir(f, "eigen");
  if (f.format == "csv") {
    std::cout << "matrix,re,im,modulus\n";
    for (const auto& l : rep.eigenvalues) std::cout << "displayed," << csv_complex(l) << ',' << format_real(std::abs(l)) << '\n';
    for (const auto& l : rep.map_eigenvalues) std::cout << "map," << csv_complex(l) << ',' << format_real(std::abs(l)) << '\n';
    return kOk;
  }
  json doc = {{"params", params_json(params)}, {"fixed_point_index", f.fixed_point}};
  doc.update(equilibrium_json(rep));
  emit(doc, dir, "eigen");
  return kOk;
}

int cmd_lyapunov(const Flags& f) {
  const auto params = params_of(f);
  const auto cfg = config_of(f);
  LyapunovSettings settings;
  settings.window = f.window;
  const auto est = spectrum(params, cfg, settings);
  const fs::path dir = out_dir(f, "lyapunov");
  {
    std::ofstream csv(dir / "finite_time_series.csv");
    write_series_csv(csv, est);
  }
  if (f.format == "csv") {
    std::cout << "index,exponent\n";
    for (std::size_t i = 0; i < est.exponents.size(); ++i) std::cout << i << ',' << format_real(est.exponents[i]) << '\n';
    return kOk;
  }
  json doc = {{"params", params_json(params)}, {"initial", state_json(cfg.initial)}, {"steps", cfg.steps}};
  doc.update(lyapunov_json(est));
  doc["finite_time_series"] = "finite_time_series.csv";
  emit(doc, dir, "lyapunov");
  return kOk;
}

int cmd_classify(const Flags& f) {
  const auto params = params_of(f);
  const auto cfg = config_of(f);
  const ClassifierTolerances tol;
  const Analysis a = analyze(params, cfg, tol);
  const fs::path dir = out_dir(f, "classify");
  {
    std::ofstream csv(dir / "orbit.csv");
    write_orbit_csv(csv, a.orbit);
  }
  if (a.lyapunov) {
    std::ofstream csv(dir / "finite_time_series.csv");
    write_series_csv(csv, *a.lyapunov);
  }
  if (f.format == "csv") {
    std::cout << "kind,label\n" << to_string(a.label.kind) << ",\"" << to_string(a.label) << "\"\n";
    return kOk;
  }
  emit({{"params", params_json(params)},
        {"initial", state_json(cfg.initial)},
        {"steps", cfg.steps},
        {"label", label_json(a.label)},
        {"evidence", evidence_json(a.label.evidence)},
        {"lyapunov", a.lyapunov ? lyapunov_json(*a.lyapunov) : json(nullptr)},
        {"tolerances", tolerances_json(tol)}},
       dir, "classify");
  return kOk;
}

std::vector<State3d> parse_members(const std::string& text) {
  std::vector<State3d> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = rest.substr(0, semi);
    if (item.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse_state(item, "members"));
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
  }
  return out;
}

int cmd_ensemble(const Flags& f) {
  const auto params = params_of(f);
  const auto cfg = config_of(f);
  auto members = parse_members(f.members);
  const auto drawn = ball_ensemble(f.random_members, f.seed);
  members.insert(members.end(), drawn.begin(), drawn.end());
  if (members.size() < 2) throw ParseError("members", f.members, "an ensemble needs at least two initial states");
  const ClassifierTolerances tol;
  const auto ens = coexisting_attractors(params, members, cfg, tol);
  const fs::path dir = out_dir(f, "ensemble");
  if (f.format == "csv") {
    std::cout << "member,group,label\n";
    for (std::size_t g = 0; g < ens.groups.size(); ++g) {
      for (const auto m : ens.groups[g].members) std::cout << m << ',' << g << ",\"" << to_string(ens.labels[m]) << "\"\n";
    }
    return kOk;
  }
  json initials = json::array();
  for (const auto& s : members) initials.push_back(state_json(s));
  json doc = {{"params", params_json(params)}, {"steps", cfg.steps}, {"initials", initials}};
  doc.update(ensemble_json(ens));
  doc["tolerances"] = tolerances_json(tol);
  emit(doc, dir, "ensemble");
  return kOk;
}

int cmd_reproduce(const Flags& f) {
  SuiteOptions opt;
  opt.out_dir = out_dir(f, "reproduce");
  const auto rep = run_suite(fs::path(f.suite), opt);
  if (f.format == "json") {
    std::cout << report_json(rep)["summary"].dump(2) << '\n';
  }
  std::ifstream summary(opt.out_dir / "summary.txt");
  std::cerr << summary.rdbuf();
  std::cerr << "report: " << (opt.out_dir / "report.json").string() << '\n';
  return rep.ok() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete complex Lorenz map: orbits, equilibria, Lyapunov spectra and regime classification",
               "lorenz-dcx"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "Iterate the map and write the recorded orbit as CSV");
  add_orbit(simulate, f);
  add_output(simulate, f);
  simulate->add_option("--plot", f.plot, "Also export plot data")->check(CLI::IsMember({"complex_plane", "components", "three_d"}));

  auto* fixed = app.add_subcommand("fixed-points", "Print the three equilibria");
  add_params(fixed, f);
  add_output(fixed, f);

  auto* eigen = app.add_subcommand("eigen", "Spectrum and stability of one equilibrium");
  add_params(eigen, f);
  add_output(eigen, f);
  eigen->add_option("--fixed-point", f.fixed_point, "Equilibrium index: 0 origin, 1 minus branch, 2 plus branch")
      ->capture_default_str();

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum of the real 6-dimensional lift");
  add_orbit(lyap, f);
  add_output(lyap, f);
  lyap->add_option("--window", f.window, "Finite-time window in steps (0: automatic)")->capture_default_str();

  auto* classify_cmd = app.add_subcommand("classify", "Classify the regime of one orbit");
  add_orbit(classify_cmd, f);
  add_output(classify_cmd, f);

  auto* ensemble = app.add_subcommand("ensemble", "Group the attractors reached from several initial states");
  add_orbit(ensemble, f);
  add_output(ensemble, f);
  ensemble->add_option("--members", f.members, "Initial states separated by ';', e.g. \"(1,0,0);(-1,0,0)\"");
  ensemble->add_option("--random", f.random_members, "Additional states drawn from the unit ball");
  ensemble->add_option("--seed", f.seed, "Seed for --random")->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Run a scenario suite and compare against expected labels");
  reproduce->add_option("--suite", f.suite, "Suite file")->required()->check(CLI::ExistingFile);
  add_output(reproduce, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(f);
    if (*fixed) return cmd_fixed_points(f);
    if (*eigen) return cmd_eigen(f);
    if (*lyap) return cmd_lyapunov(f);
    if (*classify_cmd) return cmd_classify(f);
    if (*ensemble) return cmd_ensemble(f);
    if (*reproduce) return cmd_reproduce(f);
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DivergentOrbitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
