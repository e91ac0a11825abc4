// hypercross: simulate, estimate constants, draw the figure, run experiments
// and the acceptance suite.
//
// Exit codes: 0 pass, 1 statistical failure, 2 configuration error,
// 3 resource cap (tuple budget or unbounded zero cell).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "hypercross/acceptance.hpp"
#include "hypercross/constants.hpp"
#include "hypercross/errors.hpp"
#include "hypercross/experiments.hpp"
#include "hypercross/figure.hpp"
#include "hypercross/io.hpp"
#include "hypercross/polytope.hpp"
#include "hypercross/samplers.hpp"

using namespace hypercross;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;

struct CommonFlags {
  std::string config_path;
  int dim = 0;
  double intensity = 0.0;
  double radius_exponent = 0.0;
  double r_min = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;
  std::string out;
  std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* app, CommonFlags& f) {
  f.opts["config"] = app->add_option("--config", f.config_path, "key=value config file");
  f.opts["dim"] = app->add_option("--dim", f.dim, "ambient dimension d");
  f.opts["intensity"] = app->add_option("--intensity", f.intensity, "hyperplane intensity t");
  f.opts["radius-exponent"] = app->add_option(
      "--radius-exponent", f.radius_exponent, "R = t^-e (default d/(d+1))");
  f.opts["rmin"] = app->add_option("--rmin", f.r_min, "truncation radius r_min");
  f.opts["reps"] = app->add_option("--reps", f.reps, "replications");
  f.opts["seed"] = app->add_option("--seed", f.seed, "master seed");
  f.opts["cap"] = app->add_option("--cap", f.cap, "max C(N, d) per realisation");
  f.opts["out"] = app->add_option("--out", f.out, "output path or prefix");
}

bool given(const CommonFlags& f, const char* name) {
  return f.opts.at(name)->count() > 0;
}

// flag > HYPERCROSS_SEED > config file > default
SimConfig resolve(CommonFlags& f, SimConfig c = {}) {
  std::map<std::string, std::string> extras;
  if (given(f, "config")) c = load_config_file(f.config_path, c, &extras);
  for (const auto& [key, value] : extras) {
    if (key != "out") throw ConfigError("config: unknown key '" + key + "'");
    if (!given(f, "out")) f.out = value;
  }
  if (const char* env = std::getenv("HYPERCROSS_SEED")) {
    try {
      c.master_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("HYPERCROSS_SEED is not an unsigned integer");
    }
  }
  if (given(f, "dim")) c.dim = f.dim;
  if (given(f, "intensity")) c.intensity = f.intensity;
  if (given(f, "radius-exponent")) c.radius_exponent = f.radius_exponent;
  if (given(f, "rmin")) c.r_min = f.r_min;
  if (given(f, "reps")) c.reps = f.reps;
  if (given(f, "seed")) c.master_seed = f.seed;
  if (given(f, "cap")) c.tuple_cap = f.cap;
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

void apply_thread_env() {
  if (const char* env = std::getenv("HYPERCROSS_THREADS")) {
    const int n = std::atoi(env);
    if (n < 1) throw ConfigError("HYPERCROSS_THREADS must be a positive integer");
    omp_set_num_threads(n);
  }
}

int cmd_simulate(CommonFlags& f, const std::string& process, std::int64_t rep) {
  const SimConfig c = resolve(f);
  Rng rng(c.master_seed, static_cast<std::uint64_t>(rep));
  const double radius = c.radius();
  json report;
  std::ostringstream csv;
  if (process == "planes" || process == "xi") {
    HyperplaneSample h = sample_poisson_hyperplanes(c.intensity, radius, c.dim, rng);
    if (process == "planes") {
      report = to_json(h);
      write_csv(csv, h);
    } else {
      PointSample s = intersection_process(h, c.tuple_cap);
      s.meta.intensity = c.intensity;
      s.meta.seed = c.master_seed;
      s.meta.stream = static_cast<std::uint64_t>(rep);
      report = to_json(s);
      write_csv(csv, s);
    }
  } else if (process == "zeta") {
    const double c_d = working_cd(c.dim, c.master_seed);
    const PointSample s = sample_limit_process(c.dim, c_d, c.r_min, rng);
    report = to_json(s);
    write_csv(csv, s);
  } else if (process == "zero-cell") {
    const double gamma = gamma_d(c.dim, working_cd(c.dim, c.master_seed));
    report = to_json(sample_zero_cell(c.dim, gamma, rng));
    report["gamma"] = gamma;
  } else {
    throw ConfigError("unknown process '" + process + "'");
  }
  report["reportVersion"] = kReportVersion;
  report["buildId"] = build_id();
  report["configHash"] = hex64(fnv1a(c.canonical()));
  if (f.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_text_file(f.out + ".json", report.dump(2) + "\n");
    if (!csv.str().empty()) write_text_file(f.out + ".csv", csv.str());
  }
  return kExitPass;
}

int cmd_estimate_cd(CommonFlags& f, std::int64_t samples) {
  const SimConfig c = resolve(f);
  const EstimateWithCI e = estimate_cd(c.dim, samples, c.master_seed);
  json j = {{"reportVersion", kReportVersion},
            {"buildId", build_id()},
            {"dim", c.dim},
            {"C_d", e.value},
            {"stderr", e.std_error},
            {"ci99", {e.lower(), e.upper()}},
            {"gamma_d", gamma_d(c.dim, e.value)},
            {"n", e.n},
            {"seed", e.seed}};
  if (c.dim == 2) j["exact"] = exact_c2();
  emit(f.out, j.dump(2) + "\n");
  return kExitPass;
}

int cmd_figure(CommonFlags& f, const FigureOptions& opt) {
  SimConfig base;
  base.intensity = 30000.0;
  const SimConfig c = resolve(f, base);
  const std::string path = f.out.empty() ? "figure.svg" : f.out;
  const FigureSummary s = render_figure(c, path, opt);
  std::cerr << "wrote " << path << ": " << s.lines << " lines, " << s.points
            << " points, R=" << s.radius << '\n';
  return kExitPass;
}

int cmd_experiment(CommonFlags& f, ExperimentSpec spec) {
  spec.config = resolve(f);
  spec.output_path = f.out;
  const RunReport r = run_experiment(spec);
  if (f.out.empty()) std::cout << r.to_json().dump(2) << '\n';
  for (const auto& c : r.checks)
    std::cerr << (c.passed ? "pass  " : "FAIL  ") << c.name
              << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
  for (const auto& t : r.tests)
    std::cerr << (t.passed() ? "pass  " : "FAIL  ") << t.name << "  p=" << t.p_value << '\n';
  return r.passed() ? kExitPass : kExitFail;
}

int cmd_verify(CommonFlags& f, const std::string& level, const std::vector<int>& only) {
  const SimConfig c = resolve(f);
  const VerifyReport r = run_verify(parse_verify_level(level), c.master_seed, only,
                                    [](const CriterionResult& res) {
                                      std::cout << summary_line(res) << std::endl;
                                    });
  if (!f.out.empty()) {
    write_text_file(f.out + ".json", r.to_json().dump(2) + "\n");
    write_text_file(f.out + ".timing.json", r.timing_json().dump(2) + "\n");
  }
  return r.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection points of Poisson hyperplanes: simulation and checks"};
  app.require_subcommand(1);

  CommonFlags sim_f, cd_f, fig_f, ver_f, exp_f;

  auto* sim = app.add_subcommand("simulate", "draw one realisation");
  add_common(sim, sim_f);
  std::string process = "xi";
  std::int64_t rep = 0;
  sim->add_option("--process", process, "planes | xi | zeta | zero-cell")
      ->check(CLI::IsMember({"planes", "xi", "zeta", "zero-cell"}));
  sim->add_option("--rep", rep, "replication index (RNG stream)");

  auto* cd = app.add_subcommand("estimate-cd", "Monte Carlo estimate of C_d");
  add_common(cd, cd_f);
  std::int64_t cd_samples = 1'000'000;
  cd->add_option("--samples", cd_samples, "Monte Carlo samples");

  auto* fig = app.add_subcommand("figure", "SVG of one planar realisation at nested scales");
  add_common(fig, fig_f);
  FigureOptions fig_opt;
  fig->add_option("--zoom", fig_opt.zoom, "ratio of consecutive panel widths");
  fig->add_option("--panels", fig_opt.panels, "number of panels");
  fig->add_option("--half-width", fig_opt.outer_half_width, "half-width of the first panel");

  auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(ver, ver_f);
  std::string level = "quick";
  std::vector<int> only;
  ver->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  ver->add_option("--only", only, "criterion ids to run");

  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  add_common(exp, exp_f);
  ExperimentSpec spec;
  exp->add_option("name", spec.name, "experiment name")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  exp->add_option("--samples", spec.samples, "Monte Carlo size");
  exp->add_option("--k", spec.k, "flat dimension");
  exp->add_option("--rmax", spec.r_max, "outer annulus radius");
  exp->add_flag("--binomial", spec.binomial, "binomial hyperplanes");
  exp->add_option("--cd-scale", spec.c_d_scale, "multiply C_d (sensitivity runs)");
  exp->add_option("--edges", spec.edges, "annulus edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  try {
    apply_thread_env();
    if (*sim) return cmd_simulate(sim_f, process, rep);
    if (*cd) return cmd_estimate_cd(cd_f, cd_samples);
    if (*fig) return cmd_figure(fig_f, fig_opt);
    if (*ver) return cmd_verify(ver_f, level, only);
    if (*exp) return cmd_experiment(exp_f, spec);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TupleBudgetExceeded& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const Unbounded& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}
