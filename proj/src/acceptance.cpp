#include "hypercross/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "hypercross/constants.hpp"
#include "hypercross/errors.hpp"
#include "hypercross/experiments.hpp"
#include "hypercross/io.hpp"

namespace hypercross {

using nlohmann::json;

VerifyLevel parse_verify_level(const std::string& s) {
  if (s == "quick") return VerifyLevel::kQuick;
  if (s == "full") return VerifyLevel::kFull;
  throw ConfigError("verify level must be 'quick' or 'full'");
}

std::string to_string(VerifyLevel level) {
  return level == VerifyLevel::kQuick ? "quick" : "full";
}

bool VerifyReport::passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return true;
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : criteria) {
    list.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed},
                    {"attempts", c.attempts},
                    {"seeds", c.seeds},
                    {"detail", c.detail}});
  }
  return {{"reportVersion", kReportVersion},
          {"buildId", build_id()},
          {"level", to_string(level)},
          {"seed", seed},
          {"criteria", std::move(list)},
          {"verdict", passed() ? "pass" : "fail"}};
}

json VerifyReport::timing_json() const {
  json t = json::object();
  for (const auto& c : criteria) t[std::to_string(c.id)] = c.seconds;
  return {{"level", to_string(level)}, {"wallSeconds", t}};
}

std::string summary_line(const CriterionResult& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  %2d  %-58s (attempts %d, %.1f s)",
                c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), c.attempts,
                c.seconds);
  return buf;
}

namespace {

struct Outcome {
  bool passed = false;
  json detail;
};

bool quick(VerifyLevel l) { return l == VerifyLevel::kQuick; }

SimConfig base_config(int dim, double t, double r_min, std::int64_t reps,
                      std::uint64_t seed) {
  SimConfig c;
  c.dim = dim;
  c.intensity = t;
  c.r_min = r_min;
  c.reps = reps;
  c.master_seed = seed;
  return c;
}

Outcome from_reports(std::vector<RunReport> reports, json extra = json::object()) {
  Outcome o;
  o.passed = true;
  json list = json::array();
  for (const auto& r : reports) {
    o.passed &= r.passed();
    list.push_back(r.to_json());
  }
  o.detail = {{"reports", std::move(list)}};
  if (!extra.empty()) o.detail["extra"] = std::move(extra);
  return o;
}

Outcome c1_constant(VerifyLevel l, std::uint64_t seed) {
  const std::int64_t n = quick(l) ? 100'000 : 1'000'000;
  const auto e = estimate_cd(2, n, seed);
  const double rel = std::fabs(e.value / exact_c2() - 1.0);
  return {rel < 0.01,
          {{"estimate", e.value}, {"stderr", e.std_error}, {"n", e.n},
           {"target", exact_c2()}, {"relativeError", rel}, {"tolerance", 0.01}}};
}

Outcome c2_counts(VerifyLevel l, std::uint64_t seed) {
  std::vector<RunReport> reports;
  for (int d : {2, 3}) {
    ExperimentSpec s;
    s.name = "scaling";
    s.config = base_config(d, 1000.0, 0.1, quick(l) ? 1000 : 10'000, derive_seed(seed, d));
    reports.push_back(run_experiment(s));
  }
  return from_reports(std::move(reports));
}

Outcome c3_lemma31(VerifyLevel l, std::uint64_t seed) {
  std::vector<RunReport> reports;
  const std::pair<int, int> cases[] = {{2, 1}, {3, 1}, {3, 2}, {4, 2}};
  for (auto [d, k] : cases) {
    ExperimentSpec s;
    s.name = "lemma31";
    s.config = base_config(d, 1000.0, 0.1, 1, derive_seed(seed, 10 * d + k));
    s.k = k;
    s.samples = quick(l) ? 20'000 : 100'000;
    reports.push_back(run_experiment(s));
  }
  return from_reports(std::move(reports));
}

Outcome c4_lemma32(VerifyLevel l, std::uint64_t seed) {
  std::vector<RunReport> reports;
  for (int d : {2, 3}) {
    ExperimentSpec s;
    s.name = "lemma32";
    s.config = base_config(d, 1000.0, 0.1, 1, derive_seed(seed, d));
    s.k = 0;
    s.samples = quick(l) ? 200'000 : 10'000'000;
    reports.push_back(run_experiment(s));
  }
  return from_reports(std::move(reports));
}

Outcome c5_intensity(VerifyLevel l, std::uint64_t seed) {
  const std::int64_t reps = quick(l) ? 200 : 2000;
  ExperimentSpec s;
  s.name = "intensity";
  s.config = base_config(2, 1e5, 0.1, reps, derive_seed(seed, 1));
  s.edges = {0.1, 0.2, 0.4, 0.8};
  RunReport r = run_experiment(s);

  const std::vector<double> ts = {1e3, 1e4, 1e5};
  const std::vector<double> tv_edges = {0.2, 0.4, 0.8};
  const auto tv = intensity_tv_sweep(2, ts, reps, tv_edges, derive_seed(seed, 2));
  bool decreasing = true;
  for (std::size_t i = 1; i < tv.size(); ++i) decreasing &= tv[i] < tv[i - 1];
  Outcome o = from_reports({r}, {{"tvSweep", {{"t", ts}, {"edges", tv_edges}, {"tv", tv}}},
                                 {"tvStrictlyDecreasing", decreasing}});
  o.passed &= decreasing;
  return o;
}

Outcome limit_counts(VerifyLevel l, std::uint64_t seed, bool binomial) {
  ExperimentSpec s;
  s.name = "limit-law";
  s.config = base_config(2, 1e5, 0.2, quick(l) ? 300 : 2000, seed);
  s.r_max = 0.8;
  s.binomial = binomial;
  return from_reports({run_experiment(s)});
}

Outcome c6_limit(VerifyLevel l, std::uint64_t seed) { return limit_counts(l, seed, false); }

Outcome c7_fvector(VerifyLevel l, std::uint64_t seed) {
  std::vector<RunReport> reports;
  ExperimentSpec s2;
  s2.name = "fvector";
  s2.config = base_config(2, 1e5, 0.01, quick(l) ? 5000 : 100'000, derive_seed(seed, 2));
  reports.push_back(run_experiment(s2));
  ExperimentSpec s3;
  s3.name = "fvector";
  s3.config = base_config(3, 1e5, 0.02, quick(l) ? 2000 : 20'000, derive_seed(seed, 3));
  reports.push_back(run_experiment(s3));
  return from_reports(std::move(reports));
}

Outcome c8_duality(VerifyLevel l, std::uint64_t seed) {
  std::vector<RunReport> reports;
  for (int d : {2, 3}) {
    ExperimentSpec s;
    s.name = "duality";
    s.config = base_config(d, 1e5, d == 2 ? 0.01 : 0.02, quick(l) ? 2000 : 10'000,
                           derive_seed(seed, d));
    reports.push_back(run_experiment(s));
  }
  return from_reports(std::move(reports));
}

Outcome c9_binomial(VerifyLevel l, std::uint64_t seed) { return limit_counts(l, seed, true); }

Outcome c10_determinism(VerifyLevel, std::uint64_t seed) {
  const std::string a = run_verify(VerifyLevel::kQuick, seed).to_json().dump();
  const std::string b = run_verify(VerifyLevel::kQuick, seed).to_json().dump();
  return {a == b, {{"bytes", a.size()}, {"hashA", hex64(fnv1a(a))}, {"hashB", hex64(fnv1a(b))}}};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)(VerifyLevel, std::uint64_t);
};

const Criterion kCriteria[] = {
    {1, "constant C_2 within 1% of 4/(3 pi^2)", c1_constant},
    {2, "hyperplane count mean within 3 sigma of 2tR (d = 2, 3)", c2_counts},
    {3, "intersection-norm law, KS against analytic CDF", c3_lemma31},
    {4, "J asymptotics at ratio 0.05 and constancy above 1", c4_lemma32},
    {5, "annulus intensities and TV decreasing in t", c5_intensity},
    {6, "annulus counts: intersection vs limit process", c6_limit},
    {7, "expected f-vectors of the limit hull", c7_fvector},
    {8, "limit hull vs dual of the zero cell", c8_duality},
    {9, "annulus counts with binomial planes", c9_binomial},
    {10, "quick suite twice gives identical reports", c10_determinism},
};

}  // namespace

VerifyReport run_verify(VerifyLevel level, std::uint64_t seed,
                        const std::vector<int>& only,
                        const std::function<void(const CriterionResult&)>& progress) {
  VerifyReport report;
  report.level = level;
  report.seed = seed;
  for (const auto& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
      continue;
    if (level == VerifyLevel::kQuick && c.id == 10) continue;
    CriterionResult res;
    res.id = c.id;
    res.title = c.title;
    res.detail = json::array();
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(c.id));
    for (int attempt = 0; attempt < 2 && !res.passed; ++attempt) {
      if (attempt > 0) s = derive_seed(s, 0x7e7);
      res.seeds.push_back(s);
      ++res.attempts;
      Outcome o;
      try {
        o = c.run(level, s);
      } catch (const Error& e) {
        o = {false, {{"error", e.what()}}};
      }
      res.passed = o.passed;
      res.detail.push_back(std::move(o.detail));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (progress) progress(res);
    report.criteria.push_back(std::move(res));
  }
  return report;
}

}  // namespace hypercross
