#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypercross/constants.hpp"
#include "hypercross/samplers.hpp"
#include "hypercross/statistics.hpp"

namespace hypercross {

inline constexpr int kReportVersion = 1;

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

struct ExperimentSpec {
  std::string name;
  SimConfig config;
  std::string output_path;  // prefix for .json/.csv/.timing.json; empty = none

  std::int64_t samples = 0;  // Monte Carlo size; 0 picks the experiment default
  int k = -1;                // flat dimension; -1 picks the experiment default
  double r_max = 0.0;        // outer annulus radius; 0 means 4 r_min
  bool binomial = false;     // limit-law: binomial planes, n = round(2 t R)
  double c_d_scale = 1.0;    // limit-law/fvector: multiply C_d (sensitivity runs)
  std::vector<double> edges; // intensity: bin edges; empty = r_min * {1,2,4,8}

  void validate() const;
};

struct Target {
  std::string name;
  double value = 0.0;
  std::string citation;
};

struct NamedEstimate {
  std::string name;
  EstimateWithCI estimate;
  std::optional<double> target;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunReport {
  std::string experiment;
  nlohmann::json parameters;
  std::vector<NamedEstimate> estimates;
  std::vector<TestReport> tests;
  std::vector<Target> targets;
  std::vector<Check> checks;
  nlohmann::json extra = nlohmann::json::object();
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;  // not part of to_json(); see timing_json()
  std::string csv;            // raw per-replication data

  bool passed() const;
  /// Deterministic report body: identical inputs give identical bytes.
  nlohmann::json to_json() const;
  nlohmann::json timing_json() const;
};

/// Runs the named experiment. Throws ConfigError for unknown names or invalid
/// configuration; TupleBudgetExceeded propagates.
RunReport run_experiment(const ExperimentSpec& spec);

/// Writes <prefix>.json, <prefix>.csv and <prefix>.timing.json.
void write_report(const RunReport& r, const std::string& prefix);

/// C_d used by experiments: exact for d = 2, otherwise a 10^6-sample estimate
/// from a seed derived from the given one.
double working_cd(int d, std::uint64_t seed);

/// Binned TV distance between the empirical intensity of the restricted
/// intersection process and the limit measure, for each t in ts.
std::vector<double> intensity_tv_sweep(int d, std::span<const double> ts,
                                       std::int64_t reps,
                                       std::span<const double> edges,
                                       std::uint64_t seed,
                                       std::uint64_t cap = kDefaultTupleCap);

/// Expected face numbers of the limit hull: {pi^2/2, pi^2/2} for d = 2,
/// ((2/3)(pi^2+3), 2 pi^2, (4/3) pi^2) for d = 3; empty otherwise.
std::vector<double> expected_fvector(int d);

}  // namespace hypercross
