#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypercross {

enum class VerifyLevel { kQuick, kFull };

VerifyLevel parse_verify_level(const std::string& s);
std::string to_string(VerifyLevel level);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  int attempts = 0;
  std::vector<std::uint64_t> seeds;
  nlohmann::json detail;  // one entry per attempt
  double seconds = 0.0;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::kQuick;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// Deterministic body; timings live in timing_json().
  nlohmann::json to_json() const;
  nlohmann::json timing_json() const;
};

/// Number of acceptance criteria.
inline constexpr int kCriteriaCount = 10;

/// Runs the acceptance criteria. kFull uses the stated sample sizes and runs
/// all ten; kQuick shrinks every sample and skips criterion 10, which itself
/// runs the quick suite twice. A failed criterion is rerun once with a seed
/// derived from the first. `only` restricts to the listed ids; progress is
/// called after each criterion.
VerifyReport run_verify(VerifyLevel level, std::uint64_t seed,
                        const std::vector<int>& only = {},
                        const std::function<void(const CriterionResult&)>& progress = {});

/// One human-readable line: "PASS  5  title  (attempts, seconds)".
std::string summary_line(const CriterionResult& c);

}  // namespace hypercross
