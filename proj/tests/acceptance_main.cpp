// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
//   acceptance [--quick] [--seed N] [--out PREFIX] [--known-failing ID]...
//
// Exit status is 0 only if every criterion passes, except ids listed with
// --known-failing: those are still run and reported, but do not affect the
// exit status.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "hypercross/acceptance.hpp"
#include "hypercross/io.hpp"
#include "hypercross/samplers.hpp"

using namespace hypercross;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  bool quick = false;
  std::uint64_t seed = SimConfig{}.master_seed;
  std::string out = "acceptance";
  std::vector<int> known;
  app.add_flag("--quick", quick, "reduced sample sizes");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "report prefix (.json, .timing.json)");
  app.add_option("--known-failing", known, "criteria excluded from the exit status");
  CLI11_PARSE(app, argc, argv);

  const VerifyLevel level = quick ? VerifyLevel::kQuick : VerifyLevel::kFull;
  std::cout << "acceptance (" << to_string(level) << ", seed " << seed << ")" << std::endl;
  const VerifyReport r = run_verify(level, seed, {}, [](const CriterionResult& c) {
    std::cout << summary_line(c) << std::endl;
  });
  if (!out.empty()) {
    write_text_file(out + ".json", r.to_json().dump(2) + "\n");
    write_text_file(out + ".timing.json", r.timing_json().dump(2) + "\n");
  }

  const std::set<int> excused(known.begin(), known.end());
  int failed = 0, excused_failed = 0;
  for (const auto& c : r.criteria) {
    if (c.passed) continue;
    (excused.count(c.id) ? excused_failed : failed) += 1;
  }
  std::cout << r.criteria.size() - failed - excused_failed << "/" << r.criteria.size()
            << " criteria passed";
  if (excused_failed > 0) std::cout << "; " << excused_failed << " known failing";
  std::cout << std::endl;
  return failed == 0 ? 0 : 1;
}
