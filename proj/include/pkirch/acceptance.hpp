#ifndef PKIRCH_ACCEPTANCE_HPP
#define PKIRCH_ACCEPTANCE_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace pkirch {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 10;

/// Runs one acceptance criterion (1-based).  scratch receives any files the
/// criterion writes (determinism comparisons, reports).
CriterionResult run_criterion(int id, const std::filesystem::path& scratch);

/// Runs all criteria (or a single one when only != -1), printing one pass/fail
/// line each; returns the number of failures.
int run_acceptance(std::ostream& os, const std::filesystem::path& scratch, int only = -1);

}  // namespace pkirch

#endif  // PKIRCH_ACCEPTANCE_HPP
