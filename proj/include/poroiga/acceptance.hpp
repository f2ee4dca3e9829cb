#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace poroiga {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

/// Runs the listed acceptance criteria (1-10); an empty list runs all of them.
/// Everything runs single-threaded through the serial assembly path.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// One "PASS|FAIL [n] title: detail" line per criterion.
void print_results(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace poroiga
