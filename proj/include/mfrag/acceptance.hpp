#pragma once

#include <string>
#include <vector>

namespace mfrag::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  ///< runtime budget; exceeding it fails the criterion
};

CriterionResult survival_law();
CriterionResult structural_invariants();
CriterionResult expectation_chain();
CriterionResult existence_at_bound();
CriterionResult admissible_supremum();
CriterionResult exponent_identities();
CriterionResult beta_p_limit();
CriterionResult oracle_equivalence();
CriterionResult determinism();

/// Runs every criterion in order.
std::vector<CriterionResult> run_all();

/// "[PASS] 3 expectation chain (1.2 s): detail"
std::string format_line(const CriterionResult& result);

}  // namespace mfrag::acceptance
