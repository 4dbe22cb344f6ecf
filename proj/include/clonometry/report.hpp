#pragma once

#include <string>
#include <vector>

namespace clonometry {

// One measured observable compared against theory. "estimated" carries the
// rescaled estimator where one applies (e.g. the 9/5 spin rescaling); it
// equals "measured" when no rescaling is involved.
struct MomentEntry {
  std::string observable;
  double measured = 0.0;
  double estimated = 0.0;
  double expected = 0.0;
  double measured_second = 0.0;
  double estimated_second = 0.0;
  double expected_second = 0.0;
  double added_noise = 0.0;
  double expected_added_noise = 0.0;
};

struct MomentReport {
  std::vector<MomentEntry> entries;
  double total_uncertainty = 0.0;
  double expected_total_uncertainty = 0.0;
  // Empirical sign relating the first-moment estimator kernel to the bare
  // observable (determined numerically, not assumed).
  int first_moment_sign = +1;
  double probability_total = 0.0;
  std::vector<std::string> warnings;

  const MomentEntry& entry(const std::string& name) const;
};

}  // namespace clonometry
