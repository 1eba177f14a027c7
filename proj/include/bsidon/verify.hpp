#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bsidon {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle-equivalence and invariant checks over small random instances:
/// packed vs reference arithmetic, index bijections, meet-in-the-middle vs
/// naive counts, global mass, negation symmetry, sampler determinism and the
/// elementary symmetric bound. `quick` shrinks the instance counts.
/// `progress` is called after each check.
std::vector<CheckResult> run_verification(bool quick, int workers,
                                          const std::function<void(const CheckResult&)>& progress = {});

}  // namespace bsidon
