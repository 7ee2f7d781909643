#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace hqc {

/// Rates at which the unmatched count N jumps from k to k+m, m in {-2..2}.
struct LambdaVector {
  int k = 0;
  int n = 0;
  std::array<double, 5> rate{};

  double& at(int m) { return rate[static_cast<std::size_t>(m + 2)]; }
  double at(int m) const { return rate[static_cast<std::size_t>(m + 2)]; }

  /// lambda(k,k-2) + lambda(k,k-1)/2, bounded above by k on L_n.
  double down_budget() const { return at(-2) + 0.5 * at(-1); }
  /// Left side of the equality constraint; equals n on L_n.
  double weighted_total() const {
    return at(-2) + 0.5 * at(-1) + at(0) + 0.5 * at(1) + at(2);
  }
};

/// Names the first violated L_n constraint, or nullopt when lambda is admissible.
std::optional<std::string> ln_violation(const LambdaVector& lambda, double tol = 1e-9);

}  // namespace hqc
