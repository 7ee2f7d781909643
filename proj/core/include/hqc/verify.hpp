#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hqc/strategy.hpp"

namespace hqc {

/// Outcome of one verification check. max_residual is the worst deviation
/// found, in the units of the check's own tolerance.
struct CheckResult {
  std::string name;
  std::string grid;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  int m_max = 50;
  int k_max = 200;
  int n = 6;
  std::size_t replicas = 100000;
  std::uint64_t seed = 7;
  unsigned parallelism = 1;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"identities", "parity",    "bellman", "polytope",
                                              "dominance",  "lumping",   "marginals"};
  return names;
}

/// Laplace identities for m <= m_max, alpha in {0.01, 0.1, 1, 10, 100}, plus D(2) = 0.
CheckResult check_identities(int m_max);

/// Sign of parity_gap for k <= k_max on 50 log-spaced t in [1e-3, 20].
CheckResult check_parity(int k_max);

/// bellman_residual for k <= k_max on 50 log-spaced t in [1e-3, 20].
CheckResult check_bellman(int k_max);

/// maximize_over_ln versus the optimal strategy's rate bands, k <= k_max.
CheckResult check_polytope(int k_max);

/// The strategy battery used by the dominance check: the 27 parity-wise
/// parametric controls (u_odd, u_even, b) in {0, 1/2, 1}^3, which include
/// the Aldous and independent couplings.
std::vector<Strategy> dominance_battery(std::size_t n);

/// Empirical tails of every battery strategy, every k0 in 1..n, against
/// vhat(k0, .) minus a one-sided simultaneous DKW band (family-wise 99%).
CheckResult check_dominance(int n, std::size_t replicas, std::uint64_t seed, unsigned parallelism);

/// Two-sample KS between bit-level optimal coupling and the parity chain.
CheckResult check_lumping(int n, const std::vector<int>& ks, std::size_t replicas,
                          std::uint64_t seed, unsigned parallelism);

/// Per-coordinate flip rates of X and Y under the built-in strategies.
CheckResult check_marginals(int n, double horizon, std::uint64_t seed);

/// Runs a check by name; throws std::invalid_argument for unknown names.
CheckResult run_check(std::string_view name, const VerifyOptions& options);

}  // namespace hqc
