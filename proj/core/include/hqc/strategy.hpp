#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hqc/hypercube.hpp"
#include "hqc/lambda_vector.hpp"

namespace hqc {

inline constexpr double kRateSumTolerance = 1e-9;

struct RateEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double rate = 0.0;
};

/// Sparse joint-jump rates q_ij, i, j in {0..n}. Entries (i,0) and (0,j) are
/// the single-chain slack terms and are stored explicitly. Entries are kept
/// sorted by (i, j); the constructor merges nothing and rejects duplicates.
class QSpec {
 public:
  explicit QSpec(std::size_t n) : n_(n) {}
  QSpec(std::size_t n, std::vector<RateEntry> entries);

  std::size_t dim() const noexcept { return n_; }
  std::span<const RateEntry> entries() const noexcept { return entries_; }

  double rate(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double rate);
  double total_rate() const;

  friend bool operator==(const QSpec& a, const QSpec& b);

 private:
  std::size_t n_;
  std::vector<RateEntry> entries_;
};

struct Violation {
  enum class Kind { NegativeRate, NonFiniteRate, ZeroZeroEntry, RowSum, ColumnSum };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Nonnegativity and the row/column identities sum_j q_ij = 1, sum_i q_ij = 1.
ValidationReport validate_qspec(const QSpec& q, double tol = kRateSumTolerance);

QSpec optimal_q(const CouplingState& state);
QSpec aldous_q(const CouplingState& state);

struct RatePair {
  double u = 0.0;  ///< singles weight on unmatched coordinates
  double b = 0.0;  ///< match-breaking weight on matched coordinates
};

/// Per-k table (k = 0..n) of the parametric control. Row k = 0 is ignored.
class StrategyParams {
 public:
  explicit StrategyParams(std::size_t n) : table_(n + 1) {}

  static StrategyParams optimal(std::size_t n);
  static StrategyParams aldous(std::size_t n);
  static StrategyParams independent(std::size_t n);
  /// u_k = u_odd / u_even by parity of k, b_k = b for every k.
  static StrategyParams by_parity(std::size_t n, double u_odd, double u_even, double b);

  std::size_t dim() const noexcept { return table_.size() - 1; }
  const RatePair& at(std::size_t k) const { return table_.at(k); }
  void set(std::size_t k, RatePair p);

 private:
  std::vector<RatePair> table_;
};

/// For k = N >= 2: q_i0 = q_0i = u_k and q_ij = (1-u_k)/(k-1) on U; for k = 1
/// the lone unmatched coordinate always moves by singles. On M:
/// q_ii = 1-b_k and q_i0 = q_0i = b_k.
QSpec parametric_q(const CouplingState& state, const StrategyParams& params);

/// lambda(k,k+m) implied by q at state (Eqs. for the five bands).
LambdaVector lambda_rates(const QSpec& q, const CouplingState& state);

/// A state-feedback control: Q is a function of the current state only and
/// is held constant between jumps. Parametric strategies are sampled
/// structurally by the engine; feedback strategies are materialized.
class Strategy {
 public:
  using Feedback = std::function<QSpec(const CouplingState&)>;

  static Strategy optimal(std::size_t n);
  static Strategy aldous(std::size_t n);
  static Strategy independent(std::size_t n);
  static Strategy parametric(StrategyParams params, std::string name);
  static Strategy feedback(Feedback fn, std::string name);

  const std::string& name() const noexcept { return name_; }
  QSpec q(const CouplingState& state) const;

  /// Null for feedback strategies.
  const StrategyParams* params() const noexcept { return params_.get(); }

 private:
  Strategy() = default;

  std::string name_;
  std::shared_ptr<const StrategyParams> params_;
  Feedback feedback_;
};

class StrategyFileError : public std::runtime_error {
 public:
  StrategyFileError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses a JSON array of {"k": int, "u": float, "b": float}. Rows not listed
/// keep (u, b) = (0, 0).
StrategyParams parse_strategy_params(std::string_view text, std::size_t n);
StrategyParams load_strategy_params(const std::filesystem::path& path, std::size_t n);

}  // namespace hqc
