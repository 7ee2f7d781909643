#include "hqc/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hqc {
namespace {

bool entry_less(const RateEntry& a, const RateEntry& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

void check_entry_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > n || j > n) {
    throw std::out_of_range("rate index (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range for dimension " + std::to_string(n));
  }
}

std::string fmt_sum(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Builds the parametric control with per-block weights; shared by all the
// built-in strategies so each is a point of the same family.
QSpec build_parametric(const CouplingState& state, double u, double b) {
  const std::size_t n = state.dim();
  const auto unmatched = state.unmatched();
  const std::size_t k = unmatched.size();
  std::vector<RateEntry> entries;
  entries.reserve(3 * n + (k >= 2 ? k * (k - 1) : 0));

  auto add = [&entries](std::size_t i, std::size_t j, double r) {
    if (r != 0.0) {
      entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), r});
    }
  };

  for (std::size_t i = 1; i <= n; ++i) {
    if (!state.is_unmatched(i)) {
      add(i, i, 1.0 - b);
      add(i, 0, b);
      add(0, i, b);
    }
  }
  if (k == 1) {
    add(unmatched[0], 0, 1.0);
    add(0, unmatched[0], 1.0);
  } else if (k >= 2) {
    const double pair = (1.0 - u) / static_cast<double>(k - 1);
    for (const auto i : unmatched) {
      add(i, 0, u);
      add(0, i, u);
      for (const auto j : unmatched) {
        if (j != i) add(i, j, pair);
      }
    }
  }
  return QSpec(n, std::move(entries));
}

void check_unit_interval(double v, const char* what, std::size_t k) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " for k=" + std::to_string(k) +
                                " must lie in [0,1], got " + fmt_sum(v));
  }
}

}  // namespace

QSpec::QSpec(std::size_t n, std::vector<RateEntry> entries) : n_(n), entries_(std::move(entries)) {
  for (const auto& e : entries_) check_entry_index(e.i, e.j, n_);
  std::sort(entries_.begin(), entries_.end(), entry_less);
  const auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                      [](const RateEntry& a, const RateEntry& b) {
                                        return a.i == b.i && a.j == b.j;
                                      });
  if (dup != entries_.end()) {
    throw std::invalid_argument("duplicate rate entry (" + std::to_string(dup->i) + "," +
                                std::to_string(dup->j) + ")");
  }
}

double QSpec::rate(std::size_t i, std::size_t j) const {
  check_entry_index(i, j, n_);
  const RateEntry key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0.0};
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key, entry_less);
  return (it != entries_.end() && it->i == i && it->j == j) ? it->rate : 0.0;
}

void QSpec::set(std::size_t i, std::size_t j, double rate) {
  check_entry_index(i, j, n_);
  const RateEntry key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), rate};
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key, entry_less);
  if (it != entries_.end() && it->i == i && it->j == j) {
    it->rate = rate;
  } else {
    entries_.insert(it, key);
  }
}

double QSpec::total_rate() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.rate;
  return total;
}

bool operator==(const QSpec& a, const QSpec& b) {
  if (a.n_ != b.n_) return false;
  // Explicit zeros are equivalent to absent entries.
  std::vector<RateEntry> ea, eb;
  std::copy_if(a.entries_.begin(), a.entries_.end(), std::back_inserter(ea),
               [](const RateEntry& e) { return e.rate != 0.0; });
  std::copy_if(b.entries_.begin(), b.entries_.end(), std::back_inserter(eb),
               [](const RateEntry& e) { return e.rate != 0.0; });
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end(),
                    [](const RateEntry& x, const RateEntry& y) {
                      return x.i == y.i && x.j == y.j && x.rate == y.rate;
                    });
}

ValidationReport validate_qspec(const QSpec& q, double tol) {
  ValidationReport report;
  const std::size_t n = q.dim();
  std::vector<double> row(n + 1, 0.0), col(n + 1, 0.0);
  for (const auto& e : q.entries()) {
    const std::string where = "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
    if (!std::isfinite(e.rate)) {
      report.violations.push_back(
          {Violation::Kind::NonFiniteRate, e.i, e.j, e.rate, "non-finite rate at " + where});
      continue;
    }
    if (e.rate < 0.0) {
      report.violations.push_back(
          {Violation::Kind::NegativeRate, e.i, e.j, e.rate, "negative rate at " + where});
    }
    if (e.i == 0 && e.j == 0 && e.rate != 0.0) {
      report.violations.push_back(
          {Violation::Kind::ZeroZeroEntry, 0, 0, e.rate, "rate at (0,0) must be absent"});
    }
    row[e.i] += e.rate;
    col[e.j] += e.rate;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (std::abs(row[i] - 1.0) > tol) {
      report.violations.push_back({Violation::Kind::RowSum, i, 0, row[i],
                                   "row " + std::to_string(i) + " sums to " + fmt_sum(row[i])});
    }
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (std::abs(col[j] - 1.0) > tol) {
      report.violations.push_back({Violation::Kind::ColumnSum, 0, j, col[j],
                                   "column " + std::to_string(j) + " sums to " + fmt_sum(col[j])});
    }
  }
  return report;
}

QSpec optimal_q(const CouplingState& state) {
  const bool odd = state.n_unmatched() % 2 == 1;
  return build_parametric(state, odd ? 1.0 : 0.0, 0.0);
}

QSpec aldous_q(const CouplingState& state) { return build_parametric(state, 0.0, 0.0); }

StrategyParams StrategyParams::optimal(std::size_t n) {
  StrategyParams p(n);
  for (std::size_t k = 1; k <= n; ++k) p.table_[k] = {k % 2 == 1 ? 1.0 : 0.0, 0.0};
  return p;
}

StrategyParams StrategyParams::aldous(std::size_t n) {
  StrategyParams p(n);
  if (n >= 1) p.table_[1] = {1.0, 0.0};
  return p;
}

StrategyParams StrategyParams::independent(std::size_t n) {
  StrategyParams p(n);
  for (std::size_t k = 1; k <= n; ++k) p.table_[k] = {1.0, 1.0};
  return p;
}

StrategyParams StrategyParams::by_parity(std::size_t n, double u_odd, double u_even, double b) {
  StrategyParams p(n);
  for (std::size_t k = 1; k <= n; ++k) p.set(k, {k % 2 == 1 ? u_odd : u_even, b});
  return p;
}

void StrategyParams::set(std::size_t k, RatePair p) {
  if (k >= table_.size()) {
    throw std::out_of_range("k=" + std::to_string(k) + " exceeds dimension " +
                            std::to_string(dim()));
  }
  check_unit_interval(p.u, "u", k);
  check_unit_interval(p.b, "b", k);
  table_[k] = p;
}

QSpec parametric_q(const CouplingState& state, const StrategyParams& params) {
  if (params.dim() != state.dim()) throw DimensionMismatch();
  const auto& p = params.at(state.n_unmatched());
  return build_parametric(state, p.u, p.b);
}

std::optional<std::string> ln_violation(const LambdaVector& lambda, double tol) {
  for (int m = -2; m <= 2; ++m) {
    if (!(lambda.at(m) >= -tol)) {
      return "negative rate lambda(k,k" + std::string(m < 0 ? "" : "+") + std::to_string(m) + ")";
    }
  }
  if (lambda.down_budget() > lambda.k + tol) {
    return "down-rate budget lambda(k,k-2) + lambda(k,k-1)/2 exceeds k";
  }
  if (std::abs(lambda.weighted_total() - lambda.n) > tol) {
    return "weighted rate total differs from n";
  }
  return std::nullopt;
}

LambdaVector lambda_rates(const QSpec& q, const CouplingState& state) {
  if (q.dim() != state.dim()) throw DimensionMismatch();
  LambdaVector lambda;
  lambda.k = static_cast<int>(state.n_unmatched());
  lambda.n = static_cast<int>(state.dim());
  for (const auto& e : q.entries()) {
    if (e.i == 0 && e.j == 0) continue;
    if (e.i == 0 || e.j == 0) {
      const std::size_t c = e.i == 0 ? e.j : e.i;
      lambda.at(state.is_unmatched(c) ? -1 : 1) += e.rate;
    } else if (e.i == e.j) {
      lambda.at(0) += e.rate;
    } else {
      const bool ui = state.is_unmatched(e.i);
      const bool uj = state.is_unmatched(e.j);
      if (ui && uj) {
        lambda.at(-2) += e.rate;
      } else if (!ui && !uj) {
        lambda.at(2) += e.rate;
      } else {
        lambda.at(0) += e.rate;
      }
    }
  }
  return lambda;
}

Strategy Strategy::optimal(std::size_t n) {
  return parametric(StrategyParams::optimal(n), "optimal");
}

Strategy Strategy::aldous(std::size_t n) { return parametric(StrategyParams::aldous(n), "aldous"); }

Strategy Strategy::independent(std::size_t n) {
  return parametric(StrategyParams::independent(n), "independent");
}

Strategy Strategy::parametric(StrategyParams params, std::string name) {
  Strategy s;
  s.name_ = std::move(name);
  s.params_ = std::make_shared<const StrategyParams>(std::move(params));
  return s;
}

Strategy Strategy::feedback(Feedback fn, std::string name) {
  if (!fn) throw std::invalid_argument("feedback strategy needs a callable");
  Strategy s;
  s.name_ = std::move(name);
  s.feedback_ = std::move(fn);
  return s;
}

QSpec Strategy::q(const CouplingState& state) const {
  return params_ ? parametric_q(state, *params_) : feedback_(state);
}

}  // namespace hqc
