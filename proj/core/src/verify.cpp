#include "hqc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hqc/analytic.hpp"
#include "hqc/grid.hpp"
#include "hqc/rng.hpp"
#include "hqc/sim_engine.hpp"
#include "hqc/stats.hpp"

namespace hqc {
namespace {

const std::vector<double>& time_grid() {
  static const std::vector<double> grid = log_grid(1e-3, 20.0, 50);
  return grid;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Vertex ones_prefix(std::size_t n, int k) {
  Vertex v(n);
  for (int i = 1; i <= k; ++i) v.toggle(static_cast<std::size_t>(i));
  return v;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  return splitmix64(s);
}

std::vector<double> sorted_tau(const SampleSet& s) {
  std::vector<double> tau = s.tau;
  std::sort(tau.begin(), tau.end());
  return tau;
}

}  // namespace

CheckResult check_identities(int m_max) {
  CheckResult r{"identities", "m=1.." + std::to_string(m_max) + ", alpha in {0.01,0.1,1,10,100}",
                0.0, 1e-10, false, {}};
  for (const double alpha : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    for (int m = 1; m <= m_max; ++m) {
      r.max_residual = std::max(r.max_residual, check_laplace_identities(m, alpha).max_abs());
    }
    const double d2 = std::abs(increment_laplace(2, alpha));
    if (d2 > 1e-14) {
      r.notes.push_back("D(2) = " + fmt_double(d2) + " at alpha = " + fmt_double(alpha));
    }
  }
  r.notes.push_back("D-even and ident start at m=2; D(2) = 0 checked separately");
  r.pass = r.max_residual < r.tolerance &&
           std::none_of(r.notes.begin(), r.notes.end(),
                        [](const std::string& s) { return s.rfind("D(2) =", 0) == 0; });
  return r;
}

CheckResult check_parity(int k_max) {
  CheckResult r{"parity", "k=1.." + std::to_string(k_max) + ", 50 log-spaced t in [1e-3,20]", 0.0,
                1e-12, false, {}};
  for (int k = 1; k <= k_max; ++k) {
    for (const double t : time_grid()) {
      const double g = parity_gap(k, t);
      const double violation = k % 2 == 1 ? -g : g;  // positive means wrong sign
      r.max_residual = std::max(r.max_residual, violation);
    }
  }
  r.pass = r.max_residual <= r.tolerance;
  return r;
}

CheckResult check_bellman(int k_max) {
  CheckResult r{"bellman", "k=1.." + std::to_string(k_max) + ", 50 log-spaced t in [1e-3,20]", 0.0,
                1e-9, false, {}};
  for (int k = 1; k <= k_max; ++k) {
    for (const double t : time_grid()) {
      r.max_residual = std::max(r.max_residual, bellman_residual(k, t));
    }
  }
  r.pass = r.max_residual < r.tolerance;
  return r;
}

CheckResult check_polytope(int k_max) {
  CheckResult r{"polytope", "k=1.." + std::to_string(k_max) + ", n=" + std::to_string(k_max) +
                                ", 50 log-spaced t in [1e-3,20]",
                0.0, 0.0, false, {}};
  bool ok = true;
  bool k1_nonunique = true;
  for (int k = 1; k <= k_max; ++k) {
    for (const double t : time_grid()) {
      const LnMaximum best = maximize_over_ln(k, t, k_max);
      const LambdaVector expected = optimal_lambda(k, k_max);
      for (int m = -2; m <= 2; ++m) {
        r.max_residual = std::max(r.max_residual, std::abs(best.argmax.at(m) - expected.at(m)));
      }
      if (best.max_value < 0.0) ok = false;
      if (k == 1) {
        const bool has_up = std::any_of(best.maximizers.begin(), best.maximizers.end(),
                                        [](const LambdaVector& l) { return l.at(1) > 0.0; });
        k1_nonunique = k1_nonunique && !best.unique() && has_up;
      } else if (!best.unique()) {
        ok = false;
        r.notes.push_back("non-unique maximizer at k=" + std::to_string(k) + ", t=" + fmt_double(t));
      }
    }
  }
  if (k1_nonunique) {
    r.notes.push_back("k=1: argmax not unique, maximizers include lambda(1,2) > 0");
  } else {
    ok = false;
    r.notes.push_back("k=1: expected a non-unique argmax with lambda(1,2) > 0");
  }
  r.pass = ok && r.max_residual == 0.0;
  return r;
}

std::vector<Strategy> dominance_battery(std::size_t n) {
  std::vector<Strategy> battery;
  const double levels[] = {0.0, 0.5, 1.0};
  for (const double u_odd : levels) {
    for (const double u_even : levels) {
      for (const double b : levels) {
        std::ostringstream name;
        name << "parametric(u_odd=" << u_odd << ",u_even=" << u_even << ",b=" << b << ")";
        battery.push_back(
            Strategy::parametric(StrategyParams::by_parity(n, u_odd, u_even, b), name.str()));
      }
    }
  }
  return battery;
}

CheckResult check_dominance(int n, std::size_t replicas, std::uint64_t seed, unsigned parallelism) {
  const auto battery = dominance_battery(static_cast<std::size_t>(n));
  const std::size_t curves = battery.size() * static_cast<std::size_t>(n);
  const double alpha = 0.01 / static_cast<double>(curves);
  const double eps = stats::dkw_epsilon_one_sided(replicas, alpha);
  const auto grid = log_grid(1e-2, 10.0, 50);
  CheckResult r{"dominance",
                "n=" + std::to_string(n) + ", k0=1.." + std::to_string(n) + ", " +
                    std::to_string(battery.size()) + " strategies, " + std::to_string(replicas) +
                    " replicas, 50 log-spaced t in [1e-2,10]",
                0.0, eps, false, {}};
  std::uint64_t salt = 0;
  for (const auto& strategy : battery) {
    for (int k0 = 1; k0 <= n; ++k0) {
      ReplicaConfig config;
      config.start = BitLevelStart{Vertex(static_cast<std::size_t>(n)),
                                   ones_prefix(static_cast<std::size_t>(n), k0), strategy};
      config.replicas = replicas;
      config.seed = derive_seed(seed, ++salt);
      config.t_grid = grid;
      config.parallelism = parallelism;
      const auto tau = sorted_tau(sample_replicas(config));
      for (const double t : grid) {
        // Shortfall of the empirical tail below vhat.
        const double shortfall = vhat(k0, t) - stats::tail_fraction(tau, t);
        r.max_residual = std::max(r.max_residual, shortfall);
      }
    }
  }
  r.notes.push_back("band: one-sided DKW, alpha = 0.01 / " + std::to_string(curves) + " curves");
  r.pass = r.max_residual <= eps;
  return r;
}

CheckResult check_lumping(int n, const std::vector<int>& ks, std::size_t replicas,
                          std::uint64_t seed, unsigned parallelism) {
  const double crit = stats::ks_critical(replicas, replicas, 0.01);
  std::string list;
  for (const int k : ks) list += (list.empty() ? "" : ",") + std::to_string(k);
  CheckResult r{"lumping",
                "n=" + std::to_string(n) + ", k in {" + list + "}, " + std::to_string(replicas) +
                    " + " + std::to_string(replicas) + " replicas",
                0.0, crit, false, {}};
  for (const int k : ks) {
    ReplicaConfig bit;
    bit.start = BitLevelStart{Vertex(static_cast<std::size_t>(n)),
                              ones_prefix(static_cast<std::size_t>(n), k),
                              Strategy::optimal(static_cast<std::size_t>(n))};
    bit.replicas = replicas;
    bit.seed = derive_seed(seed, 2 * static_cast<std::uint64_t>(k));
    bit.t_grid = {1.0};
    bit.parallelism = parallelism;
    ReplicaConfig lumped = bit;
    lumped.start = LumpedStart{k};
    lumped.seed = derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1);
    const auto a = sorted_tau(sample_replicas(bit));
    const auto b = sorted_tau(sample_replicas(lumped));
    const double d = stats::ks_statistic(a, b);
    r.notes.push_back("k=" + std::to_string(k) + ": KS = " + fmt_double(d));
    r.max_residual = std::max(r.max_residual, d);
  }
  r.pass = r.max_residual < crit;
  return r;
}

CheckResult check_marginals(int n, double horizon, std::uint64_t seed) {
  const auto dim = static_cast<std::size_t>(n);
  const Strategy strategies[] = {Strategy::optimal(dim), Strategy::aldous(dim),
                                 Strategy::independent(dim)};
  const double se = std::sqrt(1.0 / horizon);
  CheckResult r{"marginals",
                "n=" + std::to_string(n) + ", horizon " + fmt_double(horizon) +
                    ", strategies optimal/aldous/independent",
                0.0, 3.0, false, {}};
  std::uint64_t stream = 0;
  for (const auto& strategy : strategies) {
    RngStream rng(seed, stream++);
    const Vertex x0(dim);
    const Vertex y0 = Vertex::ones(dim);
    const MarginalCounts c = count_marginal_flips(x0, y0, strategy, horizon, rng);
    for (std::size_t i = 0; i < dim; ++i) {
      // Flip counts of a rate-1 Poisson process: rate estimate has SE sqrt(1/horizon).
      const double zx = std::abs(static_cast<double>(c.x_flips[i]) / horizon - 1.0) / se;
      const double zy = std::abs(static_cast<double>(c.y_flips[i]) / horizon - 1.0) / se;
      r.max_residual = std::max({r.max_residual, zx, zy});
    }
  }
  r.notes.push_back("max_residual is the largest |rate - 1| in units of SE");
  r.pass = r.max_residual <= r.tolerance;
  return r;
}

CheckResult run_check(std::string_view name, const VerifyOptions& o) {
  if (name == "identities") return check_identities(o.m_max);
  if (name == "parity") return check_parity(std::min(o.k_max, 100));
  if (name == "bellman") return check_bellman(o.k_max);
  if (name == "polytope") return check_polytope(o.k_max);
  if (name == "dominance") return check_dominance(o.n, o.replicas, o.seed, o.parallelism);
  if (name == "lumping") {
    std::vector<int> ks;
    for (const int k : {3, 6, 10}) {
      if (k <= o.n) ks.push_back(k);
    }
    if (std::find(ks.begin(), ks.end(), o.n) == ks.end()) ks.push_back(o.n);
    return check_lumping(o.n, ks, o.replicas, o.seed, o.parallelism);
  }
  if (name == "marginals") return check_marginals(o.n, 1e4, o.seed);
  throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

}  // namespace hqc
