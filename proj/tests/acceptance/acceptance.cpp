#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hqc/analytic.hpp"
#include "hqc/grid.hpp"
#include "hqc/sim_engine.hpp"
#include "hqc/stats.hpp"
#include "hqc/tv_distance.hpp"
#include "hqc/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs one criterion, appends its wall time and a runtime limit if any.
bool report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  bool pass = o.pass;
  std::string timing = fmt("%.2fs", secs);
  if (limit_s > 0) {
    timing += fmt(" (limit %.0fs)", limit_s);
    pass = pass && secs < limit_s;
  }
  std::printf("criterion %d: %s %s: %s [%s]\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
  return pass;
}

Outcome from_check(const hqc::CheckResult& r) {
  std::string detail = "max residual " + fmt("%.3g", r.max_residual) + " vs " + fmt("%.3g", r.tolerance);
  for (const auto& note : r.notes) detail += "; " + note;
  return {r.pass, detail};
}

constexpr std::uint64_t kSeed = 20240601;

Outcome exact_law() {
  const std::size_t n = 10;
  hqc::Vertex y(n);
  for (std::size_t i = 1; i <= n; ++i) y.toggle(i);
  hqc::ReplicaConfig c;
  c.start = hqc::BitLevelStart{hqc::Vertex(n), y, hqc::Strategy::optimal(n)};
  c.replicas = 100000;
  c.seed = kSeed;
  c.t_grid = hqc::log_grid(0.01, 10.0, 50);
  c.parallelism = 1;
  const auto r = hqc::run_replicas(c);
  double worst = 0.0;
  for (const auto& p : r.tail) worst = std::max(worst, std::abs(p.p - hqc::vhat(10, p.t)));
  return {worst <= r.dkw_epsilon && r.censored == 0,
          "sup |tail - vhat(10,.)| = " + fmt("%.5f", worst) + ", DKW 99% band " +
              fmt("%.5f", r.dkw_epsilon)};
}

Outcome mean_coupling_time() {
  hqc::ReplicaConfig c;
  c.start = hqc::LumpedStart{4};
  c.replicas = 100000;
  c.seed = kSeed;
  c.t_grid = {1.0};
  const auto r = hqc::run_replicas(c);
  if (!r.mean_tau || !r.se) return {false, "mean withheld"};
  const double z = std::abs(*r.mean_tau - 0.75) / *r.se;
  const double ratio = hqc::expected_tau_hat(1024) / (0.5 * std::log(1024.0));
  return {z <= 3.0 && ratio >= 0.9 && ratio <= 1.05,
          "mean " + fmt("%.6f", *r.mean_tau) + " +- " + fmt("%.6f", *r.se) + " (" + fmt("%.2f", z) + " SE from 0.75), E ratio at 1024 " +
              fmt("%.6f", ratio)};
}

Outcome non_maximality() {
  const auto c = hqc::level_crossing(1024, 1024, 0.5);
  double worst = -1.0;
  for (int k = 1; k <= 1024; k += (k < 64 ? 1 : 17)) {
    for (const double t : hqc::log_grid(1e-3, 10.0, 30)) {
      worst = std::max(worst, hqc::tv(k, t) - hqc::vhat(k, t));
    }
  }
  double tight = 0.0;
  for (const double t : hqc::log_grid(1e-3, 10.0, 50)) {
    for (const int k : {1, 2}) tight = std::max(tight, std::abs(hqc::tv(k, t) - hqc::vhat(k, t)));
  }
  return {c.ratio >= 1.5 && c.ratio <= 2.5 && worst <= 1e-12 && tight <= 1e-12,
          "t_vhat " + fmt("%.6f", c.t_vhat) + " / t_tv " + fmt("%.6f", c.t_tv) + " = " +
              fmt("%.4f", c.ratio) + ", max(tv - vhat) " + fmt("%.3g", worst) +
              ", max |tv - vhat| at k<=2 " + fmt("%.3g", tight)};
}

}  // namespace

int main() {
  bool all = true;
  all &= report(1, "exact-law agreement", 30, exact_law);
  all &= report(2, "lumping equivalence", 0, [] {
    return from_check(hqc::check_lumping(10, {3, 6, 10}, 100000, kSeed, 1));
  });
  all &= report(3, "stochastic minimum over strategy battery", 600, [] {
    return from_check(hqc::check_dominance(6, 100000, kSeed, 1));
  });
  all &= report(4, "Laplace identities", 1, [] { return from_check(hqc::check_identities(50)); });
  all &= report(5, "parity signs", 1, [] { return from_check(hqc::check_parity(100)); });
  all &= report(6, "Bellman certification", 0, [] {
    const auto polytope = hqc::check_polytope(200);
    const auto bellman = hqc::check_bellman(200);
    Outcome a = from_check(polytope);
    Outcome b = from_check(bellman);
    return Outcome{a.pass && b.pass, "polytope: " + a.detail + "; bellman: " + b.detail};
  });
  all &= report(7, "marginal correctness", 0,
                [] { return from_check(hqc::check_marginals(8, 1e4, kSeed)); });
  all &= report(8, "mean coupling time", 0, mean_coupling_time);
  all &= report(9, "non-maximality", 0, non_maximality);
  return all ? 0 : 1;
}
