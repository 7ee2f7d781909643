#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hqc/analytic.hpp"
#include "hqc/grid.hpp"
#include "hqc/sim_engine.hpp"
#include "hqc/stats.hpp"

namespace hqc {
namespace {

Vertex prefix_ones(std::size_t n, std::size_t k) {
  Vertex v(n);
  for (std::size_t i = 1; i <= k; ++i) v.toggle(i);
  return v;
}

std::vector<double> sorted_samples(const SampleSet& s) {
  auto v = s.tau;
  std::sort(v.begin(), v.end());
  return v;
}

ReplicaConfig bit_config(std::size_t n, std::size_t k, Strategy strategy, std::size_t replicas,
                         std::uint64_t seed) {
  ReplicaConfig c;
  c.start = BitLevelStart{Vertex(n), prefix_ones(n, k), std::move(strategy)};
  c.replicas = replicas;
  c.seed = seed;
  c.t_grid = log_grid(0.01, 10.0, 50);
  return c;
}

ReplicaConfig lumped_config(int k, std::size_t replicas, std::uint64_t seed) {
  ReplicaConfig c;
  c.start = LumpedStart{k};
  c.replicas = replicas;
  c.seed = seed;
  c.t_grid = log_grid(0.01, 10.0, 50);
  return c;
}

TEST(RngStream, ReproducibleAndDistinct) {
  RngStream a(42, 3);
  RngStream b(42, 3);
  RngStream c(42, 4);
  RngStream d(43, 3);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    same_c += va == c();
    same_d += va == d();
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
}

TEST(RngStream, UniformAndBelowRanges) {
  RngStream r(1, 1);
  double sum = 0.0;
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const double u = r.uniform_open0();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
    const auto b = r.below(7);
    ASSERT_LT(b, 7U);
    ++counts[b];
  }
  EXPECT_NEAR(sum / draws, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / draws));
  for (const int c : counts) EXPECT_NEAR(c, draws / 7.0, 4.0 * std::sqrt(draws / 7.0));
}

TEST(Step, CoupledStateStaysCoupled) {
  const std::size_t n = 6;
  auto s = make_state(Vertex::parse("010011"), Vertex::parse("010011"));
  const auto strategy = Strategy::optimal(n);
  RngStream rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto r = step(s, strategy, rng);
    EXPECT_EQ(r.event.i, r.event.j);
    EXPECT_NE(r.event.i, 0U);
    EXPECT_GT(r.dt, 0.0);
    EXPECT_EQ(s.n_unmatched(), 0U);
  }
}

TEST(Step, TwoUnmatchedUnderOptimal) {
  const std::size_t n = 5;
  const auto strategy = Strategy::optimal(n);
  RngStream rng(2, 0);
  double dt_sum = 0.0;
  const int trials = 20000;
  int collisions = 0;
  for (int i = 0; i < trials; ++i) {
    auto s = make_state(Vertex(n), prefix_ones(n, 2));
    const auto r = step(s, strategy, rng);
    dt_sum += r.dt;
    if (s.n_unmatched() != 2) {
      ASSERT_EQ(s.n_unmatched(), 0U);
      ASSERT_NE(r.event.i, r.event.j);
      ASSERT_LE(r.event.i, 2U);
      ++collisions;
    } else {
      ASSERT_EQ(r.event.i, r.event.j);
    }
  }
  // Total rate n: mean holding time 1/n; the N-changing rate is 2 out of n.
  EXPECT_NEAR(dt_sum / trials, 1.0 / n, 4.0 * (1.0 / n) / std::sqrt(trials));
  const double p = 2.0 / n;
  EXPECT_NEAR(collisions / double(trials), p, 4.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Step, QSpecSamplerMatchesStructuralSampler) {
  // Same event frequencies whether the control is materialized or sampled by blocks.
  const std::size_t n = 4;
  const auto params = StrategyParams::by_parity(n, 0.5, 0.25, 0.5);
  const auto strategy = Strategy::parametric(params, "p");
  const auto start = make_state(Vertex(n), prefix_ones(n, 3));
  const auto q = strategy.q(start);
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> a;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> b;
  RngStream r1(3, 0);
  RngStream r2(3, 1);
  const int trials = 40000;
  for (int i = 0; i < trials; ++i) {
    auto s1 = start;
    auto s2 = start;
    const auto e1 = step(s1, q, r1).event;
    const auto e2 = step(s2, params, r2).event;
    ++a[{e1.i, e1.j}];
    ++b[{e2.i, e2.j}];
  }
  const double total = q.total_rate();
  for (const auto& e : q.entries()) {
    const double p = e.rate / total;
    const double tol = 5.0 * std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(a[std::pair(e.i, e.j)] / double(trials), p, tol);
    EXPECT_NEAR(b[std::pair(e.i, e.j)] / double(trials), p, tol);
  }
}

TEST(Step, FrozenQSpecThrows) {
  auto s = make_state(Vertex(2), Vertex(2));
  RngStream rng(0, 0);
  try {
    step(s, QSpec(2), rng);
    FAIL();
  } catch (const FrozenState& e) {
    EXPECT_STREQ(e.what(), "frozen state");
  }
}

TEST(Step, ReplayIsDeterministic) {
  const std::size_t n = 8;
  const auto strategy = Strategy::aldous(n);
  auto s1 = make_state(Vertex(n), prefix_ones(n, 5));
  auto s2 = s1;
  RngStream r1(99, 7);
  RngStream r2(99, 7);
  for (int i = 0; i < 500; ++i) {
    const auto a = step(s1, strategy, r1);
    const auto b = step(s2, strategy, r2);
    ASSERT_EQ(a.dt, b.dt);
    ASSERT_EQ(a.event, b.event);
  }
}

TEST(Step, DebugCheckAcceptsBuiltInStrategies) {
  const std::size_t n = 6;
  for (const auto& strategy :
       {Strategy::optimal(n), Strategy::aldous(n), Strategy::independent(n),
        Strategy::parametric(StrategyParams::by_parity(n, 0.5, 0.5, 0.5), "mid")}) {
    RngStream rng(4, 0);
    EXPECT_NO_THROW(run_coupling(Vertex(n), Vertex::ones(n), strategy, 50.0, rng, true));
  }
}

TEST(RunCoupling, IdenticalStartsCoupleImmediately) {
  RngStream rng(5, 0);
  const auto s = run_coupling(Vertex::parse("0110"), Vertex::parse("0110"), Strategy::optimal(4),
                              10.0, rng);
  EXPECT_EQ(s.tau, 0.0);
  EXPECT_FALSE(s.censored);
}

TEST(RunCoupling, CensorsAtTmax) {
  RngStream rng(6, 0);
  const auto s = run_coupling(Vertex(10), Vertex::ones(10), Strategy::independent(10), 1e-6, rng);
  EXPECT_TRUE(s.censored);
  EXPECT_EQ(s.tau, 1e-6);
  EXPECT_THROW(run_coupling(Vertex(2), Vertex(2), Strategy::optimal(2), 0.0, rng),
               std::invalid_argument);
}

TEST(RunCoupling, DistanceOneIsExponentialTwo) {
  auto c = bit_config(6, 1, Strategy::optimal(6), 100000, 11);
  const auto r = run_replicas(c);
  ASSERT_TRUE(r.mean_tau.has_value());
  EXPECT_NEAR(*r.mean_tau, 0.5, 3.0 * *r.se);
}

TEST(RunCoupling, DistancesOneAndTwoAgreeInLaw) {
  const auto one = sorted_samples(sample_replicas(bit_config(6, 1, Strategy::optimal(6), 100000, 12)));
  const auto two = sorted_samples(sample_replicas(bit_config(6, 2, Strategy::optimal(6), 100000, 13)));
  EXPECT_LT(stats::ks_statistic(one, two), stats::ks_critical(one.size(), two.size(), 0.01));
}

TEST(RunCoupling, DistanceNeverIncreasesUnderOptimal) {
  const std::size_t n = 12;
  const auto strategy = Strategy::optimal(n);
  for (std::uint64_t stream = 0; stream < 300; ++stream) {
    RngStream rng(21, stream);
    auto s = make_state(Vertex(n), prefix_ones(n, 1 + stream % n));
    std::size_t last = s.n_unmatched();
    run_path(s, strategy, 100.0, rng, true,
             [&last](double, const Event&, const CouplingState& after) {
               ASSERT_LE(after.n_unmatched(), last);
               last = after.n_unmatched();
             });
    EXPECT_EQ(s.n_unmatched(), 0U);
  }
}

TEST(RunPath, ObserverSeesEveryJump) {
  const std::size_t n = 4;
  RngStream rng(8, 0);
  auto s = make_state(Vertex(n), prefix_ones(n, 3));
  double last_t = 0.0;
  int jumps = 0;
  const double end = run_path(s, Strategy::aldous(n), 5.0, rng, false,
                              [&](double t, const Event&, const CouplingState& after) {
                                EXPECT_GE(t, last_t);
                                EXPECT_TRUE(after.consistent());
                                last_t = t;
                                ++jumps;
                              });
  EXPECT_EQ(end, 5.0);
  EXPECT_GT(jumps, 0);
}

TEST(ParityChain, Examples) {
  RngStream rng(0, 0);
  EXPECT_EQ(run_parity_chain(0, rng), 0.0);
  EXPECT_THROW(run_parity_chain(-1, rng), std::invalid_argument);

  const auto four = run_replicas(lumped_config(4, 100000, 31));
  EXPECT_NEAR(*four.mean_tau, 0.75, 3.0 * *four.se);
  const auto three = run_replicas(lumped_config(3, 100000, 32));
  EXPECT_NEAR(*three.mean_tau, 2.0 / 3.0, 3.0 * *three.se);
}

TEST(RunReplicas, ParityChainTailWithinDkwBandOfVhat) {
  const auto r = run_replicas(lumped_config(10, 100000, 41));
  for (const auto& p : r.tail) EXPECT_LE(std::abs(p.p - vhat(10, p.t)), r.dkw_epsilon) << p.t;
}

TEST(RunReplicas, SingleReplicaIsStepFunction) {
  auto c = bit_config(5, 3, Strategy::aldous(5), 1, 3);
  const auto r = run_replicas(c);
  ASSERT_EQ(r.tail.size(), 50U);
  for (std::size_t i = 0; i < r.tail.size(); ++i) {
    EXPECT_TRUE(r.tail[i].p == 0.0 || r.tail[i].p == 1.0);
    if (i > 0) {
      EXPECT_LE(r.tail[i].p, r.tail[i - 1].p);
    }
  }
}

TEST(RunReplicas, ParallelismDoesNotChangeTheReport) {
  auto c = bit_config(8, 5, Strategy::aldous(8), 3000, 17);
  c.parallelism = 1;
  const auto a = run_replicas(c);
  c.parallelism = 8;
  const auto b = run_replicas(c);
  ASSERT_EQ(a.tail.size(), b.tail.size());
  for (std::size_t i = 0; i < a.tail.size(); ++i) {
    EXPECT_EQ(a.tail[i].p, b.tail[i].p);
    EXPECT_EQ(a.tail[i].half_width, b.tail[i].half_width);
  }
  EXPECT_EQ(a.mean_tau, b.mean_tau);
  EXPECT_EQ(a.se, b.se);
  EXPECT_EQ(a.max_events, b.max_events);
}

TEST(RunReplicas, TailIsNonincreasingProbability) {
  const auto r = run_replicas(bit_config(6, 6, Strategy::independent(6), 2000, 19));
  for (std::size_t i = 0; i < r.tail.size(); ++i) {
    EXPECT_GE(r.tail[i].p, 0.0);
    EXPECT_LE(r.tail[i].p, 1.0);
    if (i > 0) {
      EXPECT_LE(r.tail[i].p, r.tail[i - 1].p);
    }
  }
}

TEST(RunReplicas, HeavyCensoringWithholdsMean) {
  auto c = bit_config(6, 6, Strategy::independent(6), 500, 23);
  c.t_max = 0.05;
  c.t_grid = {0.01, 0.05, 0.1};
  const auto r = run_replicas(c);
  EXPECT_GT(r.censored_fraction, kMaxCensoredFraction);
  EXPECT_FALSE(r.mean_tau.has_value());
  EXPECT_FALSE(r.se.has_value());
  // Censored replicas count as tau > t up to t_max, and not beyond.
  EXPECT_GE(r.tail[1].p, r.censored_fraction);
  EXPECT_EQ(r.tail[2].p, 0.0);
}

TEST(RunReplicas, ConfigErrorsNameTheField) {
  auto c = lumped_config(3, 10, 1);
  c.replicas = 0;
  try {
    run_replicas(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "replicas");
  }
  c.replicas = 10;
  c.t_grid = {1.0, 0.5};
  try {
    run_replicas(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "t_grid");
  }
  c.t_grid = {1.0};
  c.start = LumpedStart{-2};
  try {
    run_replicas(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "k0");
  }
}

TEST(Lumping, BitLevelOptimalMatchesParityChain) {
  for (const int k : {3, 6}) {
    const auto a = sorted_samples(sample_replicas(bit_config(8, k, Strategy::optimal(8), 20000, 50 + k)));
    const auto b = sorted_samples(sample_replicas(lumped_config(k, 20000, 60 + k)));
    EXPECT_LT(stats::ks_statistic(a, b), stats::ks_critical(a.size(), b.size(), 0.01)) << k;
  }
}

TEST(Lumping, AldousMatchesOptimalFromEvenStart) {
  const auto a = sorted_samples(sample_replicas(bit_config(8, 6, Strategy::aldous(8), 20000, 71)));
  const auto b = sorted_samples(sample_replicas(bit_config(8, 6, Strategy::optimal(8), 20000, 72)));
  EXPECT_LT(stats::ks_statistic(a, b), stats::ks_critical(a.size(), b.size(), 0.01));
}

TEST(Marginals, EveryCoordinateFlipsAtRateOne) {
  const std::size_t n = 8;
  const double horizon = 2000.0;
  const double se = std::sqrt(1.0 / horizon);
  std::uint64_t stream = 0;
  for (const auto& strategy : {Strategy::optimal(n), Strategy::aldous(n), Strategy::independent(n)}) {
    RngStream rng(81, stream++);
    const auto c = count_marginal_flips(Vertex(n), Vertex::ones(n), strategy, horizon, rng);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(c.x_flips[i] / horizon, 1.0, 4.0 * se) << strategy.name() << " x" << i + 1;
      EXPECT_NEAR(c.y_flips[i] / horizon, 1.0, 4.0 * se) << strategy.name() << " y" << i + 1;
    }
  }
}

}  // namespace
}  // namespace hqc
