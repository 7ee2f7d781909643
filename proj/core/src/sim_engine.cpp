#include "hqc/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "hqc/stats.hpp"

namespace hqc {
namespace {

struct Sampled {
  double dt;
  Event event;
};

Sampled sample_from_qspec(const CouplingState& state, const QSpec& q, RngStream& rng) {
  if (q.dim() != state.dim()) throw DimensionMismatch();
  const double total = q.total_rate();
  if (!(total > 0.0)) throw FrozenState();
  const double dt = rng.exponential(total);
  const double target = rng.uniform() * total;
  double acc = 0.0;
  const auto entries = q.entries();
  for (const auto& e : entries) {
    acc += e.rate;
    if (target < acc && e.rate > 0.0) return {dt, {e.i, e.j}};
  }
  // Rounding left target at the very top; take the last positive entry.
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->rate > 0.0) return {dt, {it->i, it->j}};
  }
  throw FrozenState();
}

std::uint32_t uniform_matched(const CouplingState& state, RngStream& rng) {
  const std::size_t n = state.dim();
  const std::size_t m = state.n_matched();
  if (4 * m >= n) {
    for (;;) {
      const auto i = static_cast<std::uint32_t>(rng.below(n) + 1);
      if (!state.is_unmatched(i)) return i;
    }
  }
  return static_cast<std::uint32_t>(state.nth_matched(rng.below(m)));
}

struct BlockRates {
  double matched = 0.0;
  double unmatched = 0.0;
};

BlockRates block_rates(std::size_t n, std::size_t k, const RatePair& p) {
  BlockRates r;
  r.matched = static_cast<double>(n - k) * (1.0 + p.b);
  if (k == 1) {
    r.unmatched = 2.0;
  } else if (k >= 2) {
    r.unmatched = static_cast<double>(k) * (1.0 + p.u);
  }
  return r;
}

Sampled sample_structural(const CouplingState& state, const StrategyParams& params, RngStream& rng) {
  if (params.dim() != state.dim()) throw DimensionMismatch();
  const std::size_t n = state.dim();
  const std::size_t k = state.n_unmatched();
  const RatePair& p = params.at(k);
  const BlockRates rates = block_rates(n, k, p);
  const double total = rates.matched + rates.unmatched;
  const double dt = rng.exponential(total);

  if (rng.uniform() * total < rates.matched) {
    const std::uint32_t i = uniform_matched(state, rng);
    const double sub = rng.uniform() * (1.0 + p.b);
    if (sub < 1.0 - p.b) return {dt, {i, i}};
    return {dt, sub < 1.0 ? Event{i, 0} : Event{0, i}};
  }

  const auto unmatched = state.unmatched();
  if (k == 1) {
    const std::uint32_t i = unmatched[0];
    return {dt, rng.uniform() < 0.5 ? Event{i, 0} : Event{0, i}};
  }
  const double sub = rng.uniform() * (1.0 + p.u);
  const std::uint32_t i = unmatched[rng.below(k)];
  if (sub < p.u) return {dt, {i, 0}};
  if (sub < 2.0 * p.u) return {dt, {0, i}};
  // j uniform on U \ {i}: draw from k-1 slots and skip i's position.
  std::size_t slot = rng.below(k - 1);
  if (unmatched[slot] >= i) ++slot;
  return {dt, {i, unmatched[slot]}};
}

void cross_check(const CouplingState& state, const StrategyParams& params) {
  const QSpec q = parametric_q(state, params);
  const auto report = validate_qspec(q);
  if (!report.ok()) {
    throw std::logic_error("debug check: invalid QSpec: " + report.violations.front().message);
  }
  const std::size_t n = state.dim();
  const std::size_t k = state.n_unmatched();
  const RatePair& p = params.at(k);
  const BlockRates rates = block_rates(n, k, p);
  const double total = rates.matched + rates.unmatched;
  const LambdaVector lambda = lambda_rates(q, state);

  LambdaVector expected;
  const double nm = static_cast<double>(n - k);
  expected.at(1) = 2.0 * p.b * nm;
  expected.at(0) = (1.0 - p.b) * nm;
  if (k == 1) {
    expected.at(-1) = 2.0;
  } else if (k >= 2) {
    expected.at(-1) = 2.0 * p.u * static_cast<double>(k);
    expected.at(-2) = (1.0 - p.u) * static_cast<double>(k);
  }
  const double tol = 1e-9 * std::max(1.0, total);
  bool ok = std::abs(q.total_rate() - total) <= tol;
  for (int m = -2; m <= 2; ++m) ok = ok && std::abs(lambda.at(m) - expected.at(m)) <= tol;
  if (!ok) throw std::logic_error("debug check: structural rates disagree with materialized QSpec");
}

Sampled sample_event(const CouplingState& state, const Strategy& strategy, RngStream& rng,
                     bool debug_check) {
  if (const StrategyParams* params = strategy.params()) {
    if (debug_check) cross_check(state, *params);
    return sample_structural(state, *params, rng);
  }
  const QSpec q = strategy.q(state);
  if (debug_check) {
    const auto report = validate_qspec(q);
    if (!report.ok()) {
      throw std::logic_error("debug check: invalid QSpec: " + report.violations.front().message);
    }
  }
  return sample_from_qspec(state, q, rng);
}

template <class Observer>
double advance(CouplingState& state, const Strategy& strategy, double horizon, RngStream& rng,
               bool stop_at_collision, bool debug_check, std::uint64_t& events, Observer&& observe) {
  double t = 0.0;
  if (stop_at_collision && state.n_unmatched() == 0) return t;
  for (;;) {
    const Sampled s = sample_event(state, strategy, rng, debug_check);
    if (t + s.dt > horizon) return horizon;
    t += s.dt;
    state.apply(s.event.i, s.event.j);
    ++events;
    observe(t, s.event, state);
    if (stop_at_collision && state.n_unmatched() == 0) return t;
  }
}

}  // namespace

StepResult step(CouplingState& state, const QSpec& q, RngStream& rng) {
  const Sampled s = sample_from_qspec(state, q, rng);
  state.apply(s.event.i, s.event.j);
  return {s.dt, s.event};
}

StepResult step(CouplingState& state, const StrategyParams& params, RngStream& rng) {
  const Sampled s = sample_structural(state, params, rng);
  state.apply(s.event.i, s.event.j);
  return {s.dt, s.event};
}

StepResult step(CouplingState& state, const Strategy& strategy, RngStream& rng, bool debug_check) {
  const Sampled s = sample_event(state, strategy, rng, debug_check);
  state.apply(s.event.i, s.event.j);
  return {s.dt, s.event};
}

CouplingSample run_coupling(const Vertex& x0, const Vertex& y0, const Strategy& strategy,
                            double t_max, RngStream& rng, bool debug_check) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  CouplingState state = make_state(x0, y0);
  CouplingSample out;
  const double t = advance(state, strategy, t_max, rng, true, debug_check, out.events,
                           [](double, const Event&, const CouplingState&) {});
  out.censored = state.n_unmatched() != 0;
  out.tau = out.censored ? t_max : t;
  return out;
}

double run_path(CouplingState& state, const Strategy& strategy, double horizon, RngStream& rng,
                bool stop_at_collision, const PathObserver& observer) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  std::uint64_t events = 0;
  return advance(state, strategy, horizon, rng, stop_at_collision, false, events,
                 [&observer](double t, const Event& e, const CouplingState& s) {
                   if (observer) observer(t, e, s);
                 });
}

MarginalCounts count_marginal_flips(const Vertex& x0, const Vertex& y0, const Strategy& strategy,
                                    double horizon, RngStream& rng) {
  CouplingState state = make_state(x0, y0);
  MarginalCounts counts;
  counts.horizon = horizon;
  counts.x_flips.assign(state.dim(), 0);
  counts.y_flips.assign(state.dim(), 0);
  std::uint64_t events = 0;
  advance(state, strategy, horizon, rng, false, false, events,
          [&counts](double, const Event& e, const CouplingState&) {
            if (e.i != 0) ++counts.x_flips[e.i - 1];
            if (e.j != 0) ++counts.y_flips[e.j - 1];
          });
  return counts;
}

double run_parity_chain(int k0, RngStream& rng) {
  if (k0 < 0) throw std::invalid_argument("k0 must be nonnegative");
  double tau = 0.0;
  for (int k = k0; k > 0;) {
    if (k % 2 == 1) {
      tau += rng.exponential(2.0 * k);
      k -= 1;
    } else {
      tau += rng.exponential(static_cast<double>(k));
      k -= 2;
    }
  }
  return tau;
}

void validate_config(const ReplicaConfig& config) {
  if (config.replicas < 1) throw ConfigError("replicas", "must be at least 1");
  if (config.parallelism < 1) throw ConfigError("parallelism", "must be at least 1");
  if (!(config.t_max > 0.0)) throw ConfigError("t_max", "must be positive");
  if (config.t_grid.empty()) throw ConfigError("t_grid", "must not be empty");
  for (std::size_t i = 0; i < config.t_grid.size(); ++i) {
    const double t = config.t_grid[i];
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t_grid", "values must be finite and >= 0");
    if (i > 0 && !(t > config.t_grid[i - 1])) throw ConfigError("t_grid", "must be strictly ascending");
  }
  if (const auto* lumped = std::get_if<LumpedStart>(&config.start)) {
    if (lumped->k0 < 0) throw ConfigError("k0", "must be nonnegative");
  } else {
    const auto& bit = std::get<BitLevelStart>(config.start);
    if (bit.x0.dim() != bit.y0.dim()) throw ConfigError("y0", "dimension differs from x0");
    if (const auto* params = bit.strategy.params(); params && params->dim() != bit.x0.dim()) {
      throw ConfigError("strategy", "dimension differs from the start vertices");
    }
  }
}

SampleSet sample_replicas(const ReplicaConfig& config) {
  validate_config(config);
  const std::size_t replicas = config.replicas;
  SampleSet out;
  out.tau.assign(replicas, 0.0);
  out.censored.assign(replicas, 0);
  std::vector<std::uint64_t> events(replicas, 0);

  auto run_one = [&](std::size_t r) {
    RngStream rng(config.seed, r);
    if (const auto* lumped = std::get_if<LumpedStart>(&config.start)) {
      const double tau = run_parity_chain(lumped->k0, rng);
      const bool censored = tau > config.t_max;
      out.tau[r] = censored ? config.t_max : tau;
      out.censored[r] = censored ? 1 : 0;
      events[r] = static_cast<std::uint64_t>(lumped->k0);
    } else {
      const auto& bit = std::get<BitLevelStart>(config.start);
      const CouplingSample s =
          run_coupling(bit.x0, bit.y0, bit.strategy, config.t_max, rng, config.debug_check);
      out.tau[r] = s.tau;
      out.censored[r] = s.censored ? 1 : 0;
      events[r] = s.events;
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config.parallelism, replicas));
  if (workers <= 1) {
    for (std::size_t r = 0; r < replicas; ++r) run_one(r);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t r = w; r < replicas; r += workers) run_one(r);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  out.n_censored = static_cast<std::size_t>(std::count(out.censored.begin(), out.censored.end(), 1));
  out.max_events = events.empty() ? 0 : *std::max_element(events.begin(), events.end());
  return out;
}

SimReport summarize(const SampleSet& samples, std::span<const double> t_grid, std::uint64_t seed) {
  SimReport report;
  const std::size_t n = samples.tau.size();
  report.replicas = n;
  report.seed = seed;
  report.censored = samples.n_censored;
  report.max_events = samples.max_events;
  if (n == 0) return report;
  const double dn = static_cast<double>(n);
  report.censored_fraction = static_cast<double>(samples.n_censored) / dn;
  report.dkw_epsilon = stats::dkw_epsilon(n, 0.99);

  // Censored replicas count as tau > t for every grid t up to and including t_max.
  std::vector<double> sorted;
  sorted.reserve(n - samples.n_censored);
  double t_max = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (samples.censored[r]) {
      t_max = samples.tau[r];
    } else {
      sorted.push_back(samples.tau[r]);
    }
  }
  std::sort(sorted.begin(), sorted.end());
  report.tail.reserve(t_grid.size());
  for (const double t : t_grid) {
    auto above = static_cast<std::size_t>(sorted.end() -
                                          std::upper_bound(sorted.begin(), sorted.end(), t));
    if (t <= t_max) above += samples.n_censored;
    const double p = static_cast<double>(above) / dn;
    report.tail.push_back({t, p, 1.959963984540054 * std::sqrt(p * (1.0 - p) / dn)});
  }

  if (report.censored_fraction <= kMaxCensoredFraction) {
    // Summation in stream-id order keeps the result independent of parallelism.
    double mean = 0.0;
    for (const double v : samples.tau) mean += v;
    mean /= dn;
    double ss = 0.0;
    for (const double v : samples.tau) ss += (v - mean) * (v - mean);
    report.mean_tau = mean;
    report.se = n > 1 ? std::sqrt(ss / (dn - 1.0) / dn) : 0.0;
  }
  return report;
}

SimReport run_replicas(const ReplicaConfig& config) {
  const SampleSet samples = sample_replicas(config);
  return summarize(samples, config.t_grid, config.seed);
}

}  // namespace hqc
