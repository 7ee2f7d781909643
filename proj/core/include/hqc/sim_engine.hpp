#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hqc/hypercube.hpp"
#include "hqc/rng.hpp"
#include "hqc/strategy.hpp"

namespace hqc {

/// A joint jump X += e_i, Y += e_j (either index may be 0).
struct Event {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  friend bool operator==(const Event&, const Event&) = default;
};

struct StepResult {
  double dt = 0.0;
  Event event;
};

class FrozenState : public std::runtime_error {
 public:
  FrozenState() : std::runtime_error("frozen state") {}
};

/// One Gillespie step under an explicit QSpec: dt ~ Exp(R) with R the total
/// rate, (i, j) chosen with probability q_ij / R. The state is advanced in
/// place.
StepResult step(CouplingState& state, const QSpec& q, RngStream& rng);

/// Same law as step(state, parametric_q(state, params), rng), sampled
/// block-wise (matched vs unmatched, then a uniform index or pair) without
/// materializing the QSpec.
StepResult step(CouplingState& state, const StrategyParams& params, RngStream& rng);

/// Dispatches to the structural sampler for parametric strategies. With
/// debug_check the QSpec is also materialized and validated, and its
/// lambda bands are compared with the structural block rates.
StepResult step(CouplingState& state, const Strategy& strategy, RngStream& rng,
                bool debug_check = false);

struct CouplingSample {
  double tau = 0.0;  ///< first collision time, or t_max when censored
  bool censored = false;
  std::uint64_t events = 0;
};

CouplingSample run_coupling(const Vertex& x0, const Vertex& y0, const Strategy& strategy,
                            double t_max, RngStream& rng, bool debug_check = false);

using PathObserver = std::function<void(double t, const Event& event, const CouplingState& after)>;

/// Runs the coupled pair up to `horizon`, reporting every jump. When
/// stop_at_collision is set the path ends at the first time N hits 0.
/// Returns the final time reached.
double run_path(CouplingState& state, const Strategy& strategy, double horizon, RngStream& rng,
                bool stop_at_collision, const PathObserver& observer);

/// Number of jumps of each coordinate of X and of Y over [0, horizon].
struct MarginalCounts {
  double horizon = 0.0;
  std::vector<std::uint64_t> x_flips;  ///< index i-1 for coordinate i
  std::vector<std::uint64_t> y_flips;
};

MarginalCounts count_marginal_flips(const Vertex& x0, const Vertex& y0, const Strategy& strategy,
                                    double horizon, RngStream& rng);

/// Coupling time of the lumped chain N under the optimal strategy: odd k
/// moves to k-1 at rate 2k, even k to k-2 at rate k, 0 is absorbing.
double run_parity_chain(int k0, RngStream& rng);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct BitLevelStart {
  Vertex x0;
  Vertex y0;
  Strategy strategy;
};

struct LumpedStart {
  int k0 = 0;
};

struct ReplicaConfig {
  std::variant<LumpedStart, BitLevelStart> start;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_grid;
  unsigned parallelism = 1;
  double t_max = 1e4;
  bool debug_check = false;
};

void validate_config(const ReplicaConfig& config);

/// Raw per-replica results, indexed by stream id.
struct SampleSet {
  std::vector<double> tau;
  std::vector<std::uint8_t> censored;
  std::size_t n_censored = 0;
  std::uint64_t max_events = 0;
};

SampleSet sample_replicas(const ReplicaConfig& config);

struct TailPoint {
  double t = 0.0;
  double p = 0.0;           ///< empirical P(tau > t)
  double half_width = 0.0;  ///< pointwise 95% normal-approximation half-width
};

/// Largest tolerated censoring fraction before the mean is withheld.
inline constexpr double kMaxCensoredFraction = 1e-3;

struct SimReport {
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<TailPoint> tail;
  std::optional<double> mean_tau;
  std::optional<double> se;
  std::size_t censored = 0;
  double censored_fraction = 0.0;
  double dkw_epsilon = 0.0;  ///< simultaneous two-sided 99% band
  std::uint64_t max_events = 0;
};

SimReport summarize(const SampleSet& samples, std::span<const double> t_grid, std::uint64_t seed);
SimReport run_replicas(const ReplicaConfig& config);

}  // namespace hqc
