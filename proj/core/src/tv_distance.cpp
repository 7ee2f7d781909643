#include "hqc/tv_distance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "hqc/analytic.hpp"
#include "series.hpp"

namespace hqc {
namespace {

using detail::Wide;

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
}

// Root of a decreasing function f with f(0) = 1 > level.
template <class F>
double solve_decreasing(F f, double level) {
  double hi = 1.0;
  while (f(hi) > level) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("level crossing not bracketed");
  }
  auto g = [&](double t) { return f(t) - level; };
  auto done = [](double a, double b) { return b - a < 1e-10; };
  const auto [a, b] = boost::math::tools::bisect(g, 0.0, hi, done);
  return 0.5 * (a + b);
}

}  // namespace

double tv(int k, double t) {
  if (k < 0) throw std::invalid_argument("tv: k must be nonnegative");
  if (!(t >= 0.0)) throw std::domain_error("t must be nonnegative");
  if (k == 0) return 0.0;
  if (t == 0.0) return 1.0;
  // p = P(coordinate differs from its start) = (1 - e^-2t)/2, q = 1 - p.
  // Pairing w with k - w gives
  //   tv = sum_{w < k/2} C(k,w) p^w q^(k-w) (1 - (p/q)^(k-2w)),  p/q = tanh t.
  const Wide e = std::exp(-2 * static_cast<Wide>(t));
  const Wide log_p = std::log(-std::expm1(-2 * static_cast<Wide>(t)) / 2);
  const Wide log_q = std::log1p(e) - std::log(Wide{2});
  const Wide log_ratio = std::log1p(-e) - std::log1p(e);
  detail::CompensatedSum sum;
  for (int w = 0; 2 * w < k; ++w) {
    const Wide log_term = detail::log_choose(k, w) + detail::log_monomial(w, log_p, k - w, log_q);
    sum.add(std::exp(log_term) * -std::expm1(static_cast<Wide>(k - 2 * w) * log_ratio));
  }
  return static_cast<double>(sum.value());
}

CouplingGap coupling_gap(int k, double t) {
  if (k > kClosedFormMaxK) {
    throw std::out_of_range("k=" + std::to_string(k) +
                            " is beyond the closed-form range; estimate vhat with the lumped "
                            "Monte Carlo chain (simulate --lumped) instead");
  }
  CouplingGap g;
  g.tv = tv(k, t);
  g.vhat = vhat(k, t);
  g.gap = g.vhat - g.tv;
  return g;
}

double half_mixing_time(int n, int k, double level) {
  check_level(level);
  if (k < 1 || k > n) throw std::invalid_argument("half_mixing_time: need 1 <= k <= n");
  return solve_decreasing([k](double t) { return tv(k, t); }, level);
}

double vhat_level_time(int k, double level) {
  check_level(level);
  if (k < 1) throw std::invalid_argument("vhat_level_time: k must be >= 1");
  return solve_decreasing([k](double t) { return vhat(k, t); }, level);
}

double expected_tau_hat(int k) {
  if (k < 0) throw std::invalid_argument("expected_tau_hat: k must be nonnegative");
  const int m = k / 2;
  Wide s = 0;
  for (int i = m; i >= 1; --i) s += Wide{1} / (2 * static_cast<Wide>(i));
  if (k % 2 == 1) s += Wide{1} / (4 * static_cast<Wide>(m) + 2);
  return static_cast<double>(s);
}

TvCurve tv_curve(int n, int k, const std::vector<double>& t_grid) {
  if (k < 0 || k > n) throw std::invalid_argument("tv_curve: need 0 <= k <= n");
  TvCurve c{n, k, {}};
  c.samples.reserve(t_grid.size());
  for (const double t : t_grid) c.samples.emplace_back(t, tv(k, t));
  return c;
}

LevelCrossing level_crossing(int n, int k, double level) {
  LevelCrossing c;
  c.k = k;
  c.level = level;
  c.t_tv = half_mixing_time(n, k, level);
  c.t_vhat = vhat_level_time(k, level);
  c.ratio = c.t_vhat / c.t_tv;
  return c;
}

}  // namespace hqc
