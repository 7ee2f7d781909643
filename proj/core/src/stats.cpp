#include "hqc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hqc::stats {

double dkw_epsilon(std::size_t samples, double confidence) {
  if (samples == 0 || !(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("dkw_epsilon: need samples >= 1 and confidence in (0,1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

double dkw_epsilon_one_sided(std::size_t samples, double alpha) {
  if (samples == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("dkw_epsilon_one_sided: need samples >= 1 and alpha in (0,1)");
  }
  return std::sqrt(std::log(1.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < sa.size() && ib < sb.size()) {
    const double t = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= t) ++ia;
    while (ib < sb.size() && sb[ib] <= t) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks_critical: need n, m >= 1 and alpha in (0,1)");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

double tail_fraction(std::span<const double> sorted, double t) {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

}  // namespace hqc::stats
