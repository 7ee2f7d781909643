#include "hqc/analytic.hpp"

#include <string>

#include "series.hpp"

namespace hqc {
namespace {

using detail::LogSum;
using detail::TimePoint;
using detail::Wide;

void check_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("t must be nonnegative, got " + std::to_string(t));
}

void check_k(int k) {
  if (k > kClosedFormMaxK) {
    throw std::out_of_range("k=" + std::to_string(k) + " exceeds the closed-form limit " +
                            std::to_string(kClosedFormMaxK));
  }
}

// 1 - p^m for m >= 1.
Wide one_minus_p_pow(int m, const TimePoint& tp) {
  return -std::expm1(static_cast<Wide>(m) * std::log1p(-tp.q));
}

// G_m = sum_{j=0}^m m C(m,j)/(m+j) p^(m+j) q^(m+1-j): the part of
// vhat(2m+1) beyond vhat(2m), for m >= 1. With m = 0 the same role is
// played by q.
Wide odd_excess(int m, const TimePoint& tp) {
  if (m == 0) return tp.q;
  LogSum sum;
  const Wide log_m = std::log(static_cast<Wide>(m));
  for (int j = 0; j <= m; ++j) {
    sum.add(log_m + detail::log_choose(m, j) - std::log(static_cast<Wide>(m + j)) +
            detail::log_monomial(m + j, tp.log_p, m + 1 - j, tp.log_q));
  }
  return sum.value();
}

// vhat(2m) - vhat(2m-1) = sum_{j=1}^{m-1} C(m-1,j) j/(m-1+j) p^(m-1+j) q^(m-j).
Wide even_increment(int m, const TimePoint& tp) {
  LogSum sum;
  for (int j = 1; j <= m - 1; ++j) {
    sum.add(detail::log_choose(m - 1, j) + std::log(static_cast<Wide>(j)) -
            std::log(static_cast<Wide>(m - 1 + j)) +
            detail::log_monomial(m - 1 + j, tp.log_p, m - j, tp.log_q));
  }
  return sum.value();
}

}  // namespace

double vhat(int k, double t) {
  check_time(t);
  check_k(k);
  if (k <= 0) return 0.0;
  const TimePoint tp = detail::time_point(t);
  const int m = k / 2;
  if (k % 2 == 0) return static_cast<double>(one_minus_p_pow(m, tp));
  if (m == 0) return static_cast<double>(tp.q);
  return static_cast<double>(one_minus_p_pow(m, tp) + odd_excess(m, tp));
}

double vhat_dt(int k, double t) {
  check_time(t);
  check_k(k);
  if (k <= 0) return 0.0;
  const TimePoint tp = detail::time_point(t);
  const int m = k / 2;
  // d/dt p^a q^b = 2 p^(a-1) q^b (a q - b p) = 2a p^(a-1) q^(b+1) - 2b p^a q^b.
  if (k % 2 == 0) {
    return static_cast<double>(-2 * static_cast<Wide>(m) *
                               std::exp(detail::log_monomial(m - 1, tp.log_p, 1, tp.log_q)));
  }
  if (m == 0) return static_cast<double>(-2 * tp.q);
  detail::CompensatedSum sum;
  sum.add(-2 * static_cast<Wide>(m) * std::exp(detail::log_monomial(m - 1, tp.log_p, 1, tp.log_q)));
  const Wide log_m = std::log(static_cast<Wide>(m));
  for (int j = 0; j <= m; ++j) {
    const Wide log_coeff = log_m + detail::log_choose(m, j) - std::log(static_cast<Wide>(m + j));
    const int a = m + j;
    const int b = m + 1 - j;
    sum.add(2 * static_cast<Wide>(a) *
            std::exp(log_coeff + detail::log_monomial(a - 1, tp.log_p, b + 1, tp.log_q)));
    sum.add(-2 * static_cast<Wide>(b) *
            std::exp(log_coeff + detail::log_monomial(a, tp.log_p, b, tp.log_q)));
  }
  return static_cast<double>(sum.value());
}

namespace detail {

Wide increment_wide(int k, double t) {
  check_time(t);
  check_k(k);
  if (k <= 0) return 0;
  const TimePoint tp = time_point(t);
  const int m = k / 2;
  if (k % 2 == 1) return odd_excess(m, tp);
  return even_increment(m, tp);
}

Wide parity_gap_wide(int k, double t) {
  check_time(t);
  check_k(k);
  if (k <= 0) return 0;
  const TimePoint tp = time_point(t);
  if (k == 1) return tp.q;
  if (k == 2) return -tp.q;
  const int m = k / 2;
  LogSum sum;
  if (k % 2 == 1) {
    if (m == 1) {
      sum.add(log_monomial(1, tp.log_p, 2, tp.log_q));
      sum.add(std::log(Wide{0.5}) + log_monomial(2, tp.log_p, 1, tp.log_q));
      return sum.value();
    }
    // Coefficients of p^(m+j) q^(m+1-j): 1/m at j = 0, then
    // C(m,j) (m-j) (jm + (m-1)(m-2)) / (m (m+j) (m+j-1) (m+j-2)).
    const Wide wm = m;
    sum.add(-std::log(wm) + log_monomial(m, tp.log_p, m + 1, tp.log_q));
    for (int j = 1; j < m; ++j) {
      const Wide wj = j;
      const Wide ratio = (wm - wj) * (wj * wm + (wm - 1) * (wm - 2)) /
                         (wm * (wm + wj) * (wm + wj - 1) * (wm + wj - 2));
      sum.add(log_choose(m, j) + std::log(ratio) +
              log_monomial(m + j, tp.log_p, m + 1 - j, tp.log_q));
    }
    return sum.value();
  }
  // Even k = 2m: -sum_j C(m-1,j) (m-1-j)/(m-1+j) p^(m-1+j) q^(m-j).
  for (int j = 0; j <= m - 2; ++j) {
    sum.add(log_choose(m - 1, j) + std::log(static_cast<Wide>(m - 1 - j)) -
            std::log(static_cast<Wide>(m - 1 + j)) +
            log_monomial(m - 1 + j, tp.log_p, m - j, tp.log_q));
  }
  return -sum.value();
}

}  // namespace detail

double vhat_increment(int k, double t) { return static_cast<double>(detail::increment_wide(k, t)); }

double theta(int m, double t) {
  if (m < 1) throw std::invalid_argument("theta: m must be >= 1");
  return vhat_increment(2 * m, t);
}

double parity_gap(int k, double t) { return static_cast<double>(detail::parity_gap_wide(k, t)); }

}  // namespace hqc
