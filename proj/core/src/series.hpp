#pragma once

// Log-space helpers shared by the closed-form modules.

#include <cmath>
#include <limits>

namespace hqc::detail {

using Wide = long double;

inline Wide log_choose(int n, int k) {
  return std::lgamma(static_cast<Wide>(n) + 1) - std::lgamma(static_cast<Wide>(k) + 1) -
         std::lgamma(static_cast<Wide>(n - k) + 1);
}

/// a * log_p + b * log_q with 0 * (-inf) taken as 0, so p^0 = 1 even at p = 0.
inline Wide log_monomial(int a, Wide log_p, int b, Wide log_q) {
  Wide s = 0;
  if (a != 0) s += static_cast<Wide>(a) * log_p;
  if (b != 0) s += static_cast<Wide>(b) * log_q;
  return s;
}

/// Accumulates exp(l_1) + exp(l_2) + ... for same-signed terms given by logs.
class LogSum {
 public:
  void add(Wide log_term) {
    if (log_term == -std::numeric_limits<Wide>::infinity()) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1;
      max_ = log_term;
    }
  }
  Wide value() const {
    return max_ == -std::numeric_limits<Wide>::infinity() ? 0 : sum_ * std::exp(max_);
  }

 private:
  Wide max_ = -std::numeric_limits<Wide>::infinity();
  Wide sum_ = 0;
};

/// Neumaier compensated summation for mixed-sign terms.
class CompensatedSum {
 public:
  void add(Wide x) {
    const Wide t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Wide value() const { return sum_ + c_; }

 private:
  Wide sum_ = 0;
  Wide c_ = 0;
};

/// q = exp(-2t) and p = 1 - q, as logs.
struct TimePoint {
  Wide log_p;
  Wide log_q;
  Wide q;
};

inline TimePoint time_point(double t) {
  const Wide two_t = 2 * static_cast<Wide>(t);
  const Wide q = std::exp(-two_t);
  const Wide p = -std::expm1(-two_t);
  return {p > 0 ? std::log(p) : -std::numeric_limits<Wide>::infinity(), -two_t, q};
}

}  // namespace hqc::detail

namespace hqc::detail {

// Extended-range versions of vhat_increment and parity_gap (analytic.cpp).
// long double keeps terms like e^(-4000) representable, so signs survive
// where the double results underflow to zero.
Wide increment_wide(int k, double t);
Wide parity_gap_wide(int k, double t);

}  // namespace hqc::detail
