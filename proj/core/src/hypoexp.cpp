#include <cmath>
#include <stdexcept>

#include "hqc/analytic.hpp"

namespace hqc {

HypoexpLaw hypoexp_law(int k) {
  if (k < 0) throw std::invalid_argument("hypoexp_law: k must be nonnegative");
  HypoexpLaw law;
  law.k = k;
  const int m = k / 2;
  for (int i = 1; i <= m; ++i) law.rates.push_back(2.0 * i);
  if (k % 2 == 1) law.rates.push_back(4.0 * m + 2.0);

  // c_i = prod_{j != i} r_j / (r_j - r_i)
  law.coeffs.resize(law.rates.size());
  for (std::size_t i = 0; i < law.rates.size(); ++i) {
    long double c = 1.0L;
    for (std::size_t j = 0; j < law.rates.size(); ++j) {
      if (j != i) {
        c *= static_cast<long double>(law.rates[j]) /
             (static_cast<long double>(law.rates[j]) - law.rates[i]);
      }
    }
    law.coeffs[i] = static_cast<double>(c);
  }
  return law;
}

double HypoexpLaw::tail(double t) const {
  if (rates.empty()) return 0.0;
  long double s = 0.0L;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    s += static_cast<long double>(coeffs[i]) * std::exp(-static_cast<long double>(rates[i]) * t);
  }
  return static_cast<double>(s);
}

double HypoexpLaw::tail_dt(double t) const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    s -= static_cast<long double>(coeffs[i]) * rates[i] *
         std::exp(-static_cast<long double>(rates[i]) * t);
  }
  return static_cast<double>(s);
}

double HypoexpLaw::mean() const {
  double s = 0.0;
  for (const double r : rates) s += 1.0 / r;
  return s;
}

}  // namespace hqc
