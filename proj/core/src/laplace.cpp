#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "hqc/analytic.hpp"

namespace hqc {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
}

// log prod_{i=1}^m 2i / (2i + alpha)
long double log_phi(int m, double alpha) {
  long double s = 0.0L;
  for (int i = 1; i <= m; ++i) s -= std::log1p(static_cast<long double>(alpha) / (2.0L * i));
  return s;
}

}  // namespace

double phi_laplace(int m, double alpha) {
  check_alpha(alpha);
  if (m < 0) throw std::invalid_argument("phi_laplace: m must be nonnegative");
  return static_cast<double>(std::exp(log_phi(m, alpha)));
}

double vhat_laplace(int k, double alpha) {
  check_alpha(alpha);
  if (k <= 0) return 0.0;
  const int m = k / 2;
  long double log_transform = log_phi(m, alpha);  // log E[exp(-alpha tau_hat)]
  if (k % 2 == 1) {
    const long double rate = 4.0L * m + 2.0L;
    log_transform -= std::log1p(static_cast<long double>(alpha) / rate);
  }
  return static_cast<double>(-std::expm1(log_transform) / alpha);
}

double increment_laplace(int k, double alpha) {
  return vhat_laplace(k, alpha) - vhat_laplace(k - 1, alpha);
}

double vhat_laplace_quadrature(int k, double alpha) {
  check_alpha(alpha);
  if (k <= 0) return 0.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [k, alpha](double t) { return std::exp(-alpha * t) * vhat(k, t); };
  return integrator.integrate(f, 1e-13);
}

double LaplaceResiduals::max_abs() const {
  double r = std::max({std::abs(imp_v1), std::abs(imp_v2), std::abs(d_odd)});
  if (d_even) r = std::max(r, std::abs(*d_even));
  if (ident) r = std::max(r, std::abs(*ident));
  return r;
}

LaplaceResiduals check_laplace_identities(int m, double alpha) {
  check_alpha(alpha);
  if (m < 1) throw std::invalid_argument("check_laplace_identities: m must be >= 1");
  const auto V = [alpha](int k) { return vhat_laplace(k, alpha); };
  const auto D = [alpha](int k) { return increment_laplace(k, alpha); };
  const double dm = m;

  LaplaceResiduals r;
  r.imp_v1 = 1.0 - alpha * V(2 * m) + 2.0 * dm * (V(2 * m - 2) - V(2 * m));
  r.imp_v2 = 1.0 - alpha * V(2 * m - 1) + 2.0 * (2.0 * dm - 1.0) * (V(2 * m - 2) - V(2 * m - 1));
  if (m >= 2) {
    r.d_even = D(2 * m - 1) - D(2 * m) - (2.0 + alpha) / (2.0 * dm - 2.0) * D(2 * m);
    r.ident = (2.0 * dm - 2.0) * D(2 * m - 1) - (2.0 * dm + alpha) * D(2 * m);
  } else {
    r.notes.push_back("d_even and ident skipped at m=1: denominator 2m-2 vanishes; D(2) = " +
                      std::to_string(D(2)));
  }
  r.d_odd = D(2 * m + 1) - D(2 * m) - 2.0 / (4.0 * dm + 2.0 + alpha) * (D(2 * m - 1) - D(2 * m));
  return r;
}

}  // namespace hqc
