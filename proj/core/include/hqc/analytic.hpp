#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqc/lambda_vector.hpp"

namespace hqc {

/// Largest start distance accepted by the closed-form tail routines.
inline constexpr int kClosedFormMaxK = 1 << 16;

// Law of the optimal coupling time tau_hat started from distance k.
//
// tau_hat is a sum of independent exponentials E_1 + ... + E_m (rate 2i) for
// k = 2m, plus E_{2m+1} (rate 4m+2) for k = 2m+1. The first sum has the law
// of the maximum of m independent Exp(2) variables, which gives the tail in a
// form with no alternating binomial terms:
//
//   vhat(2m,   t) = 1 - p^m
//   vhat(2m+1, t) = 1 - p^m + sum_j m C(m,j)/(m+j) p^(m+j) q^(m+1-j)
//
// with q = exp(-2t), p = 1 - q. Tails, increments and parity gaps are sums of
// same-signed terms evaluated in log space, so they stay accurate to a few
// ulps even where vhat is within 1e-300 of 1 or of 0.

/// P(tau_hat > t | N_0 = k); 0 for k <= 0.
double vhat(int k, double t);

/// d/dt vhat(k, t), i.e. minus the density of tau_hat.
double vhat_dt(int k, double t);

/// d(k, t) = vhat(k, t) - vhat(k-1, t), evaluated without cancellation.
double vhat_increment(int k, double t);

/// P(E_1+...+E_m > t) - P(E_1+...+E_{m-1} + E_{2m-1} > t) with E_i ~ Exp(2i).
/// Identically zero for m = 1.
double theta(int m, double t);

/// 2[vhat(k) - vhat(k-1)] - [vhat(k) - vhat(k-2)] at time t. Computed from
/// an expansion whose terms all share the sign of the result.
double parity_gap(int k, double t);

/// Partial-fraction form of the same law: tail(t) = sum_i coeffs[i] e^(-rates[i] t).
/// The coefficients alternate in sign and grow like binomials, so this form is
/// only trustworthy for small k (roughly k <= 30 in double precision).
struct HypoexpLaw {
  int k = 0;
  std::vector<double> rates;
  std::vector<double> coeffs;

  double tail(double t) const;
  double tail_dt(double t) const;
  double mean() const;
};

HypoexpLaw hypoexp_law(int k);

// Laplace transforms. V(k, a) = int_0^inf e^(-a t) vhat(k, t) dt.

/// prod_{i=1}^m 2i / (2i + alpha)
double phi_laplace(int m, double alpha);
double vhat_laplace(int k, double alpha);
/// D(k, a) = V(k, a) - V(k-1, a), the transform of vhat_increment(k, .).
double increment_laplace(int k, double alpha);

/// Numerical quadrature of int_0^inf e^(-alpha t) vhat(k, t) dt.
double vhat_laplace_quadrature(int k, double alpha);

struct LaplaceResiduals {
  double imp_v1 = 0.0;
  double imp_v2 = 0.0;
  std::optional<double> d_even;  ///< absent for m = 1 (denominator 2m-2 vanishes)
  std::optional<double> ident;   ///< absent for m = 1
  double d_odd = 0.0;
  std::vector<std::string> notes;

  double max_abs() const;
};

/// Residuals of the transform identities implied by the optimal rates, for
/// the pair of levels (2m-1, 2m). All vanish in exact arithmetic.
LaplaceResiduals check_laplace_identities(int m, double alpha);

class ConstraintViolation : public std::invalid_argument {
 public:
  explicit ConstraintViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// sum_m lambda(k,k+m) [vhat(k+m,t) - vhat(k,t)]; throws ConstraintViolation
/// when lambda lies outside L_n.
double generator_apply(const LambdaVector& lambda, double t);

/// Rate bands of the optimal strategy at N = k in dimension n.
LambdaVector optimal_lambda(int k, int n);

/// |A v_hat - dv_hat/dt| for the optimal rate bands at (k, t).
double bellman_residual(int k, double t);

struct LnMaximum {
  LambdaVector argmax;                   ///< canonical maximizer (no up-moves when possible)
  double max_value = 0.0;
  std::vector<LambdaVector> maximizers;  ///< every maximizing vertex of L_n
  std::size_t vertices = 0;              ///< vertices enumerated
  bool unique() const { return maximizers.size() == 1; }
};

/// Maximizes sum_m lambda(k,k+m) [vhat(k,t) - vhat(k+m,t)] over L_n by exact
/// enumeration of the vertices of the polytope (rational coordinates).
LnMaximum maximize_over_ln(int k, double t, int n);

}  // namespace hqc
