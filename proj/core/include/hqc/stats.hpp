#pragma once

#include <cstddef>
#include <span>

namespace hqc::stats {

/// Two-sided Dvoretzky-Kiefer-Wolfowitz half-width: with probability at
/// least `confidence`, sup_t |F_emp(t) - F(t)| <= epsilon.
double dkw_epsilon(std::size_t samples, double confidence);

/// One-sided DKW half-width at level alpha: P(sup_t (F - F_emp) > eps) <= alpha.
double dkw_epsilon_one_sided(std::size_t samples, double alpha);

/// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value c(alpha) * sqrt((n+m)/(n*m)).
double ks_critical(std::size_t n, std::size_t m, double alpha);

/// Fraction of samples strictly greater than t; `sorted` must be ascending.
double tail_fraction(std::span<const double> sorted, double t);

}  // namespace hqc::stats
