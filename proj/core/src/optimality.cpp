#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/rational.hpp>

#include "hqc/analytic.hpp"
#include "series.hpp"

namespace hqc {
namespace {

using detail::Wide;
using Rational = boost::rational<long long>;

// Objective terms are expressed in the basis (d(k), gap(k), d(k+1), d(k+2)):
//   vhat(k) - vhat(k-1) = d(k)
//   vhat(k) - vhat(k-2) = 2 d(k) - gap(k)
//   vhat(k) - vhat(k+1) = -d(k+1)
//   vhat(k) - vhat(k+2) = -d(k+1) - d(k+2)
// Every basis value is computed without cancellation, so comparing two
// vertices through their exact coefficient differences gets the sign right.
struct Basis {
  std::array<Wide, 4> v{};
};

Basis basis_at(int k, double t) {
  Basis b;
  b.v[0] = detail::increment_wide(k, t);
  b.v[1] = detail::parity_gap_wide(k, t);
  b.v[2] = detail::increment_wide(k + 1, t);
  b.v[3] = detail::increment_wide(k + 2, t);
  return b;
}

// Variables: lambda(k,k-2), lambda(k,k-1), lambda(k,k), lambda(k,k+1),
// lambda(k,k+2), slack. Doubled constraint rows keep coefficients integral.
constexpr std::array<std::array<long long, 6>, 2> kRows{{{2, 1, 0, 0, 0, 2}, {2, 1, 2, 1, 2, 0}}};
constexpr std::array<std::array<long long, 4>, 5> kObjective{{
    {2, -1, 0, 0},   // m = -2
    {1, 0, 0, 0},    // m = -1
    {0, 0, 0, 0},    // m = 0
    {0, 0, -1, 0},   // m = +1
    {0, 0, -1, -1},  // m = +2
}};

struct Vertex5 {
  std::array<Rational, 6> x{};
  std::array<Rational, 4> coeff{};
};

std::array<Rational, 4> objective_coeffs(const std::array<Rational, 6>& x) {
  std::array<Rational, 4> c{};
  for (int v = 0; v < 5; ++v) {
    for (int b = 0; b < 4; ++b) c[b] += x[v] * kObjective[v][b];
  }
  return c;
}

std::vector<Vertex5> enumerate_vertices(int k, int n) {
  const std::array<long long, 2> rhs{2LL * k, 2LL * n};
  std::vector<Vertex5> out;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const long long det = kRows[0][a] * kRows[1][b] - kRows[0][b] * kRows[1][a];
      if (det == 0) continue;
      Vertex5 v;
      v.x[a] = Rational(rhs[0] * kRows[1][b] - rhs[1] * kRows[0][b], det);
      v.x[b] = Rational(kRows[0][a] * rhs[1] - kRows[1][a] * rhs[0], det);
      if (v.x[a].numerator() < 0 || v.x[b].numerator() < 0) continue;
      if (std::any_of(out.begin(), out.end(), [&](const Vertex5& w) { return w.x == v.x; })) {
        continue;
      }
      v.coeff = objective_coeffs(v.x);
      out.push_back(v);
    }
  }
  return out;
}

Wide dot_diff(const std::array<Rational, 4>& a, const std::array<Rational, 4>& b,
              const Basis& basis) {
  detail::CompensatedSum s;
  for (int i = 0; i < 4; ++i) {
    const Rational d = a[i] - b[i];
    if (d.numerator() != 0) {
      s.add(static_cast<Wide>(d.numerator()) / static_cast<Wide>(d.denominator()) * basis.v[i]);
    }
  }
  return s.value();
}

Wide value_of(const std::array<Rational, 4>& c, const Basis& basis) {
  return dot_diff(c, {}, basis);
}

LambdaVector to_lambda(const Vertex5& v, int k, int n) {
  LambdaVector l;
  l.k = k;
  l.n = n;
  for (int m = -2; m <= 2; ++m) {
    const Rational& r = v.x[static_cast<std::size_t>(m + 2)];
    l.at(m) = static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
  }
  return l;
}

}  // namespace

double generator_apply(const LambdaVector& lambda, double t) {
  if (auto why = ln_violation(lambda)) throw ConstraintViolation(*why);
  const int k = lambda.k;
  const Wide dk = detail::increment_wide(k, t);
  const Wide dk1 = detail::increment_wide(k - 1, t);
  const Wide up1 = detail::increment_wide(k + 1, t);
  const Wide up2 = detail::increment_wide(k + 2, t);
  detail::CompensatedSum s;
  s.add(-lambda.at(-2) * (dk + dk1));
  s.add(-lambda.at(-1) * dk);
  s.add(lambda.at(1) * up1);
  s.add(lambda.at(2) * (up1 + up2));
  return static_cast<double>(s.value());
}

LambdaVector optimal_lambda(int k, int n) {
  if (k < 0 || k > n) throw std::invalid_argument("optimal_lambda: need 0 <= k <= n");
  LambdaVector l;
  l.k = k;
  l.n = n;
  if (k % 2 == 1) {
    l.at(-1) = 2.0 * k;
  } else {
    l.at(-2) = k;
  }
  l.at(0) = n - k;
  return l;
}

double bellman_residual(int k, double t) {
  if (k < 1) throw std::invalid_argument("bellman_residual: k must be >= 1");
  return std::abs(generator_apply(optimal_lambda(k, k), t) - vhat_dt(k, t));
}

LnMaximum maximize_over_ln(int k, double t, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("maximize_over_ln: need 1 <= k <= n");
  if (!(t >= 0.0)) throw std::domain_error("t must be nonnegative");
  const Basis basis = basis_at(k, t);
  const std::vector<Vertex5> vertices = enumerate_vertices(k, n);

  std::vector<const Vertex5*> best;
  for (const Vertex5& v : vertices) {
    if (best.empty()) {
      best.push_back(&v);
      continue;
    }
    const Wide delta = dot_diff(v.coeff, best.front()->coeff, basis);
    if (delta > 0) {
      best.assign(1, &v);
    } else if (delta == 0) {
      best.push_back(&v);
    }
  }

  LnMaximum result;
  result.vertices = vertices.size();
  for (const Vertex5* v : best) result.maximizers.push_back(to_lambda(*v, k, n));
  result.max_value = static_cast<double>(value_of(best.front()->coeff, basis));

  // Canonical choice among tied maximizers: no up-moves, and the optimal
  // strategy's own rates when those are among the maximizers.
  const LambdaVector reference = optimal_lambda(k, n);
  auto score = [&](const LambdaVector& l) {
    const bool no_up = l.at(1) == 0.0 && l.at(2) == 0.0;
    return (no_up ? 2 : 0) + (l.rate == reference.rate ? 1 : 0);
  };
  result.argmax = *std::max_element(
      result.maximizers.begin(), result.maximizers.end(),
      [&](const LambdaVector& a, const LambdaVector& b) { return score(a) < score(b); });
  return result;
}

}  // namespace hqc
