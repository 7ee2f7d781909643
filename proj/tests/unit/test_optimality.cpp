#include <gtest/gtest.h>

#include <cmath>

#include "hqc/analytic.hpp"
#include "hqc/grid.hpp"
#include "hqc/strategy.hpp"

namespace hqc {
namespace {

LambdaVector make_lambda(int k, int n, double down2, double down1, double stay, double up1,
                         double up2) {
  LambdaVector l;
  l.k = k;
  l.n = n;
  l.at(-2) = down2;
  l.at(-1) = down1;
  l.at(0) = stay;
  l.at(1) = up1;
  l.at(2) = up2;
  return l;
}

// sum_m lambda(k,k+m) [vhat(k,t) - vhat(k+m,t)] straight from the tails.
double objective(const LambdaVector& l, double t) {
  double s = 0.0;
  for (int m = -2; m <= 2; ++m) s += l.at(m) * (vhat(l.k, t) - vhat(l.k + m, t));
  return s;
}

// Brute-force maximum of the objective over a grid on L_n.
double grid_maximum(int k, int n, double t, int steps) {
  double best = -1e300;
  for (int a = 0; a <= steps; ++a) {
    const double down2 = k * double(a) / steps;
    for (int b = 0; b <= steps; ++b) {
      const double down1 = 2.0 * (k - down2) * double(b) / steps;
      const double rest = n - down2 - 0.5 * down1;
      for (int c = 0; c <= steps; ++c) {
        for (int d = 0; c + d <= steps; ++d) {
          const double up1 = 2.0 * rest * double(c) / steps;
          const double up2 = rest * double(d) / steps;
          const double stay = rest - 0.5 * up1 - up2;
          best = std::max(best, objective(make_lambda(k, n, down2, down1, stay, up1, up2), t));
        }
      }
    }
  }
  return best;
}

TEST(GeneratorApply, Examples) {
  for (const double t : {0.1, 0.5, 2.0}) {
    const auto even = optimal_lambda(4, 4);
    EXPECT_NEAR(generator_apply(even, t), -4 * std::exp(-2 * t) + 4 * std::exp(-4 * t), 1e-15);
    EXPECT_NEAR(generator_apply(even, t), vhat_dt(4, t), 1e-15);

    const auto odd = optimal_lambda(3, 3);
    EXPECT_NEAR(generator_apply(odd, t), 6 * (vhat(2, t) - vhat(3, t)), 1e-15);
    EXPECT_NEAR(generator_apply(odd, t), vhat_dt(3, t), 1e-15);

    EXPECT_EQ(generator_apply(make_lambda(3, 5, 0, 0, 5, 0, 0), t), 0.0);
  }
}

TEST(GeneratorApply, MatchesTailDifferences) {
  const auto l = make_lambda(5, 9, 1.0, 2.0, 3.5, 3.0, 2.0);
  ASSERT_FALSE(ln_violation(l).has_value());
  for (const double t : {0.2, 1.0, 3.0}) {
    double direct = 0.0;
    for (int m = -2; m <= 2; ++m) direct += l.at(m) * (vhat(5 + m, t) - vhat(5, t));
    EXPECT_NEAR(generator_apply(l, t), direct, 1e-14);
  }
}

TEST(GeneratorApply, RejectsPointsOutsidePolytope) {
  try {
    generator_apply(make_lambda(2, 4, 3, 0, 1, 0, 0), 1.0);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("down-rate budget"), std::string::npos);
  }
  EXPECT_THROW(generator_apply(make_lambda(2, 4, 2, 0, 1, 0, 0), 1.0), ConstraintViolation);
  EXPECT_THROW(generator_apply(make_lambda(2, 4, 2, 0, 3, -1, 0), 1.0), ConstraintViolation);
}

TEST(OptimalLambda, AgreesWithStrategyRates) {
  const std::size_t n = 9;
  for (std::size_t k = 0; k <= n; ++k) {
    Vertex y(n);
    for (std::size_t i = 1; i <= k; ++i) y.toggle(i);
    const auto s = make_state(Vertex(n), y);
    const auto from_q = lambda_rates(optimal_q(s), s);
    const auto closed = optimal_lambda(static_cast<int>(k), static_cast<int>(n));
    for (int m = -2; m <= 2; ++m) EXPECT_NEAR(from_q.at(m), closed.at(m), 1e-12) << k << " " << m;
  }
}

TEST(BellmanResidual, Examples) {
  EXPECT_LT(bellman_residual(4, 0.5), 1e-15);
  for (const double t : {0.01, 1.0, 5.0}) {
    EXPECT_NEAR(generator_apply(optimal_lambda(1, 1), t), -2 * std::exp(-2 * t), 1e-16);
    EXPECT_LT(bellman_residual(1, t), 1e-15);
  }
  EXPECT_LT(bellman_residual(7, 1.0), 1e-12);
  EXPECT_THROW(bellman_residual(0, 1.0), std::invalid_argument);
}

TEST(BellmanResidual, SmallOnFullGrid) {
  double worst = 0.0;
  for (int k = 1; k <= 200; ++k) {
    for (const double t : log_grid(1e-3, 20.0, 50)) worst = std::max(worst, bellman_residual(k, t));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(MaximizeOverLn, EvenExample) {
  const auto r = maximize_over_ln(2, 0.5, 4);
  EXPECT_TRUE(r.unique());
  EXPECT_EQ(r.argmax.at(-2), 2.0);
  EXPECT_EQ(r.argmax.at(-1), 0.0);
  EXPECT_EQ(r.argmax.at(0), 2.0);
  EXPECT_EQ(r.argmax.at(1), 0.0);
  EXPECT_EQ(r.argmax.at(2), 0.0);
  EXPECT_NEAR(r.max_value, 2 * vhat(2, 0.5), 1e-15);
  EXPECT_NEAR(r.max_value, 0.7357589, 1e-7);
  EXPECT_NEAR(grid_maximum(2, 4, 0.5, 12), r.max_value, 1e-12);
}

TEST(MaximizeOverLn, OddExample) {
  for (const double t : {0.05, 0.5, 3.0}) {
    const auto r = maximize_over_ln(3, t, 5);
    EXPECT_TRUE(r.unique());
    EXPECT_EQ(r.argmax.at(-1), 6.0);
    EXPECT_EQ(r.argmax.at(-2), 0.0);
    EXPECT_NEAR(r.max_value, 6 * (vhat(3, t) - vhat(2, t)), 1e-14);
    EXPECT_GE(r.max_value, 0.0);
    EXPECT_NEAR(grid_maximum(3, 5, t, 12), r.max_value, 1e-12);
  }
}

TEST(MaximizeOverLn, DistanceOneIsDegenerate) {
  const auto r = maximize_over_ln(1, 0.7, 4);
  EXPECT_FALSE(r.unique());
  EXPECT_NEAR(r.max_value, 2 * vhat(1, 0.7), 1e-15);
  bool has_up = false;
  for (const auto& l : r.maximizers) {
    has_up = has_up || l.at(1) > 0.0;
    EXPECT_NEAR(objective(l, 0.7), r.max_value, 1e-15);
  }
  EXPECT_TRUE(has_up);
  EXPECT_EQ(r.argmax.at(1), 0.0);
  EXPECT_EQ(r.argmax.at(-1), 2.0);
}

TEST(MaximizeOverLn, AgreesWithGridSearch) {
  for (int k = 1; k <= 6; ++k) {
    for (const double t : {0.02, 0.4, 2.0}) {
      const auto r = maximize_over_ln(k, t, 7);
      // Vertices of L_n lie on the grid, so the two maxima coincide.
      EXPECT_NEAR(grid_maximum(k, 7, t, 8), r.max_value, 1e-12) << k << " " << t;
    }
  }
}

TEST(MaximizeOverLn, ArgmaxIsOptimalStrategyOnGrid) {
  for (int k = 2; k <= 200; ++k) {
    for (const double t : log_grid(1e-3, 20.0, 50)) {
      const auto r = maximize_over_ln(k, t, 200);
      ASSERT_TRUE(r.unique()) << k << " " << t;
      EXPECT_EQ(r.argmax.at(1), 0.0);
      EXPECT_EQ(r.argmax.at(2), 0.0);
      EXPECT_EQ(r.argmax.at(-1), k % 2 == 1 ? 2.0 * k : 0.0);
      EXPECT_EQ(r.argmax.down_budget(), k);
      EXPECT_GE(r.max_value, 0.0);
    }
  }
}

TEST(MaximizeOverLn, RejectsBadArguments) {
  EXPECT_THROW(maximize_over_ln(0, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(maximize_over_ln(4, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(maximize_over_ln(2, -1.0, 3), std::domain_error);
}

}  // namespace
}  // namespace hqc
