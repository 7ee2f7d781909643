#pragma once

#include <utility>
#include <vector>

namespace hqc {

/// Total variation between the laws of X_t and Y_t when X_0, Y_0 differ in k
/// coordinates. Coordinates where they agree contribute nothing, so the
/// dimension drops out.
double tv(int k, double t);

struct CouplingGap {
  double tv = 0.0;
  double vhat = 0.0;
  double gap = 0.0;  ///< vhat - tv, nonnegative by the coupling inequality
};

/// Throws std::out_of_range beyond the closed-form range of vhat; larger k
/// should be estimated with the lumped Monte Carlo chain instead.
CouplingGap coupling_gap(int k, double t);

/// Time t* with tv(k, t*) = level, to within 1e-9 in t. Requires k <= n and
/// 0 < level < 1.
double half_mixing_time(int n, int k, double level);

/// Time t* with vhat(k, t*) = level, to within 1e-9 in t.
double vhat_level_time(int k, double level);

/// E[tau_hat | N_0 = k]: H_m / 2 for k = 2m, plus 1/(4m+2) for k = 2m+1.
double expected_tau_hat(int k);

struct TvCurve {
  int n = 0;
  int k = 0;
  std::vector<std::pair<double, double>> samples;  ///< (t, tv)
};

TvCurve tv_curve(int n, int k, const std::vector<double>& t_grid);

/// Where the optimal co-adapted coupling and the maximal coupling cross a
/// given level. ratio = t_vhat / t_tv.
struct LevelCrossing {
  int k = 0;
  double level = 0.0;
  double t_vhat = 0.0;
  double t_tv = 0.0;
  double ratio = 0.0;
};

LevelCrossing level_crossing(int n, int k, double level);

}  // namespace hqc
