#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lfc/sim.hpp"

namespace lfc {

/// Exponential decay fitted on log-norms by ordinary least squares.
struct RateFit {
  double lambda = 0.0;     // decay rate (positive slope magnitude)
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  int n_samples = 0;
};

/// Floor under which samples are dropped before taking logs.
inline constexpr double kRateFitFloor = 1e-12;

/// Fits log(norm) = a - lambda * t over samples with t in [t_start, t_end]
/// and norm > floor. Throws if fewer than 10 samples survive.
RateFit fit_rate(const std::vector<double>& times,
                 const std::vector<double>& norms, double t_start, double t_end,
                 double floor = kRateFitFloor);

/// Tail-half window of the resolvable part of a decaying series: ends where
/// the series last exceeds 10x the floor, starts halfway there. Falls back
/// to [T/2, T] when the whole series stays resolvable.
std::pair<double, double> tail_window(const std::vector<double>& times,
                                      const std::vector<double>& norms,
                                      double floor = kRateFitFloor);

/// V(t) = 1/2 sum_i (s_i^2 + theta_tilde_i^T Lambda_i theta_tilde_i),
/// recomputed from the log (the true theta is diagnostic-only input).
Eigen::VectorXd compute_V(const TrajectoryLog& log, const SimConfig& cfg);

/// Observer/plant error coordinates z_si = x_si - x_hat_si, s = 1..r-1,
/// plus the defect of their governing dynamics z' = A z + u_bar measured
/// by centered finite differences. Residual entries are NaN where the
/// stencil is irregular or crosses a switching instant.
struct ZDiagnostics {
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> z;         // per agent, (r-1) x n
  std::vector<Eigen::VectorXd> residual;  // per agent, n
};

ZDiagnostics z_diagnostics(const TrajectoryLog& log, const SimConfig& cfg);

}  // namespace lfc
