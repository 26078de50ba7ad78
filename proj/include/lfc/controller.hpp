#pragma once

#include <Eigen/Dense>

#include "lfc/plant.hpp"

namespace lfc {

/// Gains of the distributed adaptive law: the filter coefficients beta
/// (stable polynomial), the feedback gain k, and the adaptation gain
/// Lambda (symmetric positive definite).
struct ControllerParams {
  Eigen::VectorXd beta;   // r-1 coefficients
  double k = 0.0;
  Eigen::MatrixXd Lambda; // m x m
  bool allow_small_k = false;
};

/// k below this defeats the Lyapunov decrease argument; overridable via
/// allow_small_k.
inline constexpr double kMinFeedbackGain = 1.25;

void validate_controller_params(const ControllerParams& p);

/// Routh-Hurwitz test for lambda^{d} + beta_1 lambda^{d-1} + ... + beta_d
/// with d = beta.size(). Degree 0 is vacuously stable. No root finding.
bool hurwitz_check(const Eigen::VectorXd& beta);

struct FilteredError {
  double p_ri = 0.0;
  double p_ri_dot = 0.0;
  double s = 0.0;
};

/// Filtered tracking error built from the observer estimate:
///   p_ri = x_hat_r - sum_j beta_j (x_{r-j} - x_hat_{r-j})
///   s    = x_r - p_ri
/// x_hat_dot must be the observer derivative of x_hat at the same instant;
/// p_ri_dot substitutes the chain identity x_s' = x_{s+1}.
FilteredError compute_p_and_s(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x_hat,
                              const Eigen::VectorXd& x_hat_dot,
                              const ControllerParams& params);

struct ControlOutput {
  double u = 0.0;
  Eigen::VectorXd theta_hat_dot;
};

/// Certainty-equivalence control and adaptation:
///   u            = -f^T theta_hat - d(w_hat) - k s + p_ri_dot
///   theta_hat'   = Lambda^{-1} f s
/// The disturbance is evaluated at the estimate w_hat, never the true w.
ControlOutput control_and_adaptation(const Eigen::VectorXd& f,
                                     const DisturbanceFn& disturbance,
                                     const Eigen::VectorXd& w_hat, double s,
                                     double p_ri_dot,
                                     const Eigen::VectorXd& theta_hat,
                                     const ControllerParams& params);

/// Oracle baseline: same law with the true leader state in place of the
/// estimates (p_ri built from x0, disturbance evaluated at the true w).
ControlOutput decentralized_baseline(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& x0_dot,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& theta_hat,
                                     const ControllerParams& params,
                                     const Eigen::VectorXd& f,
                                     const DisturbanceFn& disturbance);

}  // namespace lfc
