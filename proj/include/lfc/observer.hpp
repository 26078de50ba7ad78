#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lfc {

struct Digraph;

struct ObserverParams {
  double mu0 = 1.0;  // static-observer gain
  double mu1 = 1.0;  // S-estimate consensus gain
  double mu2 = 1.0;  // v-estimate consensus gain
};

void validate_observer_params(const ObserverParams& p);

/// Per-follower estimates of the leader's matrix and state.
struct ObserverState {
  Eigen::MatrixXd S_hat;  // q x q
  Eigen::VectorXd v_hat;  // q
};

struct ObserverError {
  Eigen::MatrixXd S_tilde;  // S_hat - S
  Eigen::VectorXd v_tilde;  // v_hat - v
};

ObserverError observer_error(const ObserverState& s, const Eigen::MatrixXd& S,
                             const Eigen::VectorXd& v);

struct ObserverDerivative {
  Eigen::MatrixXd S_hat_dot;
  Eigen::VectorXd v_hat_dot;
};

/// Derivatives of the adaptive estimator bank:
///   S_hat_i' = mu1 * sum_j a_ij (S_hat_j - S_hat_i)
///   v_hat_i' = S_hat_i v_hat_i + mu2 * sum_j a_ij (v_hat_j - v_hat_i)
/// with the leader contributing S_hat_0 = S and v_hat_0 = v as virtual
/// agent 0 in the neighbor sums.
std::vector<ObserverDerivative> adaptive_observer_derivative(
    const std::vector<ObserverState>& bank, const Digraph& g,
    const Eigen::MatrixXd& S, const Eigen::VectorXd& v, const ObserverParams& p);

/// Baseline estimator in which every follower knows the true S:
///   v_hat_i' = S v_hat_i + mu0 * sum_j a_ij (v_hat_j - v_hat_i).
std::vector<Eigen::VectorXd> static_observer_derivative(
    const std::vector<Eigen::VectorXd>& v_hats, const Digraph& g,
    const Eigen::MatrixXd& S, const Eigen::VectorXd& v, const ObserverParams& p);

/// Decomposed view of one follower's estimate: reference part, disturbance
/// part, the diagonal blocks of S_hat, and the estimated bottom row of the
/// companion block.
struct SplitEstimate {
  Eigen::VectorXd x_hat;      // first r components of v_hat
  Eigen::VectorXd w_hat;      // trailing n_w components
  Eigen::MatrixXd S_a_hat;    // leading r x r block
  Eigen::MatrixXd S_b_hat;    // trailing n_w x n_w block
  Eigen::VectorXd alpha_hat;  // bottom row of S_a_hat
};

SplitEstimate split_estimate(const ObserverState& s, int r, int n_w);

/// Consensus coupling terms x_dsi = mu2 * sum_j a_ij (x_hat_sj - x_hat_si)
/// for s = 1..r, i.e. the correction terms in the reference rows of the
/// v_hat update. The leader contributes x_hat_0 = first r components of v.
std::vector<Eigen::VectorXd> coupling_terms(
    const std::vector<Eigen::VectorXd>& v_hats, const Digraph& g,
    const Eigen::VectorXd& v, const ObserverParams& p, int r);

}  // namespace lfc
