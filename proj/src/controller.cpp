#include "lfc/controller.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace lfc {

bool hurwitz_check(const Eigen::VectorXd& beta) {
  const int degree = static_cast<int>(beta.size());
  if (degree == 0) return true;

  // All coefficients positive is necessary.
  for (int j = 0; j < degree; ++j) {
    if (beta(j) <= 0.0) return false;
  }
  if (degree <= 2) return true;  // sufficient for degree 1 and 2

  // Routh array for [1, beta_1, ..., beta_d].
  std::vector<double> coeffs(degree + 1);
  coeffs[0] = 1.0;
  for (int j = 0; j < degree; ++j) coeffs[j + 1] = beta(j);

  const int cols = degree / 2 + 1;
  std::vector<double> upper(cols, 0.0), lower(cols, 0.0);
  for (int j = 0; j <= degree; j += 2) upper[j / 2] = coeffs[j];
  for (int j = 1; j <= degree; j += 2) lower[(j - 1) / 2] = coeffs[j];

  for (int row = 2; row <= degree; ++row) {
    if (lower[0] == 0.0) return false;  // marginal or unstable
    std::vector<double> next(cols, 0.0);
    for (int c = 0; c + 1 < cols; ++c) {
      next[c] = (lower[0] * upper[c + 1] - upper[0] * lower[c + 1]) / lower[0];
    }
    upper = lower;
    lower = next;
    if (lower[0] <= 0.0) return false;
  }
  return true;
}

void validate_controller_params(const ControllerParams& p) {
  if (!hurwitz_check(p.beta)) {
    throw std::invalid_argument("beta does not define a stable filter polynomial");
  }
  if (p.k <= 0.0) throw std::invalid_argument("k must be positive");
  if (p.k < kMinFeedbackGain && !p.allow_small_k) {
    throw std::invalid_argument("k below 5/4; set allow_small_k to override");
  }
  if (p.Lambda.rows() != p.Lambda.cols()) {
    throw std::invalid_argument("Lambda must be square");
  }
  if ((p.Lambda - p.Lambda.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("Lambda must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.Lambda);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("Lambda must be positive definite");
  }
}

FilteredError compute_p_and_s(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x_hat,
                              const Eigen::VectorXd& x_hat_dot,
                              const ControllerParams& params) {
  const int r = static_cast<int>(x.size());
  if (x_hat.size() != r || x_hat_dot.size() != r ||
      params.beta.size() != r - 1) {
    throw std::invalid_argument("compute_p_and_s: dimension mismatch");
  }

  FilteredError out;
  out.p_ri = x_hat(r - 1);
  out.p_ri_dot = x_hat_dot(r - 1);
  for (int j = 1; j <= r - 1; ++j) {
    const int s_idx = r - 1 - j;  // zero-based index of x_{r-j}
    out.p_ri -= params.beta(j - 1) * (x(s_idx) - x_hat(s_idx));
    out.p_ri_dot -= params.beta(j - 1) * (x(s_idx + 1) - x_hat_dot(s_idx));
  }
  out.s = x(r - 1) - out.p_ri;
  return out;
}

ControlOutput control_and_adaptation(const Eigen::VectorXd& f,
                                     const DisturbanceFn& disturbance,
                                     const Eigen::VectorXd& w_hat, double s,
                                     double p_ri_dot,
                                     const Eigen::VectorXd& theta_hat,
                                     const ControllerParams& params) {
  if (f.size() != theta_hat.size() || params.Lambda.rows() != f.size()) {
    throw std::invalid_argument("control_and_adaptation: dimension mismatch");
  }

  ControlOutput out;
  out.u = -f.dot(theta_hat) - disturbance(w_hat) - params.k * s + p_ri_dot;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(params.Lambda);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw std::invalid_argument("control_and_adaptation: Lambda is singular");
  }
  out.theta_hat_dot = ldlt.solve(f * s);
  return out;
}

ControlOutput decentralized_baseline(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& x0_dot,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& theta_hat,
                                     const ControllerParams& params,
                                     const Eigen::VectorXd& f,
                                     const DisturbanceFn& disturbance) {
  if (x0.size() != x.size() || x0_dot.size() != x.size()) {
    throw std::invalid_argument("decentralized_baseline: dimension mismatch");
  }
  const FilteredError err = compute_p_and_s(x, x0, x0_dot, params);
  return control_and_adaptation(f, disturbance, w, err.s, err.p_ri_dot,
                                theta_hat, params);
}

}  // namespace lfc
