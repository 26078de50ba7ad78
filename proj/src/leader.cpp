#include "lfc/leader.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace lfc {

void validate_exosystem(const Exosystem& e) {
  if (e.r < 1) throw std::invalid_argument("exosystem: r must be >= 1");
  if (e.n_w < 0) throw std::invalid_argument("exosystem: n_w must be >= 0");
  if (e.alpha.size() != e.r) {
    throw std::invalid_argument("exosystem: alpha must have r entries");
  }
  if (e.S_b.rows() != e.n_w || e.S_b.cols() != e.n_w) {
    throw std::invalid_argument("exosystem: S_b must be n_w x n_w");
  }
}

Eigen::MatrixXd build_S(const Exosystem& e) {
  validate_exosystem(e);
  const int q = e.q();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(q, q);
  for (int k = 0; k + 1 < e.r; ++k) s(k, k + 1) = 1.0;
  s.row(e.r - 1).head(e.r) = e.alpha.transpose();
  if (e.n_w > 0) s.block(e.r, e.r, e.n_w, e.n_w) = e.S_b;
  return s;
}

Exosystem exosystem_from_frequencies(const std::vector<double>& reference_freqs,
                                     const std::vector<double>& disturbance_freqs) {
  if (reference_freqs.empty()) {
    throw std::invalid_argument("at least one reference frequency required");
  }
  for (double w : reference_freqs) {
    if (w <= 0.0) throw std::invalid_argument("frequencies must be positive");
  }
  for (double w : disturbance_freqs) {
    if (w <= 0.0) throw std::invalid_argument("frequencies must be positive");
  }

  // Expand prod_k (x^2 + w_k^2); c[j] is the coefficient of x^j.
  std::vector<double> c{1.0};
  for (double w : reference_freqs) {
    std::vector<double> next(c.size() + 2, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 2] += c[j];
      next[j] += c[j] * w * w;
    }
    c = std::move(next);
  }

  Exosystem e;
  e.r = static_cast<int>(c.size()) - 1;
  e.alpha = Eigen::VectorXd::Zero(e.r);
  for (int j = 0; j < e.r; ++j) e.alpha(j) = -c[j];

  e.n_w = 2 * static_cast<int>(disturbance_freqs.size());
  e.S_b = Eigen::MatrixXd::Zero(e.n_w, e.n_w);
  for (std::size_t k = 0; k < disturbance_freqs.size(); ++k) {
    const int off = 2 * static_cast<int>(k);
    e.S_b(off, off + 1) = disturbance_freqs[k];
    e.S_b(off + 1, off) = -disturbance_freqs[k];
  }
  return e;
}

SpectrumReport check_leader_spectrum(const Exosystem& e, double tol) {
  validate_exosystem(e);
  if (e.q() > 16) {
    throw std::invalid_argument("check_leader_spectrum: q must be <= 16");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(build_S(e), false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("check_leader_spectrum: eigenvalue computation failed");
  }

  SpectrumReport report;
  for (int k = 0; k < e.q(); ++k) {
    report.eigenvalues.push_back(solver.eigenvalues()(k));
  }
  report.satisfied = true;
  for (std::size_t a = 0; a < report.eigenvalues.size(); ++a) {
    if (std::abs(report.eigenvalues[a].real()) > tol) report.satisfied = false;
    for (std::size_t b = a + 1; b < report.eigenvalues.size(); ++b) {
      if (std::abs(report.eigenvalues[a] - report.eigenvalues[b]) <= tol) {
        report.satisfied = false;
      }
    }
  }
  return report;
}

Eigen::VectorXd leader_derivative(const Exosystem& e, const Eigen::VectorXd& v) {
  if (v.size() != e.q()) {
    throw std::invalid_argument("leader_derivative: v must have dimension q");
  }
  return build_S(e) * v;
}

}  // namespace lfc
