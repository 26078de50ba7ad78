#include "lfc/observer.hpp"

#include <stdexcept>

#include "lfc/graph.hpp"

namespace lfc {

void validate_observer_params(const ObserverParams& p) {
  if (p.mu0 <= 0.0 || p.mu1 <= 0.0 || p.mu2 <= 0.0) {
    throw std::invalid_argument("observer gains mu0, mu1, mu2 must be positive");
  }
}

namespace {

void check_bank_dims(std::size_t bank_size, const Digraph& g, int q,
                     const Eigen::MatrixXd& S, const Eigen::VectorXd& v) {
  if (static_cast<int>(bank_size) != g.node_count - 1) {
    throw std::invalid_argument("observer bank size must equal follower count");
  }
  if (S.rows() != q || S.cols() != q || v.size() != q) {
    throw std::invalid_argument("leader (S, v) dimensions inconsistent with bank");
  }
}

}  // namespace

std::vector<ObserverDerivative> adaptive_observer_derivative(
    const std::vector<ObserverState>& bank, const Digraph& g,
    const Eigen::MatrixXd& S, const Eigen::VectorXd& v, const ObserverParams& p) {
  if (bank.empty()) throw std::invalid_argument("observer bank is empty");
  const int q = static_cast<int>(bank.front().v_hat.size());
  check_bank_dims(bank.size(), g, q, S, v);

  const int n = static_cast<int>(bank.size());
  std::vector<ObserverDerivative> out(n);
  for (int i = 0; i < n; ++i) {
    if (bank[i].S_hat.rows() != q || bank[i].S_hat.cols() != q ||
        bank[i].v_hat.size() != q) {
      throw std::invalid_argument("observer bank dimensions are not uniform");
    }
    Eigen::MatrixXd s_dot = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd v_dot = bank[i].S_hat * bank[i].v_hat;
    for (int j = 0; j <= n; ++j) {
      const double a = g.adjacency(i + 1, j);
      if (a == 0.0) continue;
      const Eigen::MatrixXd& s_j = (j == 0) ? S : bank[j - 1].S_hat;
      const Eigen::VectorXd& v_j = (j == 0) ? v : bank[j - 1].v_hat;
      s_dot += a * (s_j - bank[i].S_hat);
      v_dot += p.mu2 * a * (v_j - bank[i].v_hat);
    }
    out[i].S_hat_dot = p.mu1 * s_dot;
    out[i].v_hat_dot = std::move(v_dot);
  }
  return out;
}

std::vector<Eigen::VectorXd> static_observer_derivative(
    const std::vector<Eigen::VectorXd>& v_hats, const Digraph& g,
    const Eigen::MatrixXd& S, const Eigen::VectorXd& v, const ObserverParams& p) {
  if (v_hats.empty()) throw std::invalid_argument("observer bank is empty");
  const int q = static_cast<int>(v_hats.front().size());
  check_bank_dims(v_hats.size(), g, q, S, v);

  const int n = static_cast<int>(v_hats.size());
  std::vector<Eigen::VectorXd> out(n);
  for (int i = 0; i < n; ++i) {
    if (v_hats[i].size() != q) {
      throw std::invalid_argument("observer bank dimensions are not uniform");
    }
    Eigen::VectorXd v_dot = S * v_hats[i];
    for (int j = 0; j <= n; ++j) {
      const double a = g.adjacency(i + 1, j);
      if (a == 0.0) continue;
      const Eigen::VectorXd& v_j = (j == 0) ? v : v_hats[j - 1];
      v_dot += p.mu0 * a * (v_j - v_hats[i]);
    }
    out[i] = std::move(v_dot);
  }
  return out;
}

ObserverError observer_error(const ObserverState& s, const Eigen::MatrixXd& S,
                             const Eigen::VectorXd& v) {
  if (s.S_hat.rows() != S.rows() || s.v_hat.size() != v.size()) {
    throw std::invalid_argument("observer_error: dimension mismatch");
  }
  return ObserverError{s.S_hat - S, s.v_hat - v};
}

SplitEstimate split_estimate(const ObserverState& s, int r, int n_w) {
  const int q = r + n_w;
  if (s.v_hat.size() != q || s.S_hat.rows() != q || s.S_hat.cols() != q) {
    throw std::invalid_argument("split_estimate: q must equal r + n_w");
  }
  SplitEstimate out;
  out.x_hat = s.v_hat.head(r);
  out.w_hat = s.v_hat.tail(n_w);
  out.S_a_hat = s.S_hat.topLeftCorner(r, r);
  out.S_b_hat = s.S_hat.bottomRightCorner(n_w, n_w);
  out.alpha_hat = out.S_a_hat.row(r - 1).transpose();
  return out;
}

std::vector<Eigen::VectorXd> coupling_terms(
    const std::vector<Eigen::VectorXd>& v_hats, const Digraph& g,
    const Eigen::VectorXd& v, const ObserverParams& p, int r) {
  if (v_hats.empty()) throw std::invalid_argument("observer bank is empty");
  const int q = static_cast<int>(v_hats.front().size());
  if (static_cast<int>(v_hats.size()) != g.node_count - 1 || v.size() != q || r > q) {
    throw std::invalid_argument("coupling_terms: dimension mismatch");
  }

  const int n = static_cast<int>(v_hats.size());
  std::vector<Eigen::VectorXd> out(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd coupling = Eigen::VectorXd::Zero(r);
    for (int j = 0; j <= n; ++j) {
      const double a = g.adjacency(i + 1, j);
      if (a == 0.0) continue;
      const auto& v_j = (j == 0) ? v : v_hats[j - 1];
      coupling += a * (v_j.head(r) - v_hats[i].head(r));
    }
    out[i] = p.mu2 * coupling;
  }
  return out;
}

}  // namespace lfc
