#include "lfc/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lfc {

RateFit fit_rate(const std::vector<double>& times,
                 const std::vector<double>& norms, double t_start, double t_end,
                 double floor) {
  if (times.size() != norms.size()) {
    throw std::invalid_argument("fit_rate: times and norms differ in length");
  }
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_start || times[k] > t_end) continue;
    if (!(norms[k] > floor)) continue;
    ts.push_back(times[k]);
    ys.push_back(std::log(norms[k]));
  }
  if (ts.size() < 10) {
    throw std::invalid_argument("fit_rate: fewer than 10 samples above the floor in window");
  }

  const double n = static_cast<double>(ts.size());
  double mean_t = 0.0, mean_y = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mean_t += ts[k];
    mean_y += ys[k];
  }
  mean_t /= n;
  mean_y /= n;

  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double dt = ts[k] - mean_t;
    const double dy = ys[k] - mean_y;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;

  double ss_res = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double fitted = mean_y + slope * (ts[k] - mean_t);
    ss_res += (ys[k] - fitted) * (ys[k] - fitted);
  }

  RateFit fit;
  fit.lambda = -slope;
  fit.r_squared = (syy <= 1e-30) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  fit.t_start = t_start;
  fit.t_end = t_end;
  fit.n_samples = static_cast<int>(ts.size());
  return fit;
}

std::pair<double, double> tail_window(const std::vector<double>& times,
                                      const std::vector<double>& norms,
                                      double floor) {
  if (times.empty()) throw std::invalid_argument("tail_window: empty series");
  double t_end = times.front();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (norms[k] > 10.0 * floor) t_end = times[k];
  }
  return {0.5 * t_end, t_end};
}

Eigen::VectorXd compute_V(const TrajectoryLog& log, const SimConfig& cfg) {
  const int n_points = log.n_points();
  Eigen::VectorXd v_series(n_points);
  for (int at = 0; at < n_points; ++at) {
    double value = 0.0;
    for (int i = 0; i < log.n_agents; ++i) {
      const Eigen::VectorXd theta_tilde =
          log.theta_hat[i].col(at) - cfg.agents[i].theta;
      value += log.s(i, at) * log.s(i, at) +
               theta_tilde.dot(cfg.controllers[i].Lambda * theta_tilde);
    }
    v_series(at) = 0.5 * value;
  }
  return v_series;
}

ZDiagnostics z_diagnostics(const TrajectoryLog& log, const SimConfig& cfg) {
  const int r = log.r;
  if (r < 2) throw std::invalid_argument("z_diagnostics requires r >= 2");
  const int n_points = log.n_points();
  const int n = log.n_agents;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Eigen::MatrixXd a_matrix = Eigen::MatrixXd::Zero(r - 1, r - 1);
  for (int k = 0; k + 1 < r - 1; ++k) a_matrix(k, k + 1) = 1.0;

  ZDiagnostics out;
  out.t = log.t;
  out.z.assign(n, Eigen::MatrixXd(r - 1, n_points));
  out.residual.assign(n, Eigen::VectorXd::Constant(n_points, nan));

  for (int i = 0; i < n; ++i) {
    for (int at = 0; at < n_points; ++at) {
      out.z[i].col(at) =
          log.x[i].col(at).head(r - 1) - log.v_hat[i].col(at).head(r - 1);
    }
  }

  // u_bar needs the consensus coupling terms at each grid point.
  std::vector<std::vector<Eigen::VectorXd>> couplings(n_points);
  for (int at = 0; at < n_points; ++at) {
    std::vector<Eigen::VectorXd> v_hats(n);
    for (int i = 0; i < n; ++i) v_hats[i] = log.v_hat[i].col(at);
    couplings[at] =
        coupling_terms(v_hats, cfg.family.at_index(log.sigma[at]),
                       log.v.col(at), cfg.observer, r);
  }

  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd a_i = a_matrix;
    for (int j = 0; j < r - 1; ++j) {
      a_i(r - 2, j) = -cfg.controllers[i].beta(r - 2 - j);
    }
    for (int at = 1; at + 1 < n_points; ++at) {
      const double h_prev = log.t[at] - log.t[at - 1];
      const double h_next = log.t[at + 1] - log.t[at];
      const bool regular = std::abs(h_next - h_prev) < 1e-12 &&
                           log.sigma[at - 1] == log.sigma[at];
      if (!regular) continue;

      const Eigen::VectorXd z_dot_fd =
          (out.z[i].col(at + 1) - out.z[i].col(at - 1)) / (h_prev + h_next);
      Eigen::VectorXd u_bar(r - 1);
      for (int s_row = 0; s_row + 1 < r - 1; ++s_row) {
        u_bar(s_row) = -couplings[at][i](s_row);
      }
      u_bar(r - 2) = log.s(i, at) - couplings[at][i](r - 2);
      out.residual[i](at) =
          (z_dot_fd - (a_i * out.z[i].col(at) + u_bar)).norm();
    }
  }
  return out;
}

}  // namespace lfc
