#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace lfc {

using RegressorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
using DisturbanceFn = std::function<double(const Eigen::VectorXd&)>;

/// One follower: an order-r integrator chain whose top state obeys
/// x_r' = f(x,t)^T theta + d(w) + u. The regressor f is known to the
/// controller; theta is not. Contract: the regressor is locally
/// Lipschitz in x uniformly in t, and the disturbance is continuously
/// differentiable.
struct AgentModel {
  int r = 0;
  int m = 0;
  RegressorFn regressor;
  Eigen::VectorXd theta;
  DisturbanceFn disturbance;
};

struct AgentState {
  Eigen::VectorXd x;  // col(x_1, ..., x_r)
};

/// Plant derivative per the integrator-chain dynamics. Throws on
/// non-finite inputs or dimension mismatch.
Eigen::VectorXd plant_derivative(const AgentModel& model, const AgentState& x,
                                 double u, const Eigen::VectorXd& w, double t);

/// The four benchmark oscillators: f = col(-x1, x2 (1 - x1^2)) with
/// theta_1 = (4,5), theta_2 = (3,1), theta_3 = (2,5), theta_4 = (5,3) and
/// disturbances d1 = w1^2 w2^2, d2 = w1 w2^3, d3 = w1^3 + w1 w2, d4 = w2^4.
std::vector<AgentModel> van_der_pol_fleet();

/// Sum-of-monomials polynomial over a real vector: each term is
/// coeff * prod_k arg_k^exps[k].
struct Monomial {
  double coeff = 0.0;
  std::vector<int> exps;
};
using Polynomial = std::vector<Monomial>;

double evaluate_polynomial(const Polynomial& poly, const Eigen::VectorXd& arg);

/// Parses expressions like "w1^2*w2^2 + 3*w1" into a Polynomial over
/// variables w1..wn (1-based names). Throws on malformed input.
Polynomial parse_polynomial(const std::string& expr, int n_vars);

/// Regressor whose m components are fixed polynomials in the state
/// (time-invariant).
RegressorFn polynomial_regressor(const std::vector<Polynomial>& components);

DisturbanceFn polynomial_disturbance(const Polynomial& poly);

}  // namespace lfc
