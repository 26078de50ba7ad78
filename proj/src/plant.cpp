#include "lfc/plant.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace lfc {

Eigen::VectorXd plant_derivative(const AgentModel& model, const AgentState& state,
                                 double u, const Eigen::VectorXd& w, double t) {
  if (state.x.size() != model.r) {
    throw std::invalid_argument("plant_derivative: state dimension != r");
  }
  if (!state.x.allFinite() || !std::isfinite(u) || !w.allFinite() ||
      !std::isfinite(t)) {
    throw std::invalid_argument("plant_derivative: non-finite input");
  }

  const Eigen::VectorXd f = model.regressor(state.x, t);
  if (f.size() != model.m || model.theta.size() != model.m) {
    throw std::invalid_argument("plant_derivative: regressor dimension != m");
  }

  Eigen::VectorXd dx(model.r);
  dx.head(model.r - 1) = state.x.tail(model.r - 1);
  dx(model.r - 1) = f.dot(model.theta) + model.disturbance(w) + u;
  return dx;
}

std::vector<AgentModel> van_der_pol_fleet() {
  RegressorFn f = [](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd out(2);
    out << -x(0), x(1) * (1.0 - x(0) * x(0));
    return out;
  };
  const std::vector<Eigen::Vector2d> thetas = {
      {4.0, 5.0}, {3.0, 1.0}, {2.0, 5.0}, {5.0, 3.0}};
  const std::vector<DisturbanceFn> disturbances = {
      [](const Eigen::VectorXd& w) { return w(0) * w(0) * w(1) * w(1); },
      [](const Eigen::VectorXd& w) { return w(0) * w(1) * w(1) * w(1); },
      [](const Eigen::VectorXd& w) { return w(0) * w(0) * w(0) + w(0) * w(1); },
      [](const Eigen::VectorXd& w) { return w(1) * w(1) * w(1) * w(1); }};

  std::vector<AgentModel> fleet;
  for (int i = 0; i < 4; ++i) {
    fleet.push_back(AgentModel{2, 2, f, thetas[i], disturbances[i]});
  }
  return fleet;
}

double evaluate_polynomial(const Polynomial& poly, const Eigen::VectorXd& arg) {
  double value = 0.0;
  for (const Monomial& term : poly) {
    double product = term.coeff;
    for (std::size_t k = 0; k < term.exps.size(); ++k) {
      if (static_cast<int>(k) >= arg.size() && term.exps[k] != 0) {
        throw std::invalid_argument("polynomial variable index out of range");
      }
      for (int p = 0; p < term.exps[k]; ++p) product *= arg(k);
    }
    value += product;
  }
  return value;
}

Polynomial parse_polynomial(const std::string& expr, int n_vars) {
  Polynomial poly;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos]))) ++pos;
  };

  skip_ws();
  if (pos == expr.size()) throw std::invalid_argument("empty polynomial expression");

  while (pos < expr.size()) {
    double sign = 1.0;
    skip_ws();
    if (expr[pos] == '+' || expr[pos] == '-') {
      if (expr[pos] == '-') sign = -1.0;
      ++pos;
      skip_ws();
    }

    Monomial term;
    term.coeff = sign;
    term.exps.assign(n_vars, 0);
    bool saw_factor = false;
    bool pending_star = false;

    auto read_int = [&](const char* what) {
      if (pos >= expr.size() ||
          !std::isdigit(static_cast<unsigned char>(expr[pos]))) {
        throw std::invalid_argument(std::string("expected ") + what +
                                    " in polynomial expression");
      }
      std::size_t len = 0;
      const int value = std::stoi(expr.substr(pos), &len);
      pos += len;
      return value;
    };

    while (pos < expr.size()) {
      skip_ws();
      if (pos >= expr.size() || expr[pos] == '+' || expr[pos] == '-') break;
      if (expr[pos] == '*') {
        if (!saw_factor || pending_star) {
          throw std::invalid_argument("dangling '*' in polynomial");
        }
        pending_star = true;
        ++pos;
        continue;
      }
      if (expr[pos] == 'w' || expr[pos] == 'x') {
        ++pos;
        const int var = read_int("a variable index");
        if (var < 1 || var > n_vars) {
          throw std::invalid_argument("polynomial variable index out of range: " +
                                      std::to_string(var));
        }
        int power = 1;
        if (pos < expr.size() && expr[pos] == '^') {
          ++pos;
          power = read_int("an exponent");
        }
        term.exps[var - 1] += power;
        saw_factor = true;
        pending_star = false;
      } else if (std::isdigit(static_cast<unsigned char>(expr[pos])) ||
                 expr[pos] == '.') {
        std::size_t len = 0;
        term.coeff *= std::stod(expr.substr(pos), &len);
        pos += len;
        saw_factor = true;
        pending_star = false;
      } else {
        throw std::invalid_argument(std::string("unexpected character '") +
                                    expr[pos] + "' in polynomial expression");
      }
    }
    if (!saw_factor) throw std::invalid_argument("dangling sign in polynomial");
    if (pending_star) throw std::invalid_argument("dangling '*' in polynomial");
    poly.push_back(std::move(term));
  }
  return poly;
}

RegressorFn polynomial_regressor(const std::vector<Polynomial>& components) {
  return [components](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd out(static_cast<int>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) {
      out(static_cast<int>(k)) = evaluate_polynomial(components[k], x);
    }
    return out;
  };
}

DisturbanceFn polynomial_disturbance(const Polynomial& poly) {
  return [poly](const Eigen::VectorXd& w) { return evaluate_polynomial(poly, w); };
}

}  // namespace lfc
