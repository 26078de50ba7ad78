#include <doctest.h>

#include <random>

#include "lfc/plant.hpp"

using namespace lfc;

TEST_CASE("van der Pol fleet content") {
  const auto fleet = van_der_pol_fleet();
  REQUIRE(fleet.size() == 4);
  CHECK(fleet[0].theta == Eigen::Vector2d(4.0, 5.0));
  CHECK(fleet[1].theta == Eigen::Vector2d(3.0, 1.0));
  CHECK(fleet[2].theta == Eigen::Vector2d(2.0, 5.0));
  CHECK(fleet[3].theta == Eigen::Vector2d(5.0, 3.0));

  const Eigen::VectorXd f = fleet[0].regressor(Eigen::Vector2d(0.0, 1.0), 0.0);
  CHECK(f(0) == 0.0);
  CHECK(f(1) == 1.0);

  CHECK(fleet[2].disturbance(Eigen::Vector2d(1.0, 1.0)) == doctest::Approx(2.0));
  CHECK(fleet[0].disturbance(Eigen::Vector2d(2.0, 3.0)) == doctest::Approx(36.0));
  CHECK(fleet[1].disturbance(Eigen::Vector2d(2.0, 3.0)) == doctest::Approx(54.0));
  CHECK(fleet[3].disturbance(Eigen::Vector2d(2.0, 3.0)) == doctest::Approx(81.0));
}

TEST_CASE("plant derivative of the first oscillator") {
  const auto fleet = van_der_pol_fleet();
  const AgentState x{Eigen::Vector2d(1.0, 2.0)};
  const Eigen::Vector2d w(1.0, 1.0);
  const Eigen::VectorXd dx = plant_derivative(fleet[0], x, 0.0, w, 0.0);
  CHECK(dx(0) == doctest::Approx(2.0));
  CHECK(dx(1) == doctest::Approx(-3.0));
}

TEST_CASE("equilibrium at the origin when f(0) = 0 and d(0) = 0") {
  AgentModel model;
  model.r = 3;
  model.m = 2;
  model.regressor = [](const Eigen::VectorXd& x, double) {
    return Eigen::Vector2d(x(0), x(1) * x(2));
  };
  model.theta = Eigen::Vector2d(5.0, -2.0);
  model.disturbance = [](const Eigen::VectorXd& w) { return w(0) * w(0); };

  const AgentState x{Eigen::Vector3d::Zero()};
  const Eigen::VectorXd dx =
      plant_derivative(model, x, 0.0, Eigen::VectorXd::Zero(1), 0.0);
  CHECK(dx.isZero(0.0));
}

TEST_CASE("control enters affinely in the top row only") {
  const auto fleet = van_der_pol_fleet();
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const AgentState x{Eigen::Vector2d(dist(rng), dist(rng))};
    const Eigen::Vector2d w(dist(rng), dist(rng));
    const double a = dist(rng);
    const Eigen::VectorXd with_u = plant_derivative(fleet[1], x, a, w, 0.0);
    const Eigen::VectorXd without = plant_derivative(fleet[1], x, 0.0, w, 0.0);
    CHECK(with_u(0) == without(0));
    CHECK(with_u(1) - without(1) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("chain rows are copied exactly and the top row is affine in theta") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  AgentModel model;
  model.r = 4;
  model.m = 3;
  model.regressor = [](const Eigen::VectorXd& x, double t) {
    return Eigen::Vector3d(x(0) * x(1), std::sin(x(2)) * x(3), t * 0.0 + x(3));
  };
  model.disturbance = [](const Eigen::VectorXd& w) { return w(0); };

  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd xv =
        Eigen::VectorXd::NullaryExpr(4, [&] { return dist(rng); });
    const AgentState x{xv};
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(1, dist(rng));
    model.theta = Eigen::Vector3d(dist(rng), dist(rng), dist(rng));

    const Eigen::VectorXd d1 = plant_derivative(model, x, 0.0, w, 1.0);
    // Bit-exact state shift in the chain rows.
    CHECK(d1.head(3) == xv.tail(3));

    const Eigen::VectorXd theta1 = model.theta;
    model.theta = 2.0 * theta1;
    const Eigen::VectorXd d2 = plant_derivative(model, x, 0.0, w, 1.0);
    model.theta = Eigen::Vector3d::Zero();
    const Eigen::VectorXd d0 = plant_derivative(model, x, 0.0, w, 1.0);
    model.theta = theta1;
    // Affine in theta: f^T(2 theta) - f^T(0) = 2 (f^T theta - f^T 0).
    CHECK(d2(3) - d0(3) == doctest::Approx(2.0 * (d1(3) - d0(3))).epsilon(1e-12));
  }
}

TEST_CASE("non-finite inputs are rejected") {
  const auto fleet = van_der_pol_fleet();
  const AgentState bad{Eigen::Vector2d(std::numeric_limits<double>::infinity(), 0.0)};
  CHECK_THROWS_AS(
      plant_derivative(fleet[0], bad, 0.0, Eigen::Vector2d::Zero(), 0.0),
      std::invalid_argument);
  const AgentState ok{Eigen::Vector2d(1.0, 1.0)};
  CHECK_THROWS_AS(plant_derivative(fleet[0], ok,
                                   std::numeric_limits<double>::quiet_NaN(),
                                   Eigen::Vector2d::Zero(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("regressor is locally Lipschitz near sampled points") {
  const auto fleet = van_der_pol_fleet();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector2d x(dist(rng), dist(rng));
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d xp = x;
      xp(k) += h;
      const double diff =
          (fleet[0].regressor(xp, 0.0) - fleet[0].regressor(x, 0.0)).norm();
      // Local Lipschitz bound for the cubic terms on the sampled box.
      CHECK(diff <= 60.0 * h);
    }
  }
}

TEST_CASE("polynomial evaluation and parsing") {
  const Polynomial p = parse_polynomial("w1^2*w2^2", 2);
  CHECK(evaluate_polynomial(p, Eigen::Vector2d(2.0, 3.0)) == doctest::Approx(36.0));

  const Polynomial sum = parse_polynomial("w1^3 + w1*w2", 2);
  CHECK(evaluate_polynomial(sum, Eigen::Vector2d(1.0, 1.0)) == doctest::Approx(2.0));
  CHECK(evaluate_polynomial(sum, Eigen::Vector2d(2.0, -1.0)) == doctest::Approx(6.0));

  const Polynomial scaled = parse_polynomial("3*w1 - 0.5*w2^2", 2);
  CHECK(evaluate_polynomial(scaled, Eigen::Vector2d(1.0, 2.0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_polynomial("w3", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("w1 + * w2", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("3*", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("w1^", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("w1 +", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("w1^-2", 2), std::invalid_argument);
}

TEST_CASE("polynomial regressor matches the van der Pol regressor") {
  const std::vector<Polynomial> components = {
      parse_polynomial("-x1", 2), parse_polynomial("x2 - x1^2*x2", 2)};
  const RegressorFn poly_f = polynomial_regressor(components);
  const auto fleet = van_der_pol_fleet();

  std::mt19937 rng(123);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d x(dist(rng), dist(rng));
    const Eigen::VectorXd a = poly_f(x, 0.0);
    const Eigen::VectorXd b = fleet[0].regressor(x, 0.0);
    CHECK((a - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  }
}
