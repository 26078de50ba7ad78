#include <doctest.h>

#include <random>

#include "lfc/graph.hpp"
#include "lfc/leader.hpp"
#include "lfc/observer.hpp"
#include "lfc/scenario.hpp"
#include "lfc/sim.hpp"

using namespace lfc;

namespace {

Eigen::MatrixXd benchmark_S() {
  Eigen::MatrixXd s(4, 4);
  s << 0, 1, 0, 0,
      -1, 0, 0, 0,
       0, 0, 0, 0.5,
       0, 0, -0.5, 0;
  return s;
}

std::vector<ObserverState> random_bank(std::mt19937& rng, int n, int q) {
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::vector<ObserverState> bank(n);
  for (auto& s : bank) {
    s.S_hat = Eigen::MatrixXd::NullaryExpr(q, q, [&] { return dist(rng); });
    s.v_hat = Eigen::VectorXd::NullaryExpr(q, [&] { return dist(rng); });
  }
  return bank;
}

// Flattened S-error dynamics under switching, integrated with rk4: one
// state vector holding col(vec(S_tilde_1), ..., vec(S_tilde_N)).
std::vector<double> integrate_s_tilde_norms(double mu1, double T, double dt,
                                            std::vector<double>& times) {
  const GraphFamily family = default_graph_family();
  const SwitchingSchedule sched = periodic_schedule(1.0, {1, 2, 3, 4}, T);
  const Eigen::MatrixXd S = benchmark_S();
  const int q = 4, n = 4;
  const ObserverParams params{1.0, mu1, 1.0};

  std::vector<ObserverState> bank(n);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (auto& s : bank) {
    s.S_hat = Eigen::MatrixXd::NullaryExpr(q, q, [&] { return dist(rng); });
    s.v_hat = Eigen::VectorXd::Zero(q);
  }

  auto pack = [&](const std::vector<ObserverState>& b) {
    Eigen::VectorXd y(n * q * q);
    for (int i = 0; i < n; ++i) {
      y.segment(i * q * q, q * q) =
          Eigen::Map<const Eigen::VectorXd>(b[i].S_hat.data(), q * q);
    }
    return y;
  };
  auto unpack = [&](const Eigen::VectorXd& y, std::vector<ObserverState>& b) {
    for (int i = 0; i < n; ++i) {
      b[i].S_hat = Eigen::Map<const Eigen::MatrixXd>(y.data() + i * q * q, q, q);
    }
  };

  std::vector<double> norms;
  Eigen::VectorXd y;
  times.clear();
  const int steps_per_phase = static_cast<int>(std::lround(0.25 / dt));
  double t = 0.0;
  std::vector<ObserverState> scratch(n);
  for (auto& s : scratch) s.v_hat = Eigen::VectorXd::Zero(q);

  auto log_norm = [&](double tt, const Eigen::VectorXd& yy) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      sq += yy.segment(i * q * q, q * q).squaredNorm();
    }
    times.push_back(tt);
    norms.push_back(std::sqrt(sq) /* stacked Frobenius of S_hat - S */);
  };

  // Work in error coordinates directly: S_tilde dynamics equal the S_hat
  // consensus dynamics with the leader contribution set to zero.
  for (int i = 0; i < n; ++i) scratch[i].S_hat = bank[i].S_hat - S;
  y = pack(scratch);
  log_norm(0.0, y);

  while (t < T - 1e-9) {
    const int sigma = schedule_index_at(sched, t + dt / 2);
    const Digraph& g = family.at_index(sigma);
    DerivativeFn f = [&](double, const Eigen::VectorXd& yy) {
      unpack(yy, scratch);
      const auto derivs = adaptive_observer_derivative(
          scratch, g, Eigen::MatrixXd::Zero(q, q), Eigen::VectorXd::Zero(q), params);
      Eigen::VectorXd dy(n * q * q);
      for (int i = 0; i < n; ++i) {
        dy.segment(i * q * q, q * q) =
            Eigen::Map<const Eigen::VectorXd>(derivs[i].S_hat_dot.data(), q * q);
      }
      return dy;
    };
    for (int k = 0; k < steps_per_phase; ++k) {
      y = rk4_step(y, t, dt, f);
      t += dt;
      log_norm(t, y);
    }
  }
  return norms;
}

}  // namespace

TEST_CASE("adaptive observer derivative at consensus") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(-2.0, 1.0, -1.0, 3.0);
  const GraphFamily family = default_graph_family();
  const ObserverParams params{1.0, 3.0, 12.0};

  std::vector<ObserverState> bank(4, ObserverState{S, v});
  const auto derivs =
      adaptive_observer_derivative(bank, family.at_index(1), S, v, params);
  const Eigen::VectorXd sv = S * v;
  for (const auto& d : derivs) {
    CHECK(d.S_hat_dot.isZero(0.0));
    CHECK((d.v_hat_dot - sv).isZero(0.0));
  }
}

TEST_CASE("adaptive observer derivative with a single leader edge") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(1.0, 0.0, 0.0, 0.0);
  const Digraph g = digraph_from_edges(2, {{0, 1}});
  const ObserverParams params{1.0, 2.5, 7.0};

  std::mt19937 rng(3);
  auto bank = random_bank(rng, 1, 4);
  const auto derivs = adaptive_observer_derivative(bank, g, S, v, params);
  const Eigen::MatrixXd expected_s = params.mu1 * (S - bank[0].S_hat);
  CHECK((derivs[0].S_hat_dot - expected_s).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-15));
  const Eigen::VectorXd expected_v =
      bank[0].S_hat * bank[0].v_hat + params.mu2 * (v - bank[0].v_hat);
  CHECK((derivs[0].v_hat_dot - expected_v).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("chain topology: follower 2 sees only follower 1") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(0.5, -0.5, 1.0, 2.0);
  const Digraph g = digraph_from_edges(3, {{0, 1}, {1, 2}});
  const ObserverParams params{1.0, 1.0, 1.0};

  std::mt19937 rng(8);
  auto bank = random_bank(rng, 2, 4);
  const auto derivs = adaptive_observer_derivative(bank, g, S, v, params);
  const Eigen::MatrixXd expected = bank[0].S_hat - bank[1].S_hat;
  CHECK((derivs[1].S_hat_dot - expected).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("static observer derivative") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(-2.0, 1.0, -1.0, 3.0);
  const ObserverParams params{5.0, 1.0, 1.0};

  SUBCASE("exact estimates drift with the flow") {
    const Digraph g = digraph_from_edges(3, {{0, 1}, {0, 2}});
    std::vector<Eigen::VectorXd> v_hats{v, v};
    const auto derivs = static_observer_derivative(v_hats, g, S, v, params);
    for (const auto& d : derivs) CHECK((d - S * v).isZero(0.0));
  }
  SUBCASE("single edge pulls toward the leader") {
    const Digraph g = digraph_from_edges(2, {{0, 1}});
    std::vector<Eigen::VectorXd> v_hats{Eigen::Vector4d(1.0, 1.0, 1.0, 1.0)};
    const auto derivs = static_observer_derivative(v_hats, g, S, v, params);
    const Eigen::VectorXd expected =
        S * v_hats[0] + params.mu0 * (v - v_hats[0]);
    CHECK((derivs[0] - expected).isZero(0.0));
  }
  SUBCASE("zero graph decouples the bank") {
    const Digraph g{3, Eigen::MatrixXd::Zero(3, 3)};
    std::vector<Eigen::VectorXd> v_hats{Eigen::Vector4d(1.0, 2.0, 3.0, 4.0),
                                        Eigen::Vector4d(0.0, 1.0, 0.0, 1.0)};
    const auto derivs = static_observer_derivative(v_hats, g, S, v, params);
    CHECK((derivs[0] - S * v_hats[0]).isZero(0.0));
    CHECK((derivs[1] - S * v_hats[1]).isZero(0.0));
  }
}

TEST_CASE("observer_error recomputes the error coordinates") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(-2.0, 1.0, -1.0, 3.0);
  std::mt19937 rng(55);
  const auto bank = random_bank(rng, 1, 4);
  const ObserverError err = observer_error(bank[0], S, v);
  CHECK(err.S_tilde == bank[0].S_hat - S);
  CHECK(err.v_tilde == bank[0].v_hat - v);
  CHECK(observer_error(ObserverState{S, v}, S, v).S_tilde.isZero(0.0));
}

TEST_CASE("split_estimate decomposes and round-trips") {
  std::mt19937 rng(77);
  auto bank = random_bank(rng, 1, 4);
  const SplitEstimate split = split_estimate(bank[0], 2, 2);
  CHECK(split.x_hat == bank[0].v_hat.head(2));
  CHECK(split.w_hat == bank[0].v_hat.tail(2));
  CHECK(split.S_a_hat == bank[0].S_hat.topLeftCorner(2, 2));
  CHECK(split.S_b_hat == bank[0].S_hat.bottomRightCorner(2, 2));

  ObserverState scaffold;
  scaffold.S_hat = Eigen::MatrixXd::Zero(4, 4);
  scaffold.S_hat(0, 1) = 1.0;
  scaffold.v_hat = Eigen::Vector4d(1.0, 2.0, 3.0, 4.0);
  const SplitEstimate s2 = split_estimate(scaffold, 2, 2);
  CHECK(s2.alpha_hat == Eigen::Vector2d(0.0, 0.0));
  CHECK(s2.x_hat == Eigen::Vector2d(1.0, 2.0));
  CHECK(s2.w_hat == Eigen::Vector2d(3.0, 4.0));
}

TEST_CASE("coupling terms") {
  const ObserverParams params{1.0, 1.0, 12.0};

  SUBCASE("all estimates equal the leader reference") {
    const Digraph g = digraph_from_edges(3, {{0, 1}, {1, 2}});
    const Eigen::Vector4d v(2.0, 0.0, 1.0, 1.0);
    std::vector<Eigen::VectorXd> v_hats{v, v};
    for (const auto& c : coupling_terms(v_hats, g, v, params, 2)) {
      CHECK(c.isZero(0.0));
    }
  }
  SUBCASE("single-edge hand evaluation") {
    const Digraph g = digraph_from_edges(2, {{0, 1}});
    const Eigen::Vector4d v(2.0, 0.0, 0.0, 0.0);
    std::vector<Eigen::VectorXd> v_hats{Eigen::Vector4d(1.0, 0.0, 0.0, 0.0)};
    const auto c = coupling_terms(v_hats, g, v, params, 2);
    CHECK(c[0](0) == doctest::Approx(12.0));
    CHECK(c[0](1) == doctest::Approx(0.0));
  }
  SUBCASE("zero graph") {
    const Digraph g{2, Eigen::MatrixXd::Zero(2, 2)};
    std::vector<Eigen::VectorXd> v_hats{Eigen::Vector4d(1.0, 2.0, 3.0, 4.0)};
    const auto c =
        coupling_terms(v_hats, g, Eigen::Vector4d::Zero(), params, 2);
    CHECK(c[0].isZero(0.0));
  }
}

TEST_CASE("coupling terms equal the consensus part of the v_hat update") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v(-2.0, 1.0, -1.0, 3.0);
  const ObserverParams params{1.0, 3.0, 12.0};
  const GraphFamily family = default_graph_family();

  std::mt19937 rng(13);
  auto bank = random_bank(rng, 4, 4);
  std::vector<Eigen::VectorXd> v_hats;
  for (const auto& s : bank) v_hats.push_back(s.v_hat);

  for (int sigma = 1; sigma <= 4; ++sigma) {
    const Digraph& g = family.at_index(sigma);
    const auto derivs = adaptive_observer_derivative(bank, g, S, v, params);
    const auto couplings = coupling_terms(v_hats, g, v, params, 2);
    for (int i = 0; i < 4; ++i) {
      const Eigen::VectorXd drift = (bank[i].S_hat * bank[i].v_hat).head(2);
      CHECK((derivs[i].v_hat_dot.head(2) - drift - couplings[i])
                .cwiseAbs()
                .maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("stacked S error derivative matches the Kronecker form") {
  const Eigen::MatrixXd S = benchmark_S();
  const GraphFamily family = default_graph_family();
  const ObserverParams params{1.0, 3.0, 1.0};
  const int q = 4, n = 4;

  std::mt19937 rng(21);
  auto bank = random_bank(rng, n, q);

  for (int sigma = 1; sigma <= 4; ++sigma) {
    const Digraph& g = family.at_index(sigma);
    // Route 1: observer update of S_hat, shifted to error coordinates.
    const auto derivs = adaptive_observer_derivative(
        bank, g, S, Eigen::VectorXd::Zero(q), params);
    // Route 2: -mu1 (H kron I_q) applied to the stacked error.
    const Eigen::MatrixXd h = h_matrix(g);
    Eigen::MatrixXd stacked(n * q, q);
    for (int i = 0; i < n; ++i) {
      stacked.middleRows(i * q, q) = bank[i].S_hat - S;
    }
    Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(n * q, n * q);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        kron.block(i * q, j * q, q, q) =
            h(i, j) * Eigen::MatrixXd::Identity(q, q);
      }
    }
    const Eigen::MatrixXd expected = -params.mu1 * kron * stacked;
    for (int i = 0; i < n; ++i) {
      CHECK((derivs[i].S_hat_dot - expected.middleRows(i * q, q))
                .cwiseAbs()
                .maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("companion scaffold rows are invariant under the S update") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v0(-2.0, 1.0, -1.0, 3.0);
  const GraphFamily family = default_graph_family();
  const SwitchingSchedule sched = periodic_schedule(1.0, {1, 2, 3, 4}, 3.0);
  const ObserverParams params{1.0, 3.0, 12.0};
  const int q = 4, n = 4;

  Eigen::MatrixXd scaffold = Eigen::MatrixXd::Zero(q, q);
  scaffold(0, 1) = 1.0;
  std::vector<ObserverState> bank(n);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (auto& s : bank) {
    s.S_hat = scaffold;
    s.S_hat(1, 0) = dist(rng);  // alpha guesses may vary
    s.S_hat(1, 1) = dist(rng);
    s.S_hat.bottomRightCorner(2, 2) =
        Eigen::MatrixXd::NullaryExpr(2, 2, [&] { return dist(rng); });
    s.v_hat = Eigen::VectorXd::NullaryExpr(q, [&] { return dist(rng); });
  }

  // Integrate leader + bank together for a few seconds of switching.
  Eigen::VectorXd y(q + n * (q * q + q));
  y.head(q) = v0;
  for (int i = 0; i < n; ++i) {
    y.segment(q + i * (q * q + q), q * q) =
        Eigen::Map<const Eigen::VectorXd>(bank[i].S_hat.data(), q * q);
    y.segment(q + i * (q * q + q) + q * q, q) = bank[i].v_hat;
  }
  std::vector<ObserverState> scratch(n);
  const double dt = 1e-3;
  double t = 0.0;
  while (t < 3.0 - 1e-9) {
    const Digraph& g = family.at_index(schedule_index_at(sched, t + dt / 2));
    DerivativeFn f = [&](double, const Eigen::VectorXd& yy) {
      for (int i = 0; i < n; ++i) {
        scratch[i].S_hat = Eigen::Map<const Eigen::MatrixXd>(
            yy.data() + q + i * (q * q + q), q, q);
        scratch[i].v_hat = yy.segment(q + i * (q * q + q) + q * q, q);
      }
      const auto derivs =
          adaptive_observer_derivative(scratch, g, S, yy.head(q), params);
      Eigen::VectorXd dy(yy.size());
      dy.head(q) = S * yy.head(q);
      for (int i = 0; i < n; ++i) {
        dy.segment(q + i * (q * q + q), q * q) =
            Eigen::Map<const Eigen::VectorXd>(derivs[i].S_hat_dot.data(), q * q);
        dy.segment(q + i * (q * q + q) + q * q, q) = derivs[i].v_hat_dot;
      }
      return dy;
    };
    y = rk4_step(y, t, dt, f);
    t += dt;
  }

  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd s_hat =
        Eigen::Map<const Eigen::MatrixXd>(y.data() + q + i * (q * q + q), q, q);
    CHECK(s_hat(0, 0) == 0.0);
    CHECK(s_hat(0, 1) == 1.0);
    CHECK(s_hat(0, 2) == 0.0);
    CHECK(s_hat(0, 3) == 0.0);
    // Off-diagonal blocks stay zero as well.
    CHECK(s_hat.topRightCorner(2, 2).isZero(0.0));
    CHECK(s_hat.bottomLeftCorner(2, 2).isZero(0.0));
  }
}

TEST_CASE("truth-initialized adaptive observer matches the static observer") {
  const Eigen::MatrixXd S = benchmark_S();
  const Eigen::Vector4d v0(-2.0, 1.0, -1.0, 3.0);
  const GraphFamily family = default_graph_family();
  const SwitchingSchedule sched = periodic_schedule(1.0, {1, 2, 3, 4}, 2.0);
  const double mu = 12.0;
  const ObserverParams params{mu, 3.0, mu};  // mu0 = mu2
  const int q = 4, n = 4;

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<Eigen::VectorXd> v_hats(n);
  for (auto& vh : v_hats) {
    vh = Eigen::VectorXd::NullaryExpr(q, [&] { return dist(rng); });
  }

  // Adaptive bank with S_hat pinned to the truth.
  Eigen::VectorXd y_adaptive(q + n * q), y_static(q + n * q);
  y_adaptive.head(q) = v0;
  y_static.head(q) = v0;
  for (int i = 0; i < n; ++i) {
    y_adaptive.segment(q + i * q, q) = v_hats[i];
    y_static.segment(q + i * q, q) = v_hats[i];
  }

  std::vector<ObserverState> bank(n);
  for (auto& s : bank) s.S_hat = S;

  const double dt = 1e-3;
  double t = 0.0;
  while (t < 2.0 - 1e-9) {
    const Digraph& g = family.at_index(schedule_index_at(sched, t + dt / 2));
    DerivativeFn f_adaptive = [&](double, const Eigen::VectorXd& yy) {
      for (int i = 0; i < n; ++i) bank[i].v_hat = yy.segment(q + i * q, q);
      const auto derivs =
          adaptive_observer_derivative(bank, g, S, yy.head(q), params);
      Eigen::VectorXd dy(yy.size());
      dy.head(q) = S * yy.head(q);
      for (int i = 0; i < n; ++i) dy.segment(q + i * q, q) = derivs[i].v_hat_dot;
      return dy;
    };
    DerivativeFn f_static = [&](double, const Eigen::VectorXd& yy) {
      std::vector<Eigen::VectorXd> vh(n);
      for (int i = 0; i < n; ++i) vh[i] = yy.segment(q + i * q, q);
      const auto derivs = static_observer_derivative(vh, g, S, yy.head(q), params);
      Eigen::VectorXd dy(yy.size());
      dy.head(q) = S * yy.head(q);
      for (int i = 0; i < n; ++i) dy.segment(q + i * q, q) = derivs[i];
      return dy;
    };
    y_adaptive = rk4_step(y_adaptive, t, dt, f_adaptive);
    y_static = rk4_step(y_static, t, dt, f_static);
    t += dt;
  }
  CHECK((y_adaptive - y_static).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("S error norm decays exponentially under the default schedule") {
  std::vector<double> times;
  const std::vector<double> norms = integrate_s_tilde_norms(3.0, 12.0, 1e-3, times);
  // Tail-half fit of log-norm.
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= 6.0 && norms[k] > 1e-12) {
      ts.push_back(times[k]);
      ys.push_back(std::log(norms[k]));
    }
  }
  REQUIRE(ts.size() >= 10);
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0, ss_res = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  const double slope = sty / stt;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double fit = my + slope * (ts[k] - mt);
    ss_res += (ys[k] - fit) * (ys[k] - fit);
  }
  CHECK(slope < 0.0);
  CHECK(1.0 - ss_res / syy >= 0.95);
}
