#include "lfc/scenario.hpp"

namespace lfc {

GraphFamily default_graph_family() {
  GraphFamily family;
  family.graphs.push_back(digraph_from_edges(5, {{0, 1}}));
  family.graphs.push_back(digraph_from_edges(5, {{1, 2}}));
  family.graphs.push_back(digraph_from_edges(5, {{2, 3}}));
  family.graphs.push_back(digraph_from_edges(5, {{3, 4}}));
  return family;
}

SimConfig vdp_scenario() {
  SimConfig cfg;

  cfg.exosystem.r = 2;
  cfg.exosystem.n_w = 2;
  cfg.exosystem.alpha = Eigen::Vector2d(-1.0, 0.0);
  cfg.exosystem.S_b.resize(2, 2);
  cfg.exosystem.S_b << 0.0, 0.5, -0.5, 0.0;

  cfg.agents = van_der_pol_fleet();

  cfg.family = default_graph_family();
  cfg.schedule.periodic = true;
  cfg.schedule.T0 = 1.0;
  cfg.schedule.cycle = {1, 2, 3, 4};

  cfg.observer.mu0 = 12.0;
  cfg.observer.mu1 = 3.0;
  cfg.observer.mu2 = 12.0;

  for (int i = 0; i < 4; ++i) {
    ControllerParams ctrl;
    ctrl.beta = Eigen::VectorXd::Constant(1, 1.0);
    ctrl.k = 3.0;
    ctrl.Lambda = Eigen::MatrixXd::Identity(2, 2);
    cfg.controllers.push_back(ctrl);
  }

  cfg.init.v0 = Eigen::Vector4d(-2.0, 1.0, -1.0, 3.0);
  cfg.init.x0 = {Eigen::Vector2d(1.0, -4.0), Eigen::Vector2d(-2.0, 3.0),
                 Eigen::Vector2d(3.0, 1.0), Eigen::Vector2d(-5.0, 2.0)};
  cfg.init.v_hat0 = {Eigen::Vector4d(1.0, -2.0, 2.0, 1.0),
                     Eigen::Vector4d(-5.0, 4.0, 1.0, 5.0),
                     Eigen::Vector4d(0.0, 2.0, -4.0, 3.0),
                     Eigen::Vector4d(-3.0, 1.0, -2.0, 4.0)};
  // S_hat0 defaults to the companion scaffold, theta_hat0 to zero.

  cfg.settings.dt = 1e-3;
  cfg.settings.horizon = 100.0;
  return cfg;
}

}  // namespace lfc
