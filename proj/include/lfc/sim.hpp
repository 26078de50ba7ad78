#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfc/controller.hpp"
#include "lfc/graph.hpp"
#include "lfc/leader.hpp"
#include "lfc/observer.hpp"
#include "lfc/plant.hpp"

namespace lfc {

/// Either a k-phase periodic schedule (period T0, cycling through `cycle`)
/// or an explicit switch-time list.
struct ScheduleSpec {
  bool periodic = true;
  double T0 = 1.0;
  std::vector<int> cycle;
  SwitchingSchedule explicit_schedule;
};

struct InitialConditions {
  Eigen::VectorXd v0;
  std::vector<Eigen::VectorXd> x0;
  std::vector<Eigen::VectorXd> v_hat0;
  std::vector<Eigen::MatrixXd> S_hat0;      // empty: companion scaffold
  std::vector<Eigen::VectorXd> theta_hat0;  // empty: zero
};

struct SimSettings {
  double dt = 1e-3;
  double horizon = 100.0;
  // Window span for the joint-connectivity check; 0 selects 2*T0 for
  // periodic schedules and the full span for explicit ones.
  double joint_epsilon = 0.0;
  bool waive_assumption_checks = false;
  std::string out_dir;  // default output directory; CLI --out overrides
};

struct SimConfig {
  Exosystem exosystem;
  std::vector<AgentModel> agents;
  GraphFamily family;
  ScheduleSpec schedule;
  ObserverParams observer;
  std::vector<ControllerParams> controllers;  // one per agent
  InitialConditions init;
  SimSettings settings;

  int n_agents() const { return static_cast<int>(agents.size()); }
};

/// Raised when the integrated state leaves the finite range.
class SimError : public std::runtime_error {
 public:
  SimError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Four-phase (or general) periodic schedule covering [0, horizon) with
/// dwell T0 / cycle.size().
SwitchingSchedule periodic_schedule(double T0, const std::vector<int>& cycle,
                                    double horizon);

/// The schedule a config actually runs under (periodic specs expanded).
SwitchingSchedule materialize_schedule(const ScheduleSpec& spec, double horizon);

/// Throws std::invalid_argument describing the first violated constraint;
/// assumption checks are downgraded to silence by waive_assumption_checks.
void validate_config(const SimConfig& cfg);

using DerivativeFn =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Classical fourth-order Runge-Kutta update. When a schedule is supplied,
/// throws if a switching instant lies strictly inside (t, t+dt).
Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double dt,
                         const DerivativeFn& f,
                         const SwitchingSchedule* sched = nullptr);

/// Flattened layout of the closed-loop state stack
/// [v | per agent: vec(S_hat), v_hat, x, theta_hat].
struct StateLayout {
  int q = 0;
  int r = 0;
  std::vector<int> m;
  int v_offset = 0;
  std::vector<int> S_hat_offset, v_hat_offset, x_offset, theta_offset;
  int total = 0;

  static StateLayout from(const SimConfig& cfg);
};

Eigen::VectorXd pack_initial_state(const SimConfig& cfg, const StateLayout& layout);

/// Resolved constants shared by every derivative evaluation of one run.
struct LoopContext {
  const SimConfig* cfg = nullptr;
  Eigen::MatrixXd S;
  StateLayout layout;
  SwitchingSchedule schedule;

  static LoopContext from(const SimConfig& cfg);
};

struct LoopEval {
  Eigen::VectorXd ydot;
  std::vector<double> s;
  std::vector<double> u;
};

/// One evaluation of the closed loop under the given active graph: leader,
/// observer bank, plants under the adaptive law, and parameter adaptation,
/// all at the same instant.
LoopEval closed_loop_eval(const LoopContext& ctx, double t,
                          const Eigen::VectorXd& y, const Digraph& g);

/// Same, resolving the active graph from the schedule at t.
Eigen::VectorXd closed_loop_derivative(const LoopContext& ctx, double t,
                                       const Eigen::VectorXd& y);

/// Time-indexed record of one run. Column-compatible with the CSV layout;
/// S_hat is logged through its error norm plus the final full state.
struct TrajectoryLog {
  int n_agents = 0;
  int q = 0;
  int r = 0;
  std::vector<int> m;

  std::vector<double> t;
  std::vector<int> sigma;
  Eigen::MatrixXd v;                      // q x n
  std::vector<Eigen::MatrixXd> x;         // per agent, r x n
  std::vector<Eigen::MatrixXd> v_hat;     // per agent, q x n
  std::vector<Eigen::MatrixXd> theta_hat; // per agent, m_i x n
  Eigen::MatrixXd s_tilde_norm;           // n_agents x n (Frobenius)
  Eigen::MatrixXd s;                      // n_agents x n
  Eigen::MatrixXd u;                      // n_agents x n
  Eigen::VectorXd V;

  Eigen::VectorXd final_state;            // full stack at the last grid point
  StateLayout layout;

  int n_points() const { return static_cast<int>(t.size()); }
};

/// Integrates the closed loop over [0, horizon] with switching-aligned
/// fixed steps and logs every grid point. Deterministic given the config.
TrajectoryLog run(const SimConfig& cfg);

}  // namespace lfc
