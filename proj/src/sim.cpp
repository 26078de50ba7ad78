#include "lfc/sim.hpp"

#include <algorithm>
#include <cmath>

namespace lfc {

SwitchingSchedule periodic_schedule(double T0, const std::vector<int>& cycle,
                                    double horizon) {
  if (T0 <= 0.0) throw std::invalid_argument("periodic_schedule: T0 must be positive");
  if (cycle.empty()) throw std::invalid_argument("periodic_schedule: empty cycle");

  SwitchingSchedule sched;
  sched.dwell = T0 / static_cast<double>(cycle.size());
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * sched.dwell;
    if (k > 0 && t >= horizon - 1e-12) break;
    sched.switch_times.push_back(t);
    sched.indices.push_back(cycle[static_cast<std::size_t>(k) % cycle.size()]);
  }
  return sched;
}

SwitchingSchedule materialize_schedule(const ScheduleSpec& spec, double horizon) {
  if (spec.periodic) return periodic_schedule(spec.T0, spec.cycle, horizon);
  return spec.explicit_schedule;
}

StateLayout StateLayout::from(const SimConfig& cfg) {
  StateLayout layout;
  layout.q = cfg.exosystem.q();
  layout.r = cfg.exosystem.r;
  int offset = layout.q;  // leader state first
  for (const AgentModel& agent : cfg.agents) {
    layout.m.push_back(agent.m);
    layout.S_hat_offset.push_back(offset);
    offset += layout.q * layout.q;
    layout.v_hat_offset.push_back(offset);
    offset += layout.q;
    layout.x_offset.push_back(offset);
    offset += agent.r;
    layout.theta_offset.push_back(offset);
    offset += agent.m;
  }
  layout.total = offset;
  return layout;
}

namespace {

Eigen::MatrixXd scaffold_S_hat(int r, int n_w) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(r + n_w, r + n_w);
  for (int k = 0; k + 1 < r; ++k) s(k, k + 1) = 1.0;
  return s;
}

double default_joint_epsilon(const SimConfig& cfg, const SwitchingSchedule& sched) {
  if (cfg.settings.joint_epsilon > 0.0) return cfg.settings.joint_epsilon;
  if (cfg.schedule.periodic) return 2.0 * cfg.schedule.T0;
  return sched.switch_times.back() - sched.switch_times.front() + 2.0 * sched.dwell;
}

}  // namespace

Eigen::VectorXd pack_initial_state(const SimConfig& cfg, const StateLayout& layout) {
  Eigen::VectorXd y(layout.total);
  y.head(layout.q) = cfg.init.v0;
  for (int i = 0; i < cfg.n_agents(); ++i) {
    const Eigen::MatrixXd s_hat0 =
        cfg.init.S_hat0.empty() ? scaffold_S_hat(cfg.exosystem.r, cfg.exosystem.n_w)
                                : cfg.init.S_hat0[i];
    y.segment(layout.S_hat_offset[i], layout.q * layout.q) =
        Eigen::Map<const Eigen::VectorXd>(s_hat0.data(), layout.q * layout.q);
    y.segment(layout.v_hat_offset[i], layout.q) = cfg.init.v_hat0[i];
    y.segment(layout.x_offset[i], layout.r) = cfg.init.x0[i];
    y.segment(layout.theta_offset[i], layout.m[i]) =
        cfg.init.theta_hat0.empty() ? Eigen::VectorXd::Zero(layout.m[i]).eval()
                                    : cfg.init.theta_hat0[i];
  }
  return y;
}

void validate_config(const SimConfig& cfg) {
  validate_exosystem(cfg.exosystem);
  const int q = cfg.exosystem.q();
  const int r = cfg.exosystem.r;
  const int n = cfg.n_agents();

  if (n == 0) throw std::invalid_argument("config: at least one agent required");
  for (int i = 0; i < n; ++i) {
    const AgentModel& agent = cfg.agents[i];
    const std::string tag = "agent " + std::to_string(i + 1);
    if (agent.r != r) {
      throw std::invalid_argument(tag + ": order r must match the exosystem");
    }
    if (agent.theta.size() != agent.m) {
      throw std::invalid_argument(tag + ": theta must have m entries");
    }
    if (!agent.regressor || !agent.disturbance) {
      throw std::invalid_argument(tag + ": regressor and disturbance required");
    }
    const Eigen::VectorXd probe = agent.regressor(Eigen::VectorXd::Zero(r), 0.0);
    if (probe.size() != agent.m) {
      throw std::invalid_argument(tag + ": regressor output dimension != m");
    }
  }

  validate_family(cfg.family);
  if (cfg.family.graphs.front().node_count != n + 1) {
    throw std::invalid_argument("graphs: node_count must equal n_agents + 1");
  }

  const SwitchingSchedule sched =
      materialize_schedule(cfg.schedule, cfg.settings.horizon);
  validate_schedule(sched, cfg.family.size());

  validate_observer_params(cfg.observer);

  if (static_cast<int>(cfg.controllers.size()) != n) {
    throw std::invalid_argument("controllers: one parameter set per agent required");
  }
  for (int i = 0; i < n; ++i) {
    if (cfg.controllers[i].beta.size() != r - 1) {
      throw std::invalid_argument("controller " + std::to_string(i + 1) +
                                  ": beta must have r-1 entries");
    }
    if (cfg.controllers[i].Lambda.rows() != cfg.agents[i].m) {
      throw std::invalid_argument("controller " + std::to_string(i + 1) +
                                  ": Lambda must be m x m");
    }
    validate_controller_params(cfg.controllers[i]);
  }

  if (cfg.init.v0.size() != q) throw std::invalid_argument("init.v0: dimension != q");
  auto check_bank = [&](const auto& bank, int dim, const std::string& name) {
    if (static_cast<int>(bank.size()) != n) {
      throw std::invalid_argument("init." + name + ": one entry per agent required");
    }
    for (const auto& entry : bank) {
      if (entry.size() != dim) {
        throw std::invalid_argument("init." + name + ": wrong dimension");
      }
    }
  };
  check_bank(cfg.init.x0, r, "x");
  check_bank(cfg.init.v_hat0, q, "vhat");
  if (!cfg.init.S_hat0.empty()) {
    if (static_cast<int>(cfg.init.S_hat0.size()) != n) {
      throw std::invalid_argument("init.Shat: one entry per agent required");
    }
    for (const auto& s : cfg.init.S_hat0) {
      if (s.rows() != q || s.cols() != q) {
        throw std::invalid_argument("init.Shat: matrices must be q x q");
      }
    }
  }
  if (!cfg.init.theta_hat0.empty()) {
    if (static_cast<int>(cfg.init.theta_hat0.size()) != n) {
      throw std::invalid_argument("init.thetahat: one entry per agent required");
    }
    for (int i = 0; i < n; ++i) {
      if (cfg.init.theta_hat0[i].size() != cfg.agents[i].m) {
        throw std::invalid_argument("init.thetahat: wrong dimension");
      }
    }
  }

  if (cfg.settings.dt <= 0.0) throw std::invalid_argument("sim.dt must be positive");
  if (cfg.settings.horizon < 0.0) {
    throw std::invalid_argument("sim.T must be nonnegative");
  }
  if (cfg.settings.dt > sched.dwell + 1e-12) {
    throw std::invalid_argument("sim.dt must not exceed the dwell time");
  }

  if (!cfg.settings.waive_assumption_checks) {
    const SpectrumReport spectrum = check_leader_spectrum(cfg.exosystem);
    if (!spectrum.satisfied) {
      throw std::invalid_argument(
          "exosystem spectrum violates the distinct-imaginary-eigenvalue "
          "assumption (waivable via sim.waive_assumption_checks)");
    }
    const double epsilon = default_joint_epsilon(cfg, sched);
    // Short horizons would truncate the windows; periodic schedules are
    // checked over at least one period plus the window span.
    const SwitchingSchedule check_sched =
        cfg.schedule.periodic
            ? materialize_schedule(cfg.schedule,
                                   std::max(cfg.settings.horizon,
                                            cfg.schedule.T0 + epsilon))
            : sched;
    const auto joint = check_jointly_connected(cfg.family, check_sched, epsilon);
    if (!joint.jointly_connected) {
      throw std::invalid_argument(
          "switching schedule is not jointly connected at epsilon = " +
          std::to_string(epsilon) + " (waivable via sim.waive_assumption_checks)");
    }
  }
}

Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double dt,
                         const DerivativeFn& f, const SwitchingSchedule* sched) {
  if (sched) {
    const auto& ts = sched->switch_times;
    auto it = std::upper_bound(ts.begin(), ts.end(), t + 1e-12);
    if (it != ts.end() && *it < t + dt - 1e-12) {
      throw std::invalid_argument("rk4_step: step straddles a switching instant at t = " +
                                  std::to_string(*it));
    }
  }
  const Eigen::VectorXd k1 = f(t, y);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

LoopContext LoopContext::from(const SimConfig& cfg) {
  LoopContext ctx;
  ctx.cfg = &cfg;
  ctx.S = build_S(cfg.exosystem);
  ctx.layout = StateLayout::from(cfg);
  ctx.schedule = materialize_schedule(cfg.schedule, cfg.settings.horizon);
  return ctx;
}

LoopEval closed_loop_eval(const LoopContext& ctx, double t,
                          const Eigen::VectorXd& y, const Digraph& g) {
  const SimConfig& cfg = *ctx.cfg;
  const StateLayout& L = ctx.layout;
  const int q = L.q;
  const int r = L.r;
  const int n = cfg.n_agents();

  LoopEval eval;
  eval.ydot.resize(L.total);
  eval.s.resize(n);
  eval.u.resize(n);

  const Eigen::VectorXd v = y.head(q);
  eval.ydot.head(q) = ctx.S * v;
  const Eigen::VectorXd w = v.tail(cfg.exosystem.n_w);

  std::vector<ObserverState> bank(n);
  for (int i = 0; i < n; ++i) {
    bank[i].S_hat =
        Eigen::Map<const Eigen::MatrixXd>(y.data() + L.S_hat_offset[i], q, q);
    bank[i].v_hat = y.segment(L.v_hat_offset[i], q);
  }
  const std::vector<ObserverDerivative> obs =
      adaptive_observer_derivative(bank, g, ctx.S, v, cfg.observer);

  for (int i = 0; i < n; ++i) {
    eval.ydot.segment(L.S_hat_offset[i], q * q) =
        Eigen::Map<const Eigen::VectorXd>(obs[i].S_hat_dot.data(), q * q);
    eval.ydot.segment(L.v_hat_offset[i], q) = obs[i].v_hat_dot;

    const AgentModel& agent = cfg.agents[i];
    const ControllerParams& ctrl = cfg.controllers[i];
    const Eigen::VectorXd x = y.segment(L.x_offset[i], r);
    const Eigen::VectorXd theta_hat = y.segment(L.theta_offset[i], L.m[i]);
    const Eigen::VectorXd x_hat = bank[i].v_hat.head(r);
    const Eigen::VectorXd x_hat_dot = obs[i].v_hat_dot.head(r);
    const Eigen::VectorXd w_hat = bank[i].v_hat.tail(cfg.exosystem.n_w);

    const FilteredError ferr = compute_p_and_s(x, x_hat, x_hat_dot, ctrl);
    const Eigen::VectorXd f = agent.regressor(x, t);
    const ControlOutput ctl = control_and_adaptation(
        f, agent.disturbance, w_hat, ferr.s, ferr.p_ri_dot, theta_hat, ctrl);

    eval.ydot.segment(L.x_offset[i], r) =
        plant_derivative(agent, AgentState{x}, ctl.u, w, t);
    eval.ydot.segment(L.theta_offset[i], L.m[i]) = ctl.theta_hat_dot;
    eval.s[i] = ferr.s;
    eval.u[i] = ctl.u;
  }
  return eval;
}

Eigen::VectorXd closed_loop_derivative(const LoopContext& ctx, double t,
                                       const Eigen::VectorXd& y) {
  const int sigma = schedule_index_at(ctx.schedule, t);
  return closed_loop_eval(ctx, t, y, ctx.cfg->family.at_index(sigma)).ydot;
}

namespace {

double compute_lyapunov(const SimConfig& cfg, const StateLayout& L,
                        const Eigen::VectorXd& y, const std::vector<double>& s) {
  double value = 0.0;
  for (int i = 0; i < cfg.n_agents(); ++i) {
    const Eigen::VectorXd theta_tilde =
        y.segment(L.theta_offset[i], L.m[i]) - cfg.agents[i].theta;
    value += s[i] * s[i] +
             theta_tilde.dot(cfg.controllers[i].Lambda * theta_tilde);
  }
  return 0.5 * value;
}

}  // namespace

TrajectoryLog run(const SimConfig& cfg) {
  validate_config(cfg);
  LoopContext ctx = LoopContext::from(cfg);
  const StateLayout& L = ctx.layout;
  const int q = L.q;
  const int r = L.r;
  const int n = cfg.n_agents();
  const double T = cfg.settings.horizon;

  // Grid: switch instants (plus T) bound uniform sub-grids of width <= dt.
  std::vector<double> boundaries{0.0};
  for (double ts : ctx.schedule.switch_times) {
    if (ts > 1e-12 && ts < T - 1e-12) boundaries.push_back(ts);
  }
  boundaries.push_back(T);

  std::vector<double> grid{0.0};
  for (std::size_t seg = 0; seg + 1 < boundaries.size(); ++seg) {
    const double a = boundaries[seg];
    const double b = boundaries[seg + 1];
    if (b - a < 1e-15) continue;
    const int n_sub = std::max(
        1, static_cast<int>(std::ceil((b - a) / cfg.settings.dt - 1e-9)));
    const double h = (b - a) / n_sub;
    for (int k = 1; k < n_sub; ++k) grid.push_back(a + k * h);
    grid.push_back(b);
  }

  const int n_points = static_cast<int>(grid.size());
  TrajectoryLog log;
  log.n_agents = n;
  log.q = q;
  log.r = r;
  log.m = L.m;
  log.layout = L;
  log.t = grid;
  log.sigma.resize(n_points);
  log.v.resize(q, n_points);
  log.s_tilde_norm.resize(n, n_points);
  log.s.resize(n, n_points);
  log.u.resize(n, n_points);
  log.V.resize(n_points);
  for (int i = 0; i < n; ++i) {
    log.x.emplace_back(r, n_points);
    log.v_hat.emplace_back(q, n_points);
    log.theta_hat.emplace_back(L.m[i], n_points);
  }

  Eigen::VectorXd y = pack_initial_state(cfg, L);

  auto record = [&](int at, double t) {
    if (!y.allFinite()) {
      throw SimError("state became non-finite at t = " + std::to_string(t), t);
    }
    const int sigma = schedule_index_at(ctx.schedule, t);
    const Digraph& g = cfg.family.at_index(sigma);
    LoopEval eval;
    try {
      eval = closed_loop_eval(ctx, t, y, g);
    } catch (const std::invalid_argument& e) {
      throw SimError(std::string(e.what()) + " (t = " + std::to_string(t) + ")", t);
    }

    log.sigma[at] = sigma;
    log.v.col(at) = y.head(q);
    for (int i = 0; i < n; ++i) {
      log.x[i].col(at) = y.segment(L.x_offset[i], r);
      log.v_hat[i].col(at) = y.segment(L.v_hat_offset[i], q);
      log.theta_hat[i].col(at) = y.segment(L.theta_offset[i], L.m[i]);
      const Eigen::MatrixXd s_hat =
          Eigen::Map<const Eigen::MatrixXd>(y.data() + L.S_hat_offset[i], q, q);
      log.s_tilde_norm(i, at) = (s_hat - ctx.S).norm();
      log.s(i, at) = eval.s[i];
      log.u(i, at) = eval.u[i];
    }
    log.V(at) = compute_lyapunov(cfg, L, y, eval.s);
  };

  record(0, 0.0);
  int at = 1;
  for (std::size_t seg = 0; seg + 1 < boundaries.size(); ++seg) {
    const double a = boundaries[seg];
    const double b = boundaries[seg + 1];
    if (b - a < 1e-15) continue;
    const int sigma = schedule_index_at(ctx.schedule, a);
    const Digraph& g = cfg.family.at_index(sigma);
    DerivativeFn deriv = [&](double tt, const Eigen::VectorXd& yy) {
      return closed_loop_eval(ctx, tt, yy, g).ydot;
    };

    const int n_sub = std::max(
        1, static_cast<int>(std::ceil((b - a) / cfg.settings.dt - 1e-9)));
    const double h = (b - a) / n_sub;
    for (int k = 1; k <= n_sub; ++k) {
      const double t0 = a + (k - 1) * h;
      const double t1 = (k == n_sub) ? b : a + k * h;
      try {
        y = rk4_step(y, t0, t1 - t0, deriv);
      } catch (const std::invalid_argument& e) {
        // Post-validation the only stage failure is a non-finite state.
        throw SimError(std::string(e.what()) + " (t = " + std::to_string(t1) + ")",
                       t1);
      }
      record(at, t1);
      ++at;
    }
  }

  log.final_state = y;
  return log;
}

}  // namespace lfc
