#include "lfc/config_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace lfc {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected a boolean");
  return j.get<bool>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<int>(k)) = as_number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path, "expected a non-empty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t row = 0; row < j.size(); ++row) {
    const std::string row_path = path + "[" + std::to_string(row) + "]";
    if (!j[row].is_array() || j[row].size() != cols) {
      throw ConfigError(row_path, "rows must be equally sized arrays");
    }
    for (std::size_t col = 0; col < cols; ++col) {
      m(static_cast<int>(row), static_cast<int>(col)) =
          as_number(j[row][col], row_path + "[" + std::to_string(col) + "]");
    }
  }
  return m;
}

Polynomial as_polynomial(const json& j, const std::string& path, int n_vars) {
  if (j.is_string()) {
    try {
      return parse_polynomial(j.get<std::string>(), n_vars);
    } catch (const std::exception& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (j.is_object() && j.contains("poly")) {
    return as_polynomial(j["poly"], join(path, "poly"), n_vars);
  }
  if (!j.is_array()) {
    throw ConfigError(path, "expected a monomial table or expression string");
  }
  Polynomial poly;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string term_path = path + "[" + std::to_string(k) + "]";
    const Eigen::VectorXd row = as_vector(j[k], term_path);
    if (row.size() != n_vars + 1) {
      throw ConfigError(term_path,
                        "each term needs [coeff, exp_1, ..., exp_" +
                            std::to_string(n_vars) + "]");
    }
    Monomial term;
    term.coeff = row(0);
    for (int v = 0; v < n_vars; ++v) {
      const double e = row(v + 1);
      if (e < 0.0 || e != std::floor(e)) {
        throw ConfigError(term_path, "exponents must be nonnegative integers");
      }
      term.exps.push_back(static_cast<int>(e));
    }
    poly.push_back(std::move(term));
  }
  return poly;
}

Exosystem parse_exosystem(const json& j, const std::string& path) {
  Exosystem e;
  e.r = as_int(require(j, "r", path), join(path, "r"));
  e.alpha = as_vector(require(j, "alpha", path), join(path, "alpha"));
  if (j.contains("Sb") && !j["Sb"].is_null() && !j["Sb"].empty()) {
    e.S_b = as_matrix(j["Sb"], join(path, "Sb"));
    e.n_w = static_cast<int>(e.S_b.rows());
  } else {
    e.n_w = 0;
    e.S_b.resize(0, 0);
  }
  try {
    validate_exosystem(e);
  } catch (const std::exception& ex) {
    throw ConfigError(path, ex.what());
  }
  return e;
}

AgentModel parse_agent(const json& j, const std::string& path, int n_w) {
  AgentModel agent;
  agent.r = as_int(require(j, "r", path), join(path, "r"));
  agent.theta = as_vector(require(j, "theta", path), join(path, "theta"));
  agent.m = static_cast<int>(agent.theta.size());

  const json& reg = require(j, "regressor", path);
  const std::string reg_path = join(path, "regressor");
  if (reg.is_string() && reg.get<std::string>() == "van_der_pol") {
    if (agent.r != 2 || agent.m != 2) {
      throw ConfigError(reg_path, "van_der_pol requires r = 2 and 2 parameters");
    }
    agent.regressor = van_der_pol_fleet().front().regressor;
  } else if (reg.is_object() && reg.contains("polynomial")) {
    const json& comps = reg["polynomial"];
    const std::string comps_path = join(reg_path, "polynomial");
    if (!comps.is_array() || static_cast<int>(comps.size()) != agent.m) {
      throw ConfigError(comps_path, "need one polynomial per parameter");
    }
    std::vector<Polynomial> polys;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      polys.push_back(as_polynomial(
          comps[k], comps_path + "[" + std::to_string(k) + "]", agent.r));
    }
    agent.regressor = polynomial_regressor(polys);
  } else {
    throw ConfigError(reg_path, "expected \"van_der_pol\" or {\"polynomial\": ...}");
  }

  const json& dist = require(j, "disturbance", path);
  agent.disturbance = polynomial_disturbance(
      as_polynomial(dist, join(path, "disturbance"), n_w));
  return agent;
}

Digraph parse_graph(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("adjacency")) {
    const Eigen::MatrixXd a = as_matrix(j["adjacency"], join(path, "adjacency"));
    return Digraph{static_cast<int>(a.rows()), a};
  }
  if (j.is_object() && j.contains("edges")) {
    const int nodes = as_int(require(j, "nodes", path), join(path, "nodes"));
    const double weight =
        j.contains("weight") ? as_number(j["weight"], join(path, "weight")) : 1.0;
    const json& edges = j["edges"];
    const std::string edges_path = join(path, "edges");
    if (!edges.is_array()) throw ConfigError(edges_path, "expected an array");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nodes, nodes);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string e_path = edges_path + "[" + std::to_string(k) + "]";
      const Eigen::VectorXd e = as_vector(edges[k], e_path);
      if (e.size() != 2 && e.size() != 3) {
        throw ConfigError(e_path, "expected [from, to] or [from, to, weight]");
      }
      const int from = static_cast<int>(e(0));
      const int to = static_cast<int>(e(1));
      if (from < 0 || from >= nodes || to < 0 || to >= nodes) {
        throw ConfigError(e_path, "edge endpoint out of range");
      }
      a(to, from) = (e.size() == 3) ? e(2) : weight;
    }
    return Digraph{nodes, a};
  }
  throw ConfigError(path, "expected {\"adjacency\": ...} or {\"edges\": ...}");
}

ScheduleSpec parse_schedule(const json& j, const std::string& path) {
  ScheduleSpec spec;
  const std::string type =
      require(j, "type", path).is_string()
          ? j["type"].get<std::string>()
          : throw ConfigError(join(path, "type"), "expected a string");
  if (type == "periodic") {
    spec.periodic = true;
    spec.T0 = as_number(require(j, "T0", path), join(path, "T0"));
    const json& cycle = require(j, "cycle", path);
    const std::string cycle_path = join(path, "cycle");
    if (!cycle.is_array() || cycle.empty()) {
      throw ConfigError(cycle_path, "expected a non-empty array of indices");
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      spec.cycle.push_back(
          as_int(cycle[k], cycle_path + "[" + std::to_string(k) + "]"));
    }
  } else if (type == "explicit") {
    spec.periodic = false;
    const Eigen::VectorXd times =
        as_vector(require(j, "switch_times", path), join(path, "switch_times"));
    const Eigen::VectorXd indices =
        as_vector(require(j, "indices", path), join(path, "indices"));
    spec.explicit_schedule.dwell =
        as_number(require(j, "dwell", path), join(path, "dwell"));
    for (int k = 0; k < times.size(); ++k) {
      spec.explicit_schedule.switch_times.push_back(times(k));
    }
    for (int k = 0; k < indices.size(); ++k) {
      spec.explicit_schedule.indices.push_back(static_cast<int>(indices(k)));
    }
  } else {
    throw ConfigError(join(path, "type"), "expected \"periodic\" or \"explicit\"");
  }
  return spec;
}

ControllerParams parse_controller(const json& j, const std::string& path, int r,
                                  int m) {
  ControllerParams p;
  p.beta = as_vector(require(j, "beta", path), join(path, "beta"));
  p.k = as_number(require(j, "k", path), join(path, "k"));
  if (j.contains("Lambda")) {
    p.Lambda = as_matrix(j["Lambda"], join(path, "Lambda"));
  } else {
    p.Lambda = Eigen::MatrixXd::Identity(m, m);
  }
  if (j.contains("allow_small_k")) {
    p.allow_small_k = as_bool(j["allow_small_k"], join(path, "allow_small_k"));
  }
  if (p.beta.size() != r - 1) {
    throw ConfigError(join(path, "beta"), "expected r-1 coefficients");
  }
  return p;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(document)", e.what());
  }

  SimConfig cfg;
  cfg.exosystem = parse_exosystem(require(doc, "exosystem", ""), "exosystem");
  const int r = cfg.exosystem.r;

  const json& agents = require(doc, "agents", "");
  if (!agents.is_array() || agents.empty()) {
    throw ConfigError("agents", "expected a non-empty array");
  }
  for (std::size_t k = 0; k < agents.size(); ++k) {
    cfg.agents.push_back(parse_agent(
        agents[k], "agents[" + std::to_string(k) + "]", cfg.exosystem.n_w));
  }
  const int n = cfg.n_agents();

  const json& graphs = require(doc, "graphs", "");
  if (!graphs.is_array() || graphs.empty()) {
    throw ConfigError("graphs", "expected a non-empty array");
  }
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    cfg.family.graphs.push_back(
        parse_graph(graphs[k], "graphs[" + std::to_string(k) + "]"));
  }

  cfg.schedule = parse_schedule(require(doc, "schedule", ""), "schedule");

  const json& obs = require(doc, "observer", "");
  cfg.observer.mu0 = obs.contains("mu0") ? as_number(obs["mu0"], "observer.mu0") : 1.0;
  cfg.observer.mu1 = as_number(require(obs, "mu1", "observer"), "observer.mu1");
  cfg.observer.mu2 = as_number(require(obs, "mu2", "observer"), "observer.mu2");

  const json& ctrl = require(doc, "controller", "");
  if (ctrl.is_array()) {
    if (static_cast<int>(ctrl.size()) != n) {
      throw ConfigError("controller", "need one entry per agent");
    }
    for (std::size_t k = 0; k < ctrl.size(); ++k) {
      cfg.controllers.push_back(
          parse_controller(ctrl[k], "controller[" + std::to_string(k) + "]", r,
                           cfg.agents[k].m));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      cfg.controllers.push_back(parse_controller(ctrl, "controller", r,
                                                 cfg.agents[i].m));
    }
  }

  const json& init = require(doc, "init", "");
  if (init.contains("v0")) {
    cfg.init.v0 = as_vector(init["v0"], "init.v0");
  } else if (doc["exosystem"].contains("v0")) {
    cfg.init.v0 = as_vector(doc["exosystem"]["v0"], "exosystem.v0");
  } else {
    throw ConfigError("init.v0", "missing field (also accepted as exosystem.v0)");
  }

  auto parse_bank = [&](const char* key, auto parse_entry, auto& target,
                        bool required) {
    const std::string bank_path = std::string("init.") + key;
    if (!init.contains(key)) {
      if (required) throw ConfigError(bank_path, "missing field");
      return;
    }
    const json& bank = init[key];
    if (!bank.is_array()) throw ConfigError(bank_path, "expected an array");
    for (std::size_t k = 0; k < bank.size(); ++k) {
      target.push_back(
          parse_entry(bank[k], bank_path + "[" + std::to_string(k) + "]"));
    }
  };
  parse_bank("x", as_vector, cfg.init.x0, true);
  parse_bank("vhat", as_vector, cfg.init.v_hat0, true);
  parse_bank("Shat", as_matrix, cfg.init.S_hat0, false);
  parse_bank("thetahat", as_vector, cfg.init.theta_hat0, false);

  const json& sim = require(doc, "sim", "");
  cfg.settings.dt = as_number(require(sim, "dt", "sim"), "sim.dt");
  cfg.settings.horizon = as_number(require(sim, "T", "sim"), "sim.T");
  if (sim.contains("joint_epsilon")) {
    cfg.settings.joint_epsilon = as_number(sim["joint_epsilon"], "sim.joint_epsilon");
  }
  if (sim.contains("waive_assumptions")) {
    cfg.settings.waive_assumption_checks =
        as_bool(sim["waive_assumptions"], "sim.waive_assumptions");
  }
  if (sim.contains("out")) {
    if (!sim["out"].is_string()) throw ConfigError("sim.out", "expected a string");
    cfg.settings.out_dir = sim["out"].get<std::string>();
  }

  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("(file)", "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lfc
