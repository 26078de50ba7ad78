#include "lfc/graph.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lfc {

Digraph make_digraph(int node_count, const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != node_count || adjacency.cols() != node_count) {
    throw std::invalid_argument("adjacency matrix must be node_count x node_count");
  }
  return Digraph{node_count, adjacency};
}

Digraph digraph_from_edges(int node_count,
                           const std::vector<std::pair<int, int>>& edges,
                           double weight) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(node_count, node_count);
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= node_count || to < 0 || to >= node_count) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    a(to, from) = weight;  // edge (j,i): row i receives from column j
  }
  return Digraph{node_count, a};
}

std::vector<std::string> validate_digraph(const Digraph& g) {
  std::vector<std::string> violations;
  if (g.node_count < 2) {
    violations.push_back("node_count must be at least 2");
  }
  if (g.adjacency.rows() != g.node_count || g.adjacency.cols() != g.node_count) {
    violations.push_back("adjacency dimensions do not match node_count");
    return violations;
  }
  for (int i = 0; i < g.node_count; ++i) {
    if (g.adjacency(i, i) != 0.0) {
      violations.push_back("self-loop at node " + std::to_string(i));
    }
    for (int j = 0; j < g.node_count; ++j) {
      if (g.adjacency(i, j) < 0.0 || !std::isfinite(g.adjacency(i, j))) {
        violations.push_back("negative weight at a[" + std::to_string(i) + "][" +
                             std::to_string(j) + "]");
      }
    }
  }
  for (int j = 0; j < g.node_count; ++j) {
    if (g.adjacency(0, j) != 0.0) {
      violations.push_back("leader row nonzero at a[0][" + std::to_string(j) + "]");
    }
  }
  return violations;
}

Digraph graph_union(const std::vector<Digraph>& graphs) {
  if (graphs.empty()) {
    throw std::invalid_argument("graph_union requires at least one graph");
  }
  const int n = graphs.front().node_count;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Digraph& g : graphs) {
    if (g.node_count != n) {
      throw std::invalid_argument("graph_union: mismatched node_count");
    }
    a += g.adjacency;
  }
  return Digraph{n, a};
}

bool has_spanning_tree_from(const Digraph& g, int root) {
  if (root < 0 || root >= g.node_count) {
    throw std::invalid_argument("root index out of range");
  }
  std::vector<char> seen(g.node_count, 0);
  std::deque<int> frontier{root};
  seen[root] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop_front();
    for (int i = 0; i < g.node_count; ++i) {
      if (!seen[i] && g.adjacency(i, j) > 0.0) {
        seen[i] = 1;
        ++reached;
        frontier.push_back(i);
      }
    }
  }
  return reached == g.node_count;
}

Eigen::MatrixXd h_matrix(const Digraph& g) {
  const auto violations = validate_digraph(g);
  if (!violations.empty()) {
    throw std::invalid_argument("h_matrix: invalid graph: " + violations.front());
  }
  const int n_followers = g.node_count - 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_followers, n_followers);
  for (int i = 1; i < g.node_count; ++i) {
    for (int j = 1; j < g.node_count; ++j) {
      if (i != j) h(i - 1, j - 1) = -g.adjacency(i, j);
    }
    h(i - 1, i - 1) = g.adjacency.row(i).sum();
  }
  return h;
}

void validate_family(const GraphFamily& family) {
  if (family.graphs.empty()) {
    throw std::invalid_argument("graph family must be non-empty");
  }
  const int n = family.graphs.front().node_count;
  for (std::size_t k = 0; k < family.graphs.size(); ++k) {
    if (family.graphs[k].node_count != n) {
      throw std::invalid_argument("graph family: mismatched node_count at graph " +
                                  std::to_string(k + 1));
    }
    const auto violations = validate_digraph(family.graphs[k]);
    if (!violations.empty()) {
      throw std::invalid_argument("graph " + std::to_string(k + 1) + ": " +
                                  violations.front());
    }
  }
}

void validate_schedule(const SwitchingSchedule& sched, int family_size) {
  if (sched.switch_times.empty() || sched.switch_times.front() != 0.0) {
    throw std::invalid_argument("schedule must start at t = 0");
  }
  if (sched.indices.size() != sched.switch_times.size()) {
    throw std::invalid_argument("schedule needs one index per interval");
  }
  if (sched.dwell <= 0.0) {
    throw std::invalid_argument("dwell time must be positive");
  }
  for (std::size_t k = 0; k + 1 < sched.switch_times.size(); ++k) {
    const double gap = sched.switch_times[k + 1] - sched.switch_times[k];
    if (gap < sched.dwell - 1e-12) {
      throw std::invalid_argument("switch interval " + std::to_string(k) +
                                  " shorter than the dwell time");
    }
  }
  for (int idx : sched.indices) {
    if (idx < 1 || idx > family_size) {
      throw std::invalid_argument("schedule index " + std::to_string(idx) +
                                  " outside 1.." + std::to_string(family_size));
    }
  }
}

int schedule_index_at(const SwitchingSchedule& sched, double t) {
  const auto& ts = sched.switch_times;
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t k = (it == ts.begin()) ? 0 : (it - ts.begin() - 1);
  return sched.indices[std::min(k, sched.indices.size() - 1)];
}

JointConnectivityReport check_jointly_connected(const GraphFamily& family,
                                                const SwitchingSchedule& sched,
                                                double epsilon) {
  validate_family(family);
  validate_schedule(sched, family.size());
  if (epsilon <= sched.dwell) {
    throw std::invalid_argument("epsilon must exceed the dwell time");
  }

  const int n_intervals = static_cast<int>(sched.indices.size());
  auto interval_end = [&](int k) {
    return (k + 1 < n_intervals) ? sched.switch_times[k + 1]
                                 : sched.switch_times[k] + sched.dwell;
  };

  JointConnectivityReport report;
  int start = 0;
  while (start < n_intervals) {
    const double t_start = sched.switch_times[start];
    Digraph acc{family.graphs.front().node_count,
                Eigen::MatrixXd::Zero(family.graphs.front().node_count,
                                      family.graphs.front().node_count)};
    bool closed = false;
    for (int k = start; k < n_intervals; ++k) {
      acc = graph_union({acc, family.at_index(sched.indices[k])});
      if (has_spanning_tree_from(acc, 0)) {
        if (interval_end(k) - t_start >= epsilon) return report;  // window too long
        report.windows.emplace_back(start, k);
        start = k + 1;
        closed = true;
        break;
      }
      if (interval_end(k) - t_start >= epsilon) return report;
    }
    if (!closed) return report;  // ran out of intervals mid-window
  }
  report.jointly_connected = true;
  return report;
}

}  // namespace lfc
