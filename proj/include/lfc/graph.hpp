#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace lfc {

/// Weighted directed communication graph over nodes 0..N, where node 0 is
/// the leader. Edge (j,i) exists iff adjacency(i,j) > 0, i.e. agent i can
/// use information from agent j. The leader row is identically zero.
struct Digraph {
  int node_count = 0;          // N+1 nodes including the leader
  Eigen::MatrixXd adjacency;   // (N+1) x (N+1), entries a_ij >= 0

  int follower_count() const { return node_count - 1; }
};

/// Ordered family of candidate topologies, indexed 1..n0 by the switching
/// signal.
struct GraphFamily {
  std::vector<Digraph> graphs;

  int size() const { return static_cast<int>(graphs.size()); }
  const Digraph& at_index(int sigma) const { return graphs.at(sigma - 1); }
};

/// Piecewise-constant assignment of family indices to time. Interval k is
/// [switch_times[k], switch_times[k+1]); the last interval extends to
/// infinity. Consecutive switch times are separated by at least `dwell`.
struct SwitchingSchedule {
  std::vector<double> switch_times;  // t0 = 0 < t1 < t2 < ...
  std::vector<int> indices;          // sigma(t) in 1..n0, one per interval
  double dwell = 0.0;
};

Digraph make_digraph(int node_count, const Eigen::MatrixXd& adjacency);
Digraph digraph_from_edges(int node_count,
                           const std::vector<std::pair<int, int>>& edges,
                           double weight = 1.0);

/// Returns one message per violated invariant; empty iff the graph is valid.
std::vector<std::string> validate_digraph(const Digraph& g);

/// Edge-set union; the weight of a shared edge is the sum of member weights.
Digraph graph_union(const std::vector<Digraph>& graphs);

/// True iff every node is reachable from `root` along directed edges.
bool has_spanning_tree_from(const Digraph& g, int root);

/// H matrix of the followers: h_ij = -a_ij (i != j), h_ii = sum_j a_ij,
/// for i,j = 1..N. Throws if the graph is invalid.
Eigen::MatrixXd h_matrix(const Digraph& g);

void validate_family(const GraphFamily& family);
void validate_schedule(const SwitchingSchedule& sched, int family_size);

/// Index of the schedule interval containing t (the last index persists
/// beyond the final switch time).
int schedule_index_at(const SwitchingSchedule& sched, double t);

struct JointConnectivityReport {
  bool jointly_connected = false;
  // Inclusive interval-index ranges; each window's graph union contains a
  // spanning tree rooted at node 0.
  std::vector<std::pair<int, int>> windows;
};

/// Greedy left-to-right windowing check of the joint-connectivity condition:
/// the schedule is partitioned into consecutive windows of span < epsilon
/// whose active-graph unions each contain a spanning tree rooted at node 0.
/// The final interval is treated as lasting one dwell time.
JointConnectivityReport check_jointly_connected(const GraphFamily& family,
                                                const SwitchingSchedule& sched,
                                                double epsilon);

}  // namespace lfc
