#pragma once

#include "lfc/sim.hpp"

namespace lfc {

/// Four single-edge digraphs over nodes 0..4 with unit weights:
/// {(0,1)}, {(1,2)}, {(2,3)}, {(3,4)}. Each is disconnected on its own;
/// their union is the chain 0->1->2->3->4 rooted at the leader.
GraphFamily default_graph_family();

/// The built-in benchmark: four van der Pol followers tracking a two-tone
/// leader under the four-phase periodic switching schedule, with
/// mu1 = 3, mu2 = 12, beta1 = 1, k = 3, Lambda = I, dt = 1e-3, T = 100.
SimConfig vdp_scenario();

}  // namespace lfc
