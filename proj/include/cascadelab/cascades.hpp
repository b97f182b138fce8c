#ifndef CASCADELAB_CASCADES_HPP
#define CASCADELAB_CASCADES_HPP

#include <vector>

#include "cascadelab/node_bits.hpp"

namespace cascadelab {

// One realization of a diffusion: seeds plus the final active set.
// Node id lists are kept sorted ascending; seeds is a subset of active.
struct Cascade {
  std::vector<NodeId> seeds;
  std::vector<NodeId> active;
};

// A cascade after the observation-loss process: seeds are always kept,
// non-seed activations survive independently per node.
struct IncompleteCascade {
  std::vector<NodeId> seeds;
  std::vector<NodeId> observed;
};

}  // namespace cascadelab

#endif
