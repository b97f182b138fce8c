#ifndef CASCADELAB_DIFFUSION_HPP
#define CASCADELAB_DIFFUSION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cascadelab/cascades.hpp"
#include "cascadelab/graph.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

enum class ModelKind { DIC, DLT, CIC };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

/**
  A fully parameterized diffusion process: the model family, the weighted
  graph, and (for CIC) the observation window. DIC weights are activation
  probabilities, DLT weights are threshold shares (per-node in-sums must not
  exceed 1), CIC weights are exponential delay rates.
*/
struct DiffusionSpec {
  ModelKind kind = ModelKind::DIC;
  DirectedGraph graph;
  double window = 0.0;  // CIC only

  void validate() const;
};

// A sampled live-edge graph. `live` has one flag per edge in canonical
// order; for CIC every edge is live and `delays` carries its delay draw.
struct LiveEdgeGraph {
  std::vector<std::uint8_t> live;
  std::vector<double> delays;  // CIC only, size m
};

struct InfluenceEstimate {
  std::vector<double> marginals;
  double total = 0.0;
};

/**
  Runs one cascade. Draw consumption per call is fixed so batch generation
  can hand each cascade its own substream: DIC consumes m uniforms (edge
  order), DLT consumes n uniforms (node thresholds, id order), CIC consumes
  m uniforms (edge delays, edge order).
*/
Cascade simulate(const DiffusionSpec& spec, const std::vector<NodeId>& seeds,
                 Rng& rng);

// Same process, also records the set of nodes newly activated per round
// (round 0 = seeds). CIC rounds are in order of arrival time.
Cascade simulate_with_trace(const DiffusionSpec& spec,
                            const std::vector<NodeId>& seeds, Rng& rng,
                            std::vector<std::vector<NodeId>>& rounds);

LiveEdgeGraph sample_live_edge(const DiffusionSpec& spec, Rng& rng);

// Nodes reachable from the seeds across live edges; with a window, nodes
// whose shortest delay-weighted distance from any seed is at most T.
std::vector<NodeId> reachable(const DirectedGraph& g, const LiveEdgeGraph& live,
                              const std::vector<NodeId>& seeds,
                              std::optional<double> window = std::nullopt);

/**
  Exact per-node activation probabilities by full enumeration of the
  live-edge distribution. DIC enumerates all 2^m edge subsets (m <= 22);
  DLT enumerates per-node in-edge choices (product of (d_v+1) <= 4e6).
  Not available for CIC.
*/
std::vector<double> exact_influence(const DiffusionSpec& spec,
                                    const std::vector<NodeId>& seeds);

// Monte Carlo estimate over `samples` independent live-edge draws.
// Sample i uses the substream derive_seed(seed, stream::live_edge, i), so
// the parallel kernel and the serial reference agree bit for bit.
InfluenceEstimate mc_influence(const DiffusionSpec& spec,
                               const std::vector<NodeId>& seeds, long samples,
                               std::uint64_t seed, int threads = 0);
InfluenceEstimate mc_influence_serial(const DiffusionSpec& spec,
                                      const std::vector<NodeId>& seeds,
                                      long samples, std::uint64_t seed);

// Batch cascade generation, one substream per cascade index.
std::vector<Cascade> simulate_batch(const DiffusionSpec& spec,
                                    const std::vector<std::vector<NodeId>>& seed_sets,
                                    std::uint64_t seed, int threads = 0);
std::vector<Cascade> simulate_batch_serial(
    const DiffusionSpec& spec, const std::vector<std::vector<NodeId>>& seed_sets,
    std::uint64_t seed);

}  // namespace cascadelab

#endif
