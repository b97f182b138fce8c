#ifndef CASCADELAB_GRAPH_HPP
#define CASCADELAB_GRAPH_HPP

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cascadelab/cascades.hpp"
#include "cascadelab/node_bits.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

struct Edge {
  NodeId src;
  NodeId dst;
  double weight;
};

/**
  Weighted directed graph with dense ids 0..n-1. Edges are stored in a
  canonical order (the order they were handed in); adjacency is kept as CSR
  lists of edge indices so samplers can draw one value per edge in a fixed
  order. Immutable after construction.
*/
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  std::span<const int> out_edges(NodeId u) const {
    return {out_index_.data() + out_start_[u],
            static_cast<std::size_t>(out_start_[u + 1] - out_start_[u])};
  }
  std::span<const int> in_edges(NodeId v) const {
    return {in_index_.data() + in_start_[v],
            static_cast<std::size_t>(in_start_[v + 1] - in_start_[v])};
  }
  int in_degree(NodeId v) const { return in_start_[v + 1] - in_start_[v]; }
  int out_degree(NodeId u) const { return out_start_[u + 1] - out_start_[u]; }

  double in_weight_sum(NodeId v) const;

  // Same structure, new weights (one per edge, canonical order).
  DirectedGraph with_weights(std::vector<double> weights) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> out_start_, out_index_;
  std::vector<int> in_start_, in_index_;
};

/**
  Stochastic Kronecker generator parameters: a 2x2 seed matrix (row major),
  the power k (graph has 2^k nodes) and the number of distinct edges to
  sample by ball dropping.
*/
struct KroneckerSpec {
  std::array<double, 4> seed_matrix;
  int power = 0;
  long edge_count = 0;

  void validate() const;
};

// One ball drop: descend `power` levels of the seed matrix, picking a
// quadrant proportionally to its cell value. Exposed for distribution tests.
std::pair<NodeId, NodeId> kronecker_drop(const KroneckerSpec& spec, Rng& rng);

// Samples edge_count distinct non-self-loop edges; duplicates and self loops
// are rejected and redrawn, capped at 1000 * edge_count attempts.
DirectedGraph kronecker_generate(const KroneckerSpec& spec, Rng& rng);

struct WeightScheme {
  enum class Kind { DicUniform, DltInDegree, CicUniform };
  Kind kind = Kind::DicUniform;
  double lo = 0.0;
  double hi = 0.4;

  // "dic-uniform:0,0.4" | "dlt-indegree" | "cic-uniform:0,1"
  static WeightScheme parse(const std::string& text);
  std::string to_string() const;
};

DirectedGraph assign_weights(const DirectedGraph& g, const WeightScheme& scheme,
                             Rng& rng);

/**
  The layered graph: one shadow node n+v per base node v, reached only by the
  edge (v, n+v) whose weight is v's retention rate. Base edges keep their
  canonical positions; shadow edges are appended in node order.
*/
struct LayeredGraph {
  DirectedGraph base;
  std::vector<double> rates;

  int num_nodes() const { return 2 * base.num_nodes(); }
  NodeId shadow_of(NodeId v) const { return base.num_nodes() + v; }

  // Materializes the 2n-node graph (m base edges then n shadow edges).
  DirectedGraph to_graph() const;
};

LayeredGraph transform_graph(const DirectedGraph& g, std::vector<double> rates);
LayeredGraph transform_graph(const DirectedGraph& g, double rate);

// Lifts incomplete cascades onto the layered graph: shadow n+v is included
// deterministically for observed non-seeds and with probability r_v for
// seeds; base observations carry through unchanged. Consumes one draw per
// seed node, ascending id order, per cascade.
std::vector<Cascade> transform_cascades(
    const std::vector<IncompleteCascade>& cascades, int n,
    const std::vector<double>& rates, Rng& rng);

}  // namespace cascadelab

#endif
