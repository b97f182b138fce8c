#ifndef CASCADELAB_TEST_SUPPORT_HPP
#define CASCADELAB_TEST_SUPPORT_HPP

#include <algorithm>
#include <vector>

#include "cascadelab/diffusion.hpp"

namespace cascadelab::testing {

inline DiffusionSpec make_spec(ModelKind kind, int n,
                               std::vector<Edge> edges, double window = 0.0) {
  DiffusionSpec spec{kind, DirectedGraph(n, std::move(edges)), window};
  spec.validate();
  return spec;
}

// DIC chain u -> v -> w with both weights 0.5.
inline DiffusionSpec dic_chain() {
  return make_spec(ModelKind::DIC, 3, {{0, 1, 0.5}, {1, 2, 0.5}});
}

// Random instance with <= 5 nodes and <= 8 edges; DIC weights in [0.1, 0.9],
// DLT in-weights scaled so every in-sum stays below 0.95.
inline DiffusionSpec random_tiny_instance(ModelKind kind, Rng& rng) {
  std::uniform_int_distribution<int> n_dist(2, 5);
  const int n = n_dist(rng);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) pairs.push_back({u, v});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::uniform_int_distribution<int> m_dist(1, std::min<int>(8, pairs.size()));
  const int m = m_dist(rng);
  pairs.resize(m);
  std::sort(pairs.begin(), pairs.end());

  std::vector<Edge> edges;
  std::uniform_real_distribution<double> w_dist(0.1, 0.9);
  for (auto [u, v] : pairs) edges.push_back({u, v, w_dist(rng)});

  if (kind == ModelKind::DLT) {
    std::vector<double> in_sum(n, 0.0);
    for (const Edge& e : edges) in_sum[e.dst] += e.weight;
    for (Edge& e : edges)
      if (in_sum[e.dst] > 0.95) e.weight *= 0.95 / in_sum[e.dst];
  }
  return make_spec(kind, n, std::move(edges));
}

inline std::vector<NodeId> random_seed_set(int n, Rng& rng) {
  std::uniform_int_distribution<int> size_dist(1, std::max(1, n / 2));
  const int size = size_dist(rng);
  std::vector<NodeId> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace cascadelab::testing

#endif
