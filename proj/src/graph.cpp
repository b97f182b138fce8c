#include "cascadelab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cascadelab {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace

DirectedGraph::DirectedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw std::invalid_argument("graph: negative node count");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("graph: self loop");
    if (!seen.insert(pair_key(e.src, e.dst)).second)
      throw std::invalid_argument("graph: duplicate edge");
  }

  out_start_.assign(n_ + 1, 0);
  in_start_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++out_start_[e.src + 1];
    ++in_start_[e.dst + 1];
  }
  for (int v = 0; v < n_; ++v) {
    out_start_[v + 1] += out_start_[v];
    in_start_[v + 1] += in_start_[v];
  }
  out_index_.resize(edges_.size());
  in_index_.resize(edges_.size());
  std::vector<int> out_pos(out_start_.begin(), out_start_.end() - 1);
  std::vector<int> in_pos(in_start_.begin(), in_start_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    out_index_[out_pos[edges_[e].src]++] = e;
    in_index_[in_pos[edges_[e].dst]++] = e;
  }
}

double DirectedGraph::in_weight_sum(NodeId v) const {
  double s = 0.0;
  for (int e : in_edges(v)) s += edges_[e].weight;
  return s;
}

DirectedGraph DirectedGraph::with_weights(std::vector<double> weights) const {
  if (weights.size() != edges_.size())
    throw std::invalid_argument("with_weights: size mismatch");
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].weight = weights[e];
  return DirectedGraph(n_, std::move(edges));
}

void KroneckerSpec::validate() const {
  if (power < 0) throw std::invalid_argument("kronecker: negative power");
  if (edge_count < 0) throw std::invalid_argument("kronecker: negative edge count");
  for (double p : seed_matrix)
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("kronecker: seed entries must lie in [0,1]");
  const double n = std::ldexp(1.0, power);  // 2^k
  if (static_cast<double>(edge_count) > n * (n - 1.0))
    throw std::invalid_argument("kronecker: edge count infeasible for 2^k nodes");
  if (edge_count > 0 &&
      seed_matrix[0] + seed_matrix[1] + seed_matrix[2] + seed_matrix[3] <= 0.0)
    throw std::invalid_argument("kronecker: zero seed matrix");
}

std::pair<NodeId, NodeId> kronecker_drop(const KroneckerSpec& spec, Rng& rng) {
  const double total = spec.seed_matrix[0] + spec.seed_matrix[1] +
                       spec.seed_matrix[2] + spec.seed_matrix[3];
  NodeId u = 0, v = 0;
  for (int level = 0; level < spec.power; ++level) {
    double x = uniform01(rng) * total;
    int cell = 3;
    for (int c = 0; c < 3; ++c) {
      if (x < spec.seed_matrix[c]) {
        cell = c;
        break;
      }
      x -= spec.seed_matrix[c];
    }
    u = (u << 1) | (cell >> 1);
    v = (v << 1) | (cell & 1);
  }
  return {u, v};
}

DirectedGraph kronecker_generate(const KroneckerSpec& spec, Rng& rng) {
  spec.validate();
  const int n = 1 << spec.power;
  if (spec.edge_count == 0) return DirectedGraph(n, {});

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(spec.edge_count * 2);
  std::vector<Edge> edges;
  edges.reserve(spec.edge_count);
  const long max_attempts = 1000L * spec.edge_count;
  long attempts = 0;
  while (static_cast<long>(edges.size()) < spec.edge_count) {
    if (++attempts > max_attempts)
      throw std::runtime_error("kronecker: attempt cap hit; edge count too dense");
    auto [u, v] = kronecker_drop(spec, rng);
    if (u == v) continue;
    if (!seen.insert(pair_key(u, v)).second) continue;
    edges.push_back({u, v, 0.0});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  return DirectedGraph(n, std::move(edges));
}

WeightScheme WeightScheme::parse(const std::string& text) {
  WeightScheme s;
  std::string name = text;
  std::string args;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    name = text.substr(0, pos);
    args = text.substr(pos + 1);
  }
  if (name == "dlt-indegree") {
    if (!args.empty())
      throw std::invalid_argument("weight scheme: dlt-indegree takes no args");
    s.kind = Kind::DltInDegree;
    return s;
  }
  if (name == "dic-uniform")
    s.kind = Kind::DicUniform;
  else if (name == "cic-uniform")
    s.kind = Kind::CicUniform;
  else
    throw std::invalid_argument("weight scheme: unknown scheme '" + name + "'");
  auto comma = args.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("weight scheme: expected lo,hi after ':'");
  s.lo = std::stod(args.substr(0, comma));
  s.hi = std::stod(args.substr(comma + 1));
  if (!(s.lo <= s.hi)) throw std::invalid_argument("weight scheme: lo > hi");
  return s;
}

std::string WeightScheme::to_string() const {
  switch (kind) {
    case Kind::DltInDegree:
      return "dlt-indegree";
    case Kind::DicUniform:
      return "dic-uniform:" + std::to_string(lo) + "," + std::to_string(hi);
    case Kind::CicUniform:
      return "cic-uniform:" + std::to_string(lo) + "," + std::to_string(hi);
  }
  return {};
}

DirectedGraph assign_weights(const DirectedGraph& g, const WeightScheme& scheme,
                             Rng& rng) {
  const int m = g.num_edges();
  std::vector<double> w(m, 0.0);
  switch (scheme.kind) {
    case WeightScheme::Kind::DicUniform: {
      std::uniform_real_distribution<double> dist(scheme.lo, scheme.hi);
      for (int e = 0; e < m; ++e) w[e] = dist(rng);
      break;
    }
    case WeightScheme::Kind::DltInDegree: {
      for (int e = 0; e < m; ++e)
        w[e] = 1.0 / static_cast<double>(g.in_degree(g.edge(e).dst));
      break;
    }
    case WeightScheme::Kind::CicUniform: {
      std::uniform_real_distribution<double> dist(scheme.lo, scheme.hi);
      for (int e = 0; e < m; ++e) {
        double rate = dist(rng);
        while (rate <= 0.0) rate = dist(rng);  // CIC rates must be positive
        w[e] = rate;
      }
      break;
    }
  }
  return g.with_weights(std::move(w));
}

DirectedGraph LayeredGraph::to_graph() const {
  const int n = base.num_nodes();
  std::vector<Edge> edges = base.edges();
  edges.reserve(edges.size() + n);
  for (NodeId v = 0; v < n; ++v)
    edges.push_back({v, static_cast<NodeId>(n + v), rates[v]});
  return DirectedGraph(2 * n, std::move(edges));
}

LayeredGraph transform_graph(const DirectedGraph& g, std::vector<double> rates) {
  if (static_cast<int>(rates.size()) != g.num_nodes())
    throw std::invalid_argument("transform_graph: rates size mismatch");
  for (double r : rates)
    if (!(r > 0.0 && r <= 1.0))
      throw std::invalid_argument("transform_graph: rate outside (0,1]");
  return LayeredGraph{g, std::move(rates)};
}

LayeredGraph transform_graph(const DirectedGraph& g, double rate) {
  return transform_graph(g, std::vector<double>(g.num_nodes(), rate));
}

std::vector<Cascade> transform_cascades(
    const std::vector<IncompleteCascade>& cascades, int n,
    const std::vector<double>& rates, Rng& rng) {
  if (static_cast<int>(rates.size()) != n)
    throw std::invalid_argument("transform_cascades: rates size mismatch");
  std::vector<Cascade> out;
  out.reserve(cascades.size());
  for (const IncompleteCascade& c : cascades) {
    Cascade t;
    t.seeds = c.seeds;
    t.active = c.observed;
    NodeBits seed_bits = NodeBits::of(n, c.seeds);
    for (NodeId v : c.observed)
      if (!seed_bits.test(v)) t.active.push_back(static_cast<NodeId>(n + v));
    for (NodeId v : c.seeds)
      if (uniform01(rng) < rates[v]) t.active.push_back(static_cast<NodeId>(n + v));
    std::sort(t.active.begin(), t.active.end());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace cascadelab
