#include "cascadelab/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "cascadelab/threads.hpp"

namespace cascadelab {

namespace {

constexpr double kDltSumSlack = 1e-9;
constexpr int kDicEnumEdgeLimit = 22;
constexpr double kDltEnumComboLimit = 4e6;

void check_seeds(const DiffusionSpec& spec, const std::vector<NodeId>& seeds,
                 bool allow_empty = false) {
  if (seeds.empty() && !allow_empty)
    throw std::invalid_argument("simulate: empty seed set");
  for (NodeId s : seeds)
    if (s < 0 || s >= spec.graph.num_nodes())
      throw std::invalid_argument("simulate: seed id out of range");
}

std::vector<NodeId> sorted_ids(const NodeBits& bits) { return bits.to_ids(); }

}  // namespace

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::DIC: return "dic";
    case ModelKind::DLT: return "dlt";
    case ModelKind::CIC: return "cic";
  }
  return {};
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "dic") return ModelKind::DIC;
  if (name == "dlt") return ModelKind::DLT;
  if (name == "cic") return ModelKind::CIC;
  throw std::invalid_argument("unknown diffusion model '" + name + "'");
}

void DiffusionSpec::validate() const {
  switch (kind) {
    case ModelKind::DIC:
      for (const Edge& e : graph.edges())
        if (e.weight < 0.0 || e.weight > 1.0)
          throw std::invalid_argument("DIC weights must lie in [0,1]");
      break;
    case ModelKind::DLT: {
      for (const Edge& e : graph.edges())
        if (e.weight < 0.0 || e.weight > 1.0)
          throw std::invalid_argument("DLT weights must lie in [0,1]");
      for (NodeId v = 0; v < graph.num_nodes(); ++v)
        if (graph.in_weight_sum(v) > 1.0 + kDltSumSlack)
          throw std::invalid_argument("DLT in-weight sum exceeds 1");
      break;
    }
    case ModelKind::CIC:
      for (const Edge& e : graph.edges())
        if (!(e.weight > 0.0))
          throw std::invalid_argument("CIC rates must be positive");
      if (!(window > 0.0))
        throw std::invalid_argument("CIC requires a positive window");
      break;
  }
}

Cascade simulate(const DiffusionSpec& spec, const std::vector<NodeId>& seeds,
                 Rng& rng) {
  std::vector<std::vector<NodeId>> rounds;
  return simulate_with_trace(spec, seeds, rng, rounds);
}

Cascade simulate_with_trace(const DiffusionSpec& spec,
                            const std::vector<NodeId>& seeds, Rng& rng,
                            std::vector<std::vector<NodeId>>& rounds) {
  check_seeds(spec, seeds);
  const DirectedGraph& g = spec.graph;
  const int n = g.num_nodes();
  const int m = g.num_edges();
  rounds.clear();

  NodeBits active(n);
  std::vector<NodeId> frontier = seeds;
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  for (NodeId s : frontier) active.set(s);
  rounds.push_back(frontier);

  switch (spec.kind) {
    case ModelKind::DIC: {
      // Attempt outcomes are bound to edges up front: the per-round process
      // below then yields exactly live-edge reachability, so the node order
      // within a round cannot change the final set.
      std::vector<std::uint8_t> live(m);
      for (int e = 0; e < m; ++e)
        live[e] = uniform01(rng) < g.edge(e).weight ? 1 : 0;
      while (!frontier.empty()) {
        std::vector<NodeId> next;
        for (NodeId u : frontier) {
          for (int e : g.out_edges(u)) {
            NodeId v = g.edge(e).dst;
            if (!active.test(v) && live[e]) {
              active.set(v);
              next.push_back(v);
            }
          }
        }
        std::sort(next.begin(), next.end());
        if (!next.empty()) rounds.push_back(next);
        frontier = std::move(next);
      }
      break;
    }
    case ModelKind::DLT: {
      std::vector<double> theta(n);
      for (NodeId v = 0; v < n; ++v) theta[v] = uniform01(rng);
      std::vector<double> acc(n, 0.0);
      while (!frontier.empty()) {
        std::vector<NodeId> touched;
        for (NodeId u : frontier) {
          for (int e : g.out_edges(u)) {
            NodeId v = g.edge(e).dst;
            if (!active.test(v)) {
              acc[v] += g.edge(e).weight;
              touched.push_back(v);
            }
          }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        std::vector<NodeId> next;
        for (NodeId v : touched) {
          if (!active.test(v) && acc[v] >= theta[v]) {
            active.set(v);
            next.push_back(v);
          }
        }
        if (!next.empty()) rounds.push_back(next);
        frontier = std::move(next);
      }
      break;
    }
    case ModelKind::CIC: {
      spec.validate();
      LiveEdgeGraph live = sample_live_edge(spec, rng);
      std::vector<double> dist(n, std::numeric_limits<double>::infinity());
      using Item = std::pair<double, NodeId>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      for (NodeId s : frontier) {
        dist[s] = 0.0;
        heap.push({0.0, s});
      }
      std::vector<std::pair<double, NodeId>> arrivals;
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (int e : g.out_edges(u)) {
          NodeId v = g.edge(e).dst;
          double nd = d + live.delays[e];
          if (nd < dist[v] && nd <= spec.window) {
            dist[v] = nd;
            heap.push({nd, v});
          }
        }
      }
      for (NodeId v = 0; v < n; ++v)
        if (dist[v] <= spec.window && !active.test(v)) {
          active.set(v);
          arrivals.push_back({dist[v], v});
        }
      std::sort(arrivals.begin(), arrivals.end());
      for (auto& [d, v] : arrivals) rounds.push_back({v});
      break;
    }
  }

  Cascade c;
  c.seeds = rounds.front();
  c.active = sorted_ids(active);
  return c;
}

LiveEdgeGraph sample_live_edge(const DiffusionSpec& spec, Rng& rng) {
  const DirectedGraph& g = spec.graph;
  const int m = g.num_edges();
  LiveEdgeGraph out;
  switch (spec.kind) {
    case ModelKind::DIC: {
      out.live.resize(m);
      for (int e = 0; e < m; ++e)
        out.live[e] = uniform01(rng) < g.edge(e).weight ? 1 : 0;
      break;
    }
    case ModelKind::DLT: {
      out.live.assign(m, 0);
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        auto in = g.in_edges(v);
        if (in.empty()) continue;
        double sum = 0.0;
        for (int e : in) sum += g.edge(e).weight;
        if (sum > 1.0 + kDltSumSlack)
          throw std::invalid_argument("DLT in-weight sum exceeds 1");
        // Keep at most one in-edge: edge e with probability w_e, none with
        // probability 1 - sum.
        double x = uniform01(rng);
        for (int e : in) {
          if (x < g.edge(e).weight) {
            out.live[e] = 1;
            break;
          }
          x -= g.edge(e).weight;
        }
      }
      break;
    }
    case ModelKind::CIC: {
      out.live.assign(m, 1);
      out.delays.resize(m);
      for (int e = 0; e < m; ++e) {
        double u = uniform01(rng);
        out.delays[e] = -std::log1p(-u) / g.edge(e).weight;
      }
      break;
    }
  }
  return out;
}

std::vector<NodeId> reachable(const DirectedGraph& g, const LiveEdgeGraph& live,
                              const std::vector<NodeId>& seeds,
                              std::optional<double> window) {
  const int n = g.num_nodes();
  for (NodeId s : seeds)
    if (s < 0 || s >= n) throw std::invalid_argument("reachable: seed out of range");

  if (!live.delays.empty()) {
    if (!window)
      throw std::invalid_argument("reachable: window required for delayed live edges");
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (NodeId s : seeds) {
      dist[s] = 0.0;
      heap.push({0.0, s});
    }
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int e : g.out_edges(u)) {
        if (!live.live[e]) continue;
        NodeId v = g.edge(e).dst;
        double nd = d + live.delays[e];
        if (nd < dist[v] && nd <= *window) {
          dist[v] = nd;
          heap.push({nd, v});
        }
      }
    }
    std::vector<NodeId> out;
    for (NodeId v = 0; v < n; ++v)
      if (dist[v] <= *window) out.push_back(v);
    return out;
  }

  NodeBits seen(n);
  std::vector<NodeId> stack;
  for (NodeId s : seeds)
    if (!seen.test(s)) {
      seen.set(s);
      stack.push_back(s);
    }
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (int e : g.out_edges(u)) {
      if (!live.live[e]) continue;
      NodeId v = g.edge(e).dst;
      if (!seen.test(v)) {
        seen.set(v);
        stack.push_back(v);
      }
    }
  }
  return seen.to_ids();
}

namespace {

std::vector<double> exact_influence_dic(const DiffusionSpec& spec,
                                        const std::vector<NodeId>& seeds) {
  const DirectedGraph& g = spec.graph;
  const int n = g.num_nodes();
  const int m = g.num_edges();
  if (m > kDicEnumEdgeLimit)
    throw std::invalid_argument("exact_influence: DIC instance too large");

  std::vector<double> marginals(n, 0.0);
  LiveEdgeGraph live;
  live.live.assign(m, 0);
  NodeBits seen(n);
  std::vector<NodeId> stack;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    double p = 1.0;
    for (int e = 0; e < m; ++e) {
      const bool on = (mask >> e) & 1ULL;
      live.live[e] = on;
      p *= on ? g.edge(e).weight : 1.0 - g.edge(e).weight;
      if (p == 0.0) break;
    }
    if (p == 0.0) continue;
    seen = NodeBits(n);
    stack.clear();
    for (NodeId s : seeds)
      if (!seen.test(s)) {
        seen.set(s);
        stack.push_back(s);
      }
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (int e : g.out_edges(u)) {
        if (!live.live[e]) continue;
        NodeId v = g.edge(e).dst;
        if (!seen.test(v)) {
          seen.set(v);
          stack.push_back(v);
        }
      }
    }
    for (NodeId v = 0; v < n; ++v)
      if (seen.test(v)) marginals[v] += p;
  }
  return marginals;
}

std::vector<double> exact_influence_dlt(const DiffusionSpec& spec,
                                        const std::vector<NodeId>& seeds) {
  const DirectedGraph& g = spec.graph;
  const int n = g.num_nodes();

  double combos = 1.0;
  for (NodeId v = 0; v < n; ++v) combos *= g.in_degree(v) + 1.0;
  if (combos > kDltEnumComboLimit)
    throw std::invalid_argument("exact_influence: DLT instance too large");

  // Choice c < d_v selects the c-th in-edge of v; c == d_v selects none.
  std::vector<int> choice(n, 0);
  std::vector<double> none_prob(n);
  for (NodeId v = 0; v < n; ++v)
    none_prob[v] = std::max(0.0, 1.0 - g.in_weight_sum(v));

  std::vector<double> marginals(n, 0.0);
  NodeBits seed_bits = NodeBits::of(n, seeds);
  std::vector<NodeId> chosen_src(n);
  NodeBits active(n);
  for (;;) {
    double p = 1.0;
    for (NodeId v = 0; v < n; ++v) {
      auto in = g.in_edges(v);
      if (choice[v] < static_cast<int>(in.size())) {
        p *= g.edge(in[choice[v]]).weight;
        chosen_src[v] = g.edge(in[choice[v]]).src;
      } else {
        p *= none_prob[v];
        chosen_src[v] = -1;
      }
      if (p == 0.0) break;
    }
    if (p > 0.0) {
      // Fixpoint: v becomes active once its chosen in-edge source is active.
      active = seed_bits;
      bool changed = true;
      while (changed) {
        changed = false;
        for (NodeId v = 0; v < n; ++v) {
          if (!active.test(v) && chosen_src[v] >= 0 && active.test(chosen_src[v])) {
            active.set(v);
            changed = true;
          }
        }
      }
      for (NodeId v = 0; v < n; ++v)
        if (active.test(v)) marginals[v] += p;
    }
    // Odometer over per-node choices.
    int v = 0;
    while (v < n) {
      if (++choice[v] <= g.in_degree(v)) break;
      choice[v] = 0;
      ++v;
    }
    if (v == n) break;
  }
  return marginals;
}

}  // namespace

std::vector<double> exact_influence(const DiffusionSpec& spec,
                                    const std::vector<NodeId>& seeds) {
  check_seeds(spec, seeds, /*allow_empty=*/true);
  spec.validate();
  switch (spec.kind) {
    case ModelKind::DIC: return exact_influence_dic(spec, seeds);
    case ModelKind::DLT: return exact_influence_dlt(spec, seeds);
    case ModelKind::CIC:
      throw std::invalid_argument("exact_influence: not available for CIC");
  }
  return {};
}

namespace {

void mc_accumulate(const DiffusionSpec& spec, const std::vector<NodeId>& seeds,
                   std::uint64_t seed, long i, std::vector<std::uint64_t>& counts) {
  Rng rng = make_rng(derive_seed(seed, stream::live_edge, static_cast<std::uint64_t>(i)));
  LiveEdgeGraph live = sample_live_edge(spec, rng);
  std::optional<double> window;
  if (spec.kind == ModelKind::CIC) window = spec.window;
  for (NodeId v : reachable(spec.graph, live, seeds, window)) ++counts[v];
}

InfluenceEstimate finish_estimate(const std::vector<std::uint64_t>& counts,
                                  long samples) {
  InfluenceEstimate est;
  est.marginals.resize(counts.size());
  for (std::size_t v = 0; v < counts.size(); ++v) {
    est.marginals[v] = static_cast<double>(counts[v]) / static_cast<double>(samples);
    est.total += est.marginals[v];
  }
  return est;
}

}  // namespace

InfluenceEstimate mc_influence_serial(const DiffusionSpec& spec,
                                      const std::vector<NodeId>& seeds,
                                      long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("mc_influence: samples must be >= 1");
  check_seeds(spec, seeds, /*allow_empty=*/true);
  std::vector<std::uint64_t> counts(spec.graph.num_nodes(), 0);
  for (long i = 0; i < samples; ++i) mc_accumulate(spec, seeds, seed, i, counts);
  return finish_estimate(counts, samples);
}

InfluenceEstimate mc_influence(const DiffusionSpec& spec,
                               const std::vector<NodeId>& seeds, long samples,
                               std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("mc_influence: samples must be >= 1");
  check_seeds(spec, seeds, /*allow_empty=*/true);
  const int n = spec.graph.num_nodes();
  const int nthreads = resolve_threads(threads);
  std::vector<std::uint64_t> counts(n, 0);
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static)
    for (long i = 0; i < samples; ++i) mc_accumulate(spec, seeds, seed, i, local);
#pragma omp critical
    for (int v = 0; v < n; ++v) counts[v] += local[v];
  }
#else
  (void)nthreads;
  for (long i = 0; i < samples; ++i) mc_accumulate(spec, seeds, seed, i, counts);
#endif
  return finish_estimate(counts, samples);
}

std::vector<Cascade> simulate_batch_serial(
    const DiffusionSpec& spec, const std::vector<std::vector<NodeId>>& seed_sets,
    std::uint64_t seed) {
  std::vector<Cascade> out(seed_sets.size());
  for (std::size_t i = 0; i < seed_sets.size(); ++i) {
    Rng rng = make_rng(derive_seed(seed, stream::simulate, i));
    out[i] = simulate(spec, seed_sets[i], rng);
  }
  return out;
}

std::vector<Cascade> simulate_batch(const DiffusionSpec& spec,
                                    const std::vector<std::vector<NodeId>>& seed_sets,
                                    std::uint64_t seed, int threads) {
  const int nthreads = resolve_threads(threads);
  std::vector<Cascade> out(seed_sets.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (std::size_t i = 0; i < seed_sets.size(); ++i) {
    Rng rng = make_rng(derive_seed(seed, stream::simulate, i));
    out[i] = simulate(spec, seed_sets[i], rng);
  }
#else
  (void)nthreads;
  out = simulate_batch_serial(spec, seed_sets, seed);
#endif
  return out;
}

}  // namespace cascadelab
