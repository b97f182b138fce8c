#include "cascadelab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cascadelab/threads.hpp"

namespace cascadelab {

std::vector<std::vector<NodeId>> sample_seed_sets(int n, int count, double exponent,
                                                  int max_size, Rng& rng) {
  if (!(exponent > 1.0)) throw std::invalid_argument("seed sets: exponent must be > 1");
  if (max_size < 1 || max_size > n)
    throw std::invalid_argument("seed sets: max size outside [1,n]");
  if (count < 0) throw std::invalid_argument("seed sets: negative count");

  std::vector<double> size_weights(max_size);
  for (int s = 1; s <= max_size; ++s)
    size_weights[s - 1] = std::pow(static_cast<double>(s), -exponent);
  std::discrete_distribution<int> size_dist(size_weights.begin(), size_weights.end());
  std::uniform_int_distribution<NodeId> node_dist(0, n - 1);

  std::vector<std::vector<NodeId>> sets;
  sets.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int size = size_dist(rng) + 1;
    std::vector<NodeId> members;
    members.reserve(size);
    while (static_cast<int>(members.size()) < size) {
      NodeId v = node_dist(rng);
      if (std::find(members.begin(), members.end(), v) == members.end())
        members.push_back(v);
    }
    std::sort(members.begin(), members.end());
    sets.push_back(std::move(members));
  }
  return sets;
}

namespace {

void ground_truth_accumulate(const DiffusionSpec& spec,
                             const std::vector<std::vector<NodeId>>& seed_sets,
                             std::uint64_t seed, long i,
                             std::vector<std::vector<std::uint64_t>>& counts) {
  Rng rng = make_rng(derive_seed(seed, stream::live_edge, static_cast<std::uint64_t>(i)));
  LiveEdgeGraph live = sample_live_edge(spec, rng);
  std::optional<double> window;
  if (spec.kind == ModelKind::CIC) window = spec.window;
  for (std::size_t s = 0; s < seed_sets.size(); ++s)
    for (NodeId v : reachable(spec.graph, live, seed_sets[s], window))
      ++counts[s][v];
}

GroundTruth finish_ground_truth(const std::vector<std::vector<std::uint64_t>>& counts,
                                long samples, int n) {
  GroundTruth gt;
  gt.marginals.resize(counts.size());
  gt.totals.resize(counts.size(), 0.0);
  for (std::size_t s = 0; s < counts.size(); ++s) {
    gt.marginals[s].resize(n);
    for (int v = 0; v < n; ++v) {
      gt.marginals[s][v] =
          static_cast<double>(counts[s][v]) / static_cast<double>(samples);
      gt.totals[s] += gt.marginals[s][v];
    }
  }
  return gt;
}

}  // namespace

GroundTruth ground_truth_serial(const DiffusionSpec& spec,
                                const std::vector<std::vector<NodeId>>& seed_sets,
                                long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("ground_truth: samples must be >= 1");
  const int n = spec.graph.num_nodes();
  std::vector<std::vector<std::uint64_t>> counts(
      seed_sets.size(), std::vector<std::uint64_t>(n, 0));
  for (long i = 0; i < samples; ++i)
    ground_truth_accumulate(spec, seed_sets, seed, i, counts);
  return finish_ground_truth(counts, samples, n);
}

GroundTruth ground_truth(const DiffusionSpec& spec,
                         const std::vector<std::vector<NodeId>>& seed_sets,
                         long samples, std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("ground_truth: samples must be >= 1");
  const int n = spec.graph.num_nodes();
  const int nthreads = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> counts(
      seed_sets.size(), std::vector<std::uint64_t>(n, 0));
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<std::vector<std::uint64_t>> local(
        seed_sets.size(), std::vector<std::uint64_t>(n, 0));
#pragma omp for schedule(static)
    for (long i = 0; i < samples; ++i)
      ground_truth_accumulate(spec, seed_sets, seed, i, local);
#pragma omp critical
    for (std::size_t s = 0; s < seed_sets.size(); ++s)
      for (int v = 0; v < n; ++v) counts[s][v] += local[s][v];
  }
#else
  (void)nthreads;
  for (long i = 0; i < samples; ++i)
    ground_truth_accumulate(spec, seed_sets, seed, i, counts);
#endif
  return finish_ground_truth(counts, samples, n);
}

double mae_total(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("mae: length mismatch or empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    sum += std::abs(predicted[i] - truth[i]);
  return sum / static_cast<double>(predicted.size());
}

double sq_error(const MarginalPredictor& predict, const DiffusionSpec& spec,
                const std::vector<std::vector<NodeId>>& seed_sets, long samples,
                std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sq_error: samples must be >= 1");
  if (seed_sets.empty()) throw std::invalid_argument("sq_error: no seed sets");
  const int n = spec.graph.num_nodes();
  double total = 0.0;
  for (std::size_t s = 0; s < seed_sets.size(); ++s) {
    const std::vector<double> pred = predict(seed_sets[s]);
    for (long j = 0; j < samples; ++j) {
      Rng rng = make_rng(derive_seed(seed, stream::eval, s, static_cast<std::uint64_t>(j)));
      Cascade c = simulate(spec, seed_sets[s], rng);
      NodeBits active = NodeBits::of(n, c.active);
      double err = 0.0;
      for (NodeId v = 0; v < n; ++v) {
        double d = (active.test(v) ? 1.0 : 0.0) - pred[v];
        err += d * d;
      }
      total += err / static_cast<double>(n);
    }
  }
  return total / (static_cast<double>(seed_sets.size()) * static_cast<double>(samples));
}

namespace {

std::vector<double> ranks_with_ties(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length samples");
  std::vector<double> ra = ranks_with_ties(a);
  std::vector<double> rb = ranks_with_ties(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return num / std::sqrt(va * vb);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Ours: return "ours";
    case Method::InfluLearner: return "influlearner";
    case Method::Logistic: return "logistic";
    case Method::Linear: return "linear";
  }
  return {};
}

Method method_from_name(const std::string& name) {
  if (name == "ours") return Method::Ours;
  if (name == "influlearner") return Method::InfluLearner;
  if (name == "logistic") return Method::Logistic;
  if (name == "linear") return Method::Linear;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<ResultsTable::Aggregate> ResultsTable::aggregate() const {
  std::vector<Aggregate> out;
  for (const Row& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.method == row.method && a.param == row.param;
    });
    if (it == out.end()) out.push_back({row.method, row.param, 0.0, 0.0});
  }
  for (Aggregate& agg : out) {
    std::vector<double> vals;
    for (const Row& row : rows)
      if (row.method == agg.method && row.param == agg.param) vals.push_back(row.mae);
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    agg.mean_mae = mean;
    agg.std_mae = vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0;
  }
  return out;
}

double ResultsTable::mean_mae(const std::string& method, double param) const {
  double sum = 0.0;
  int count = 0;
  for (const Row& row : rows)
    if (row.method == method && row.param == param) {
      sum += row.mae;
      ++count;
    }
  if (count == 0) throw std::invalid_argument("results: no such cell");
  return sum / count;
}

ExperimentConfig ExperimentConfig::desk() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::paper() {
  ExperimentConfig cfg;
  cfg.kron.power = 9;
  cfg.kron.edge_count = 1024;
  cfg.cascade_count = 8192;
  cfg.test_seed_sets = 200;
  cfg.replications = 5;
  return cfg;
}

DiffusionSpec ExperimentConfig::build_spec() const {
  ModelKind kind;
  switch (weights.kind) {
    case WeightScheme::Kind::DicUniform: kind = ModelKind::DIC; break;
    case WeightScheme::Kind::DltInDegree: kind = ModelKind::DLT; break;
    case WeightScheme::Kind::CicUniform: kind = ModelKind::CIC; break;
    default: throw std::invalid_argument("experiment: unknown weight scheme");
  }
  if (kind != model)
    throw std::invalid_argument("experiment: model kind does not match weight scheme");
  Rng graph_rng = make_rng(derive_seed(master_seed, stream::graph));
  DirectedGraph g = kronecker_generate(kron, graph_rng);
  Rng weight_rng = make_rng(derive_seed(master_seed, stream::weights));
  g = assign_weights(g, weights, weight_rng);
  DiffusionSpec spec{kind, std::move(g), kind == ModelKind::CIC ? window : 0.0};
  spec.validate();
  return spec;
}

namespace {

struct SweepContext {
  DiffusionSpec spec;
  std::vector<std::vector<NodeId>> test_sets;
  GroundTruth truth;
};

SweepContext make_context(const ExperimentConfig& cfg) {
  SweepContext ctx;
  ctx.spec = cfg.build_spec();
  Rng test_rng = make_rng(derive_seed(cfg.master_seed, stream::test_seeds));
  ctx.test_sets = sample_seed_sets(ctx.spec.graph.num_nodes(), cfg.test_seed_sets,
                                   cfg.seed_exponent, cfg.max_seed_size, test_rng);
  ctx.truth = ground_truth(ctx.spec, ctx.test_sets, cfg.mc_samples,
                           derive_seed(cfg.master_seed, stream::ground_truth),
                           cfg.threads);
  return ctx;
}

std::vector<Cascade> replication_cascades(const ExperimentConfig& cfg,
                                          const DiffusionSpec& spec, int rep) {
  Rng seeds_rng = make_rng(derive_seed(cfg.master_seed, stream::train_seeds,
                                       static_cast<std::uint64_t>(rep)));
  auto train_sets = sample_seed_sets(spec.graph.num_nodes(), cfg.cascade_count,
                                     cfg.seed_exponent, cfg.max_seed_size, seeds_rng);
  return simulate_batch(spec, train_sets,
                        derive_seed(cfg.master_seed, stream::simulate,
                                    static_cast<std::uint64_t>(rep)),
                        cfg.threads);
}

double evaluate_method(const ExperimentConfig& cfg, const SweepContext& ctx,
                       Method method, const std::vector<IncompleteCascade>& data,
                       double assumed_retention, std::uint64_t train_seed) {
  const int n = ctx.spec.graph.num_nodes();
  std::vector<double> totals(ctx.test_sets.size());
  switch (method) {
    case Method::Ours:
    case Method::InfluLearner: {
      const double assumed =
          method == Method::InfluLearner ? 1.0 : assumed_retention;
      RetentionProfile profile = RetentionProfile::constant(n, assumed);
      InfluenceModel model = train_all(data, n, profile, cfg.feature_count,
                                       cfg.train, train_seed, cfg.threads);
      for (std::size_t s = 0; s < ctx.test_sets.size(); ++s)
        totals[s] = predict(model, ctx.test_sets[s]).total;
      break;
    }
    case Method::Logistic: {
      LogisticModel model = train_logistic(data, n, cfg.logistic, cfg.threads);
      for (std::size_t s = 0; s < ctx.test_sets.size(); ++s) {
        std::vector<double> marg = logistic_predict(model, ctx.test_sets[s]);
        totals[s] = std::accumulate(marg.begin(), marg.end(), 0.0);
      }
      break;
    }
    case Method::Linear: {
      LinearModel model = train_linear(data, n, cfg.linear_l2);
      for (std::size_t s = 0; s < ctx.test_sets.size(); ++s)
        totals[s] = linear_predict_total(model, ctx.test_sets[s]);
      break;
    }
  }
  return mae_total(totals, ctx.truth.totals);
}

}  // namespace

ResultsTable run_retention_sweep(const ExperimentConfig& cfg) {
  if (cfg.retention_grid.empty())
    throw std::invalid_argument("retention sweep: empty grid");
  SweepContext ctx = make_context(cfg);
  const int n = ctx.spec.graph.num_nodes();
  ResultsTable table;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    std::vector<Cascade> complete = replication_cascades(cfg, ctx.spec, rep);
    for (std::size_t gi = 0; gi < cfg.retention_grid.size(); ++gi) {
      const double r = cfg.retention_grid[gi];
      RetentionProfile true_profile = RetentionProfile::constant(n, r);
      std::vector<IncompleteCascade> data = corrupt_batch(
          complete, true_profile,
          derive_seed(cfg.master_seed, stream::corrupt, rep, gi));
      const std::uint64_t train_seed =
          derive_seed(cfg.master_seed, stream::eval, rep, gi);
      for (Method method : cfg.methods) {
        double mae = evaluate_method(cfg, ctx, method, data, r, train_seed);
        table.rows.push_back({method_name(method), r, rep, mae});
      }
    }
  }
  return table;
}

ResultsTable run_misspecification_sweep(const ExperimentConfig& cfg) {
  if (cfg.assumed_grid.empty())
    throw std::invalid_argument("misspecification sweep: empty grid");
  SweepContext ctx = make_context(cfg);
  const int n = ctx.spec.graph.num_nodes();
  ResultsTable table;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    std::vector<Cascade> complete = replication_cascades(cfg, ctx.spec, rep);
    RetentionProfile true_profile = RetentionProfile::constant(n, cfg.true_retention);
    std::vector<IncompleteCascade> data = corrupt_batch(
        complete, true_profile, derive_seed(cfg.master_seed, stream::corrupt, rep));
    for (std::size_t gi = 0; gi < cfg.assumed_grid.size(); ++gi) {
      const double assumed = cfg.assumed_grid[gi];
      const std::uint64_t train_seed =
          derive_seed(cfg.master_seed, stream::eval, rep, gi);
      double mae = evaluate_method(cfg, ctx, Method::Ours, data, assumed, train_seed);
      table.rows.push_back({method_name(Method::Ours), assumed, rep, mae});
    }
  }
  return table;
}

ResultsTable run_nonuniform_sweep(const ExperimentConfig& cfg) {
  if (cfg.sigma_grid.empty())
    throw std::invalid_argument("nonuniform sweep: empty grid");
  SweepContext ctx = make_context(cfg);
  const int n = ctx.spec.graph.num_nodes();
  ResultsTable table;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    std::vector<Cascade> complete = replication_cascades(cfg, ctx.spec, rep);
    for (std::size_t gi = 0; gi < cfg.sigma_grid.size(); ++gi) {
      const double sigma = cfg.sigma_grid[gi];
      Rng rates_rng =
          make_rng(derive_seed(cfg.master_seed, stream::rates, rep, gi));
      RetentionProfile true_profile =
          draw_rates(n, cfg.true_retention, sigma, cfg.rate_dist, rates_rng);
      std::vector<IncompleteCascade> data = corrupt_batch(
          complete, true_profile,
          derive_seed(cfg.master_seed, stream::corrupt, rep, gi));
      const std::uint64_t train_seed =
          derive_seed(cfg.master_seed, stream::eval, rep, gi);
      // Training only knows the scalar mean rate.
      double mae = evaluate_method(cfg, ctx, Method::Ours, data,
                                   cfg.true_retention, train_seed);
      table.rows.push_back({method_name(Method::Ours), sigma, rep, mae});
    }
  }
  return table;
}

std::vector<std::pair<double, double>> relative_degradation(
    const ResultsTable& table, const std::string& method, double reference_param) {
  const double ref = table.mean_mae(method, reference_param);
  if (ref == 0.0) throw std::invalid_argument("relative_degradation: zero reference");
  std::vector<double> params;
  for (const auto& row : table.rows)
    if (row.method == method &&
        std::find(params.begin(), params.end(), row.param) == params.end())
      params.push_back(row.param);
  std::vector<std::pair<double, double>> out;
  out.reserve(params.size());
  for (double p : params)
    out.push_back({p, (table.mean_mae(method, p) - ref) / ref});
  return out;
}

}  // namespace cascadelab
