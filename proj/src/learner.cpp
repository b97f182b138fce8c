#include "cascadelab/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cascadelab/threads.hpp"

namespace cascadelab {

LossVariant loss_variant_from_name(const std::string& name) {
  if (name == "corrected") return LossVariant::Corrected;
  if (name == "paper-literal") return LossVariant::PaperLiteral;
  throw std::invalid_argument("unknown loss variant '" + name + "'");
}

std::string loss_variant_name(LossVariant v) {
  return v == LossVariant::Corrected ? "corrected" : "paper-literal";
}

void TrainConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 0.5))
    throw std::invalid_argument("train: lambda must lie in (0,0.5)");
  if (max_iters < 1) throw std::invalid_argument("train: max_iters < 1");
  if (!(tol > 0.0)) throw std::invalid_argument("train: tol <= 0");
  if (!(step > 0.0)) throw std::invalid_argument("train: step <= 0");
}

double adjusted_loss(double t, int y, double r, LossVariant variant) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("adjusted_loss: t must lie in (0,1)");
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("adjusted_loss: r must lie in (0,1]");
  if (variant == LossVariant::Corrected) {
    if (y) return (1.0 / r) * std::log(t) - ((1.0 - r) / r) * std::log(1.0 - t);
    return std::log(1.0 - t);
  }
  if (y) return (1.0 / r) * std::log(t);
  return ((2.0 * r - 1.0) / r) * std::log(1.0 - t);
}

double adjusted_loss_grad(double t, int y, double r, LossVariant variant) {
  if (variant == LossVariant::Corrected) {
    if (y) return (1.0 / r) / t + ((1.0 - r) / r) / (1.0 - t);
    return -1.0 / (1.0 - t);
  }
  if (y) return (1.0 / r) / t;
  return -((2.0 * r - 1.0) / r) / (1.0 - t);
}

TrainProblem TrainProblem::build(NodeId v,
                                 const std::vector<IncompleteCascade>& cascades,
                                 const FeatureBank& bank,
                                 const RetentionProfile& profile,
                                 const TrainConfig& cfg) {
  cfg.validate();
  const double r = profile.rate(v);
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("train: retention of target must lie in (0,1]");

  TrainProblem p;
  p.feature_count = static_cast<int>(bank.features.size());
  p.retention = r;
  p.lambda = cfg.lambda;
  p.loss = cfg.loss;
  if (p.feature_count < 1) throw std::invalid_argument("train: empty feature bank");

  const int n = bank.features.front().size();
  std::map<std::pair<std::uint8_t, std::vector<std::int32_t>>, std::uint32_t> groups;
  for (const IncompleteCascade& c : cascades) {
    // A seed activation is not a diffusion outcome; skip those cascades.
    if (std::binary_search(c.seeds.begin(), c.seeds.end(), v)) continue;
    NodeBits seeds = NodeBits::of(n, c.seeds);
    std::vector<std::int32_t> fired;
    for (int k = 0; k < p.feature_count; ++k)
      if (basis_eval(bank.features[k], seeds)) fired.push_back(k);
    std::uint8_t label =
        std::binary_search(c.observed.begin(), c.observed.end(), v) ? 1 : 0;
    ++groups[{label, std::move(fired)}];
    ++p.sample_count;
  }
  p.rows.reserve(groups.size());
  for (auto& [key, count] : groups)
    p.rows.push_back({key.second, key.first, count});
  return p;
}

double TrainProblem::objective(std::span<const double> beta) const {
  if (sample_count == 0) return 0.0;
  double total = 0.0;
  for (const Row& row : rows) {
    double s = 0.0;
    for (std::int32_t k : row.fired) s += beta[k];
    double t = (1.0 - 2.0 * lambda) * s + lambda;
    total += row.weight * adjusted_loss(t, row.label, retention, loss);
  }
  return total / static_cast<double>(sample_count);
}

std::vector<double> TrainProblem::gradient(std::span<const double> beta) const {
  std::vector<double> g(feature_count, 0.0);
  if (sample_count == 0) return g;
  const double scale = (1.0 - 2.0 * lambda) / static_cast<double>(sample_count);
  for (const Row& row : rows) {
    double s = 0.0;
    for (std::int32_t k : row.fired) s += beta[k];
    double t = (1.0 - 2.0 * lambda) * s + lambda;
    double coef = row.weight * scale * adjusted_loss_grad(t, row.label, retention, loss);
    for (std::int32_t k : row.fired) g[k] += coef;
  }
  return g;
}

std::vector<double> TrainProblem::solve(const TrainConfig& cfg) const {
  cfg.validate();
  const int K = feature_count;
  std::vector<double> beta(K, 1.0 / K);
  if (K == 1 || sample_count == 0) return beta;

  std::vector<double> best = beta;
  double best_obj = objective(beta);
  if (!std::isfinite(best_obj))
    throw std::runtime_error("train: non-finite objective; check lambda");
  double prev_obj = best_obj;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    std::vector<double> g = gradient(beta);
    double gmax = *std::max_element(g.begin(), g.end());
    double eta = cfg.step / std::sqrt(static_cast<double>(iter));
    double z = 0.0;
    for (int k = 0; k < K; ++k) {
      beta[k] *= std::exp(eta * (g[k] - gmax));
      z += beta[k];
    }
    if (!(z > 0.0) || !std::isfinite(z))
      throw std::runtime_error("train: degenerate multiplicative update");
    for (int k = 0; k < K; ++k) beta[k] /= z;

    double obj = objective(beta);
    if (!std::isfinite(obj))
      throw std::runtime_error("train: non-finite objective; check lambda");
    if (obj > best_obj) {
      best_obj = obj;
      best = beta;
    }
    if (std::abs(obj - prev_obj) < cfg.tol) break;
    prev_obj = obj;
  }
  return best;
}

std::vector<double> train_node(NodeId v, const std::vector<IncompleteCascade>& cascades,
                               const FeatureBank& bank, const RetentionProfile& profile,
                               const TrainConfig& cfg) {
  if (cascades.empty()) throw std::invalid_argument("train: no cascades");
  return TrainProblem::build(v, cascades, bank, profile, cfg).solve(cfg);
}

namespace {

NodeModel train_one(NodeId v, const std::vector<IncompleteCascade>& cascades,
                    const RetentionProfile& profile, int feature_count,
                    const TrainConfig& cfg, std::uint64_t seed) {
  std::vector<double> marginals = estimate_marginals(
      cascades, v, profile, cfg.smoothing_alpha, cfg.marginal_floor);
  Rng rng = make_rng(derive_seed(seed, stream::features, static_cast<std::uint64_t>(v)));
  FeatureBank bank = sample_features(v, marginals, feature_count, rng);
  std::vector<double> beta = train_node(v, cascades, bank, profile, cfg);
  return NodeModel{std::move(bank), std::move(beta)};
}

}  // namespace

InfluenceModel train_all_serial(const std::vector<IncompleteCascade>& cascades, int n,
                                const RetentionProfile& profile, int feature_count,
                                const TrainConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  profile.validate();
  if (profile.size() != n) throw std::invalid_argument("train: profile size mismatch");
  InfluenceModel model;
  model.n = n;
  model.lambda = cfg.lambda;
  model.retention_mean = profile.mean;
  model.nodes.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    try {
      model.nodes[v] = train_one(v, cascades, profile, feature_count, cfg, seed);
    } catch (const std::exception& e) {
      throw std::runtime_error("train: node " + std::to_string(v) + ": " + e.what());
    }
  }
  return model;
}

InfluenceModel train_all(const std::vector<IncompleteCascade>& cascades, int n,
                         const RetentionProfile& profile, int feature_count,
                         const TrainConfig& cfg, std::uint64_t seed, int threads) {
  cfg.validate();
  profile.validate();
  if (profile.size() != n) throw std::invalid_argument("train: profile size mismatch");
  InfluenceModel model;
  model.n = n;
  model.lambda = cfg.lambda;
  model.retention_mean = profile.mean;
  model.nodes.resize(n);
  const int nthreads = resolve_threads(threads);
  std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (NodeId v = 0; v < n; ++v) {
    try {
      model.nodes[v] = train_one(v, cascades, profile, feature_count, cfg, seed);
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty())
        failure = "train: node " + std::to_string(v) + ": " + e.what();
    }
  }
#else
  (void)nthreads;
  return train_all_serial(cascades, n, profile, feature_count, cfg, seed);
#endif
  if (!failure.empty()) throw std::runtime_error(failure);
  return model;
}

Prediction predict(const InfluenceModel& model, const std::vector<NodeId>& seeds) {
  for (NodeId s : seeds)
    if (s < 0 || s >= model.n)
      throw std::invalid_argument("predict: seed id out of range");
  NodeBits seed_bits = NodeBits::of(model.n, seeds);
  Prediction pred;
  pred.marginals.resize(model.n);
  const double lambda = model.lambda;
  for (NodeId v = 0; v < model.n; ++v) {
    if (seed_bits.test(v)) {
      pred.marginals[v] = 1.0;
    } else {
      const NodeModel& nm = model.nodes[v];
      double s = 0.0;
      for (std::size_t k = 0; k < nm.bank.features.size(); ++k)
        if (basis_eval(nm.bank.features[k], seed_bits)) s += nm.beta[k];
      s = std::clamp(s, 0.0, 1.0);  // guard rounding of the simplex sum
      pred.marginals[v] = (1.0 - 2.0 * lambda) * s + lambda;
    }
    pred.total += pred.marginals[v];
  }
  return pred;
}

}  // namespace cascadelab
