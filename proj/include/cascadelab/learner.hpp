#ifndef CASCADELAB_LEARNER_HPP
#define CASCADELAB_LEARNER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cascadelab/features.hpp"
#include "cascadelab/observation.hpp"

namespace cascadelab {

enum class LossVariant { Corrected, PaperLiteral };

LossVariant loss_variant_from_name(const std::string& name);
std::string loss_variant_name(LossVariant v);

struct TrainConfig {
  double lambda = 0.01;        // truncation, in (0, 0.5)
  double step = 0.5;           // exponentiated-gradient step scale (step/sqrt(iter))
  int max_iters = 2000;
  double tol = 1e-8;           // stop when the mean objective moves less than this
  LossVariant loss = LossVariant::Corrected;
  double smoothing_alpha = kDefaultSmoothing;
  double marginal_floor = kDefaultMarginalFloor;

  void validate() const;
};

/**
  Surrogate log-likelihood for one observation under one-sided label loss
  with retention r. The corrected variant is unbiased: averaging it over the
  loss process recovers the complete-data log-likelihood. The literal
  variant keeps the published form, whose y=0 identity breaks for r < 1;
  it is retained for comparison runs only.
*/
double adjusted_loss(double t, int y, double r,
                     LossVariant variant = LossVariant::Corrected);
double adjusted_loss_grad(double t, int y, double r,
                          LossVariant variant = LossVariant::Corrected);

/**
  Per-node training problem: maximize the mean adjusted log-likelihood of
  the truncated prediction over the probability simplex. Cascades are
  collapsed to weighted rows keyed by (firing feature set, label); the
  objective and gradient are exposed for numerical checks.
*/
struct TrainProblem {
  struct Row {
    std::vector<std::int32_t> fired;
    std::uint8_t label = 0;
    std::uint32_t weight = 1;
  };

  int feature_count = 0;
  double retention = 1.0;
  double lambda = 0.01;
  LossVariant loss = LossVariant::Corrected;
  std::vector<Row> rows;
  std::size_t sample_count = 0;

  static TrainProblem build(NodeId v, const std::vector<IncompleteCascade>& cascades,
                            const FeatureBank& bank, const RetentionProfile& profile,
                            const TrainConfig& cfg);

  double objective(std::span<const double> beta) const;
  std::vector<double> gradient(std::span<const double> beta) const;

  // Exponentiated-gradient ascent; returns the best-objective iterate.
  std::vector<double> solve(const TrainConfig& cfg) const;
};

std::vector<double> train_node(NodeId v, const std::vector<IncompleteCascade>& cascades,
                               const FeatureBank& bank, const RetentionProfile& profile,
                               const TrainConfig& cfg);

struct NodeModel {
  FeatureBank bank;
  std::vector<double> beta;
};

struct InfluenceModel {
  int n = 0;
  double lambda = 0.01;
  double retention_mean = 1.0;
  std::vector<NodeModel> nodes;
};

struct Prediction {
  std::vector<double> marginals;
  double total = 0.0;
};

/**
  Trains every node: marginal estimation, feature sampling (substream keyed
  by node id) and simplex optimization, all independent across nodes.
*/
InfluenceModel train_all(const std::vector<IncompleteCascade>& cascades, int n,
                         const RetentionProfile& profile, int feature_count,
                         const TrainConfig& cfg, std::uint64_t seed, int threads = 0);
InfluenceModel train_all_serial(const std::vector<IncompleteCascade>& cascades, int n,
                                const RetentionProfile& profile, int feature_count,
                                const TrainConfig& cfg, std::uint64_t seed);

// Seeds predict 1 exactly; other nodes get the truncated basis combination,
// which always lands in [lambda, 1-lambda].
Prediction predict(const InfluenceModel& model, const std::vector<NodeId>& seeds);

}  // namespace cascadelab

#endif
