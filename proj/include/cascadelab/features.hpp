#ifndef CASCADELAB_FEATURES_HPP
#define CASCADELAB_FEATURES_HPP

#include <vector>

#include "cascadelab/cascades.hpp"
#include "cascadelab/observation.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

constexpr int kDefaultFeatureCount = 200;
constexpr double kDefaultSmoothing = 1.0;
constexpr double kDefaultMarginalFloor = 1e-3;

/**
  Reachability features for one target node: K sampled node sets, each
  standing for "the sources with a live path to the target", plus the
  per-source marginal estimates the sets were drawn from.
*/
struct FeatureBank {
  NodeId target = 0;
  std::vector<NodeBits> features;
  std::vector<double> marginals;
};

/**
  Per-source estimates of P(target active | source seeded), corrected for
  one-sided observation loss: an observed non-seed activation counts 1/r_v,
  a seed membership counts 1 (seeds are never lost), then Laplace smoothing
  with alpha and clamping into [floor, 1-floor].
*/
std::vector<double> estimate_marginals(const std::vector<IncompleteCascade>& cascades,
                                       NodeId target, const RetentionProfile& assumed,
                                       double alpha = kDefaultSmoothing,
                                       double floor = kDefaultMarginalFloor);

// K independent sets; source u joins a set with probability marginals[u].
FeatureBank sample_features(NodeId target, const std::vector<double>& marginals,
                            int feature_count, Rng& rng);

// min{1, chi_S . chi_T}: 1 iff the seed set intersects the feature set.
inline bool basis_eval(const NodeBits& feature, const NodeBits& seeds) {
  return feature.intersects(seeds);
}

}  // namespace cascadelab

#endif
