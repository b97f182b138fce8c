#include "cascadelab/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace cascadelab {

std::vector<double> estimate_marginals(const std::vector<IncompleteCascade>& cascades,
                                       NodeId target, const RetentionProfile& assumed,
                                       double alpha, double floor) {
  if (!(alpha > 0.0)) throw std::invalid_argument("estimate_marginals: alpha <= 0");
  if (!(floor > 0.0 && floor < 0.5))
    throw std::invalid_argument("estimate_marginals: floor outside (0,0.5)");
  const int n = assumed.size();
  const double r = assumed.rate(target);
  if (!(r > 0.0))
    throw std::invalid_argument("estimate_marginals: target retention must be > 0");

  std::vector<double> seeded(n, 0.0);    // c_u
  std::vector<double> co_active(n, 0.0); // r-corrected c_{uv}
  for (const IncompleteCascade& c : cascades) {
    const bool target_seed =
        std::binary_search(c.seeds.begin(), c.seeds.end(), target);
    const bool target_observed =
        std::binary_search(c.observed.begin(), c.observed.end(), target);
    // Seed activations are never lost, so they need no 1/r correction.
    const double credit = target_observed ? (target_seed ? 1.0 : 1.0 / r) : 0.0;
    for (NodeId u : c.seeds) {
      seeded[u] += 1.0;
      co_active[u] += credit;
    }
  }

  std::vector<double> out(n);
  for (NodeId u = 0; u < n; ++u) {
    double p = (co_active[u] + alpha) / (seeded[u] + 2.0 * alpha);
    out[u] = std::clamp(p, floor, 1.0 - floor);
  }
  return out;
}

FeatureBank sample_features(NodeId target, const std::vector<double>& marginals,
                            int feature_count, Rng& rng) {
  if (feature_count < 1)
    throw std::invalid_argument("sample_features: need at least one feature");
  const int n = static_cast<int>(marginals.size());
  FeatureBank bank;
  bank.target = target;
  bank.marginals = marginals;
  bank.features.reserve(feature_count);
  for (int k = 0; k < feature_count; ++k) {
    NodeBits t(n);
    for (NodeId u = 0; u < n; ++u)
      if (uniform01(rng) < marginals[u]) t.set(u);
    bank.features.push_back(std::move(t));
  }
  return bank;
}

}  // namespace cascadelab
