#ifndef CASCADELAB_OBSERVATION_HPP
#define CASCADELAB_OBSERVATION_HPP

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "cascadelab/cascades.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

enum class RateDist { Uniform, Gaussian };

RateDist rate_dist_from_name(const std::string& name);
std::string rate_dist_name(RateDist d);

/**
  Per-node retention rates r_v in [0,1] plus the declared mean the learner
  is told about. A scalar rate is just a constant profile.
*/
struct RetentionProfile {
  std::vector<double> rates;
  double mean = 1.0;

  static RetentionProfile constant(int n, double r);

  double rate(NodeId v) const { return rates[v]; }
  int size() const { return static_cast<int>(rates.size()); }
  void validate() const;
};

// r_v ~ Unif[mean-sigma, mean+sigma] or N(mean, sigma^2), clamped to [0,1].
RetentionProfile draw_rates(int n, double mean, double sigma, RateDist dist,
                            Rng& rng);

// Keeps every seed; keeps each non-seed activation independently with
// probability r_v. Consumes one draw per node of active\seeds in ascending
// id order.
template <class URBG>
IncompleteCascade corrupt(const Cascade& c, const RetentionProfile& profile,
                          URBG& rng) {
  IncompleteCascade out;
  out.seeds = c.seeds;
  out.observed = c.seeds;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (NodeId v : c.active) {
    if (std::binary_search(c.seeds.begin(), c.seeds.end(), v)) continue;
    if (unif(rng) < profile.rate(v)) out.observed.push_back(v);
  }
  std::sort(out.observed.begin(), out.observed.end());
  return out;
}

// One substream per cascade index, so batches are order- and
// scheduling-independent.
std::vector<IncompleteCascade> corrupt_batch(const std::vector<Cascade>& cascades,
                                             const RetentionProfile& profile,
                                             std::uint64_t seed);

}  // namespace cascadelab

#endif
