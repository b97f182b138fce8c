#include "cascadelab/observation.hpp"

#include <cmath>

namespace cascadelab {

RateDist rate_dist_from_name(const std::string& name) {
  if (name == "uniform") return RateDist::Uniform;
  if (name == "gaussian") return RateDist::Gaussian;
  throw std::invalid_argument("unknown rate distribution '" + name + "'");
}

std::string rate_dist_name(RateDist d) {
  return d == RateDist::Uniform ? "uniform" : "gaussian";
}

RetentionProfile RetentionProfile::constant(int n, double r) {
  RetentionProfile p;
  p.rates.assign(n, r);
  p.mean = r;
  p.validate();
  return p;
}

void RetentionProfile::validate() const {
  for (double r : rates)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("retention rate outside [0,1]");
  if (!(mean >= 0.0 && mean <= 1.0))
    throw std::invalid_argument("retention mean outside [0,1]");
}

RetentionProfile draw_rates(int n, double mean, double sigma, RateDist dist,
                            Rng& rng) {
  if (!(mean >= 0.0 && mean <= 1.0))
    throw std::invalid_argument("draw_rates: mean outside [0,1]");
  if (sigma < 0.0) throw std::invalid_argument("draw_rates: negative sigma");
  RetentionProfile p;
  p.mean = mean;
  p.rates.resize(n);
  if (sigma == 0.0) {
    std::fill(p.rates.begin(), p.rates.end(), mean);
    return p;
  }
  if (dist == RateDist::Uniform) {
    std::uniform_real_distribution<double> d(mean - sigma, mean + sigma);
    for (int v = 0; v < n; ++v) p.rates[v] = std::clamp(d(rng), 0.0, 1.0);
  } else {
    std::normal_distribution<double> d(mean, sigma);
    for (int v = 0; v < n; ++v) p.rates[v] = std::clamp(d(rng), 0.0, 1.0);
  }
  return p;
}

std::vector<IncompleteCascade> corrupt_batch(const std::vector<Cascade>& cascades,
                                             const RetentionProfile& profile,
                                             std::uint64_t seed) {
  std::vector<IncompleteCascade> out(cascades.size());
  for (std::size_t i = 0; i < cascades.size(); ++i) {
    Rng rng = make_rng(derive_seed(seed, stream::corrupt, i));
    out[i] = corrupt(cascades[i], profile, rng);
  }
  return out;
}

}  // namespace cascadelab
