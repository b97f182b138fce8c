#include <doctest.h>

#include "cascadelab/features.hpp"

using namespace cascadelab;

TEST_CASE("marginal estimator matches the hand-evaluated correction") {
  // 10 cascades seeded by node 0; node 1 observed in 4 of them, never a seed.
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 10; ++i) {
    IncompleteCascade c{{0}, {0}};
    if (i < 4) c.observed.push_back(1);
    cs.push_back(std::move(c));
  }
  RetentionProfile assumed = RetentionProfile::constant(2, 0.8);
  auto p = estimate_marginals(cs, 1, assumed, 1e-12, 1e-3);
  CHECK(p[0] == doctest::Approx((4.0 / 0.8) / 10.0).epsilon(1e-9));
}

TEST_CASE("marginal estimator handles priors, ceilings and seed targets") {
  RetentionProfile assumed = RetentionProfile::constant(3, 1.0);

  SUBCASE("sources never seeded fall back to the smoothed prior") {
    std::vector<IncompleteCascade> cs = {{{0}, {0}}};
    auto p = estimate_marginals(cs, 2, assumed, 1.0, 1e-3);
    CHECK(p[1] == doctest::Approx(0.5));  // alpha/(2 alpha)
  }

  SUBCASE("always co-active clamps at the ceiling") {
    std::vector<IncompleteCascade> cs;
    for (int i = 0; i < 50; ++i) cs.push_back({{0}, {0, 2}});
    auto p = estimate_marginals(cs, 2, assumed, 1e-12, 1e-3);
    CHECK(p[0] == doctest::Approx(1.0 - 1e-3));
  }

  SUBCASE("seed membership of the target counts without correction") {
    RetentionProfile lossy = RetentionProfile::constant(3, 0.5);
    std::vector<IncompleteCascade> cs;
    for (int i = 0; i < 10; ++i) cs.push_back({{0, 2}, {0, 2}});
    auto p = estimate_marginals(cs, 2, lossy, 1e-12, 1e-3);
    // Raw frequency 1 clamps at the ceiling; no 1/r inflation beyond it.
    CHECK(p[0] == doctest::Approx(1.0 - 1e-3));
  }

  SUBCASE("estimates always live in [floor, 1-floor]") {
    std::vector<IncompleteCascade> cs = {{{0}, {0}}, {{1}, {1, 2}}};
    RetentionProfile r = RetentionProfile::constant(3, 0.25);
    auto p = estimate_marginals(cs, 2, r, 0.5, 0.05);
    for (double x : p) {
      CHECK(x >= 0.05);
      CHECK(x <= 0.95);
    }
  }
}

TEST_CASE("feature sampling follows the marginals") {
  Rng rng = make_rng(41);

  SUBCASE("floor-level marginals produce nearly empty features") {
    const int n = 100000;
    std::vector<double> marg(n, 1e-6);
    FeatureBank bank = sample_features(0, marg, 100, rng);
    int bits = 0;
    for (const NodeBits& t : bank.features) bits += t.count();
    // Mean 10 set bits across all features; allow six sigma.
    CHECK(bits <= 30);
  }

  SUBCASE("ceiling-level marginals produce nearly full features") {
    const int n = 2000;
    std::vector<double> marg(n, 1.0 - 1e-6);
    FeatureBank bank = sample_features(0, marg, 20, rng);
    for (const NodeBits& t : bank.features) CHECK(t.count() >= n - 2);
  }

  SUBCASE("sampling is deterministic given the stream") {
    std::vector<double> marg(50, 0.3);
    Rng a = make_rng(6), b = make_rng(6);
    FeatureBank ba = sample_features(0, marg, 10, a);
    FeatureBank bb = sample_features(0, marg, 10, b);
    for (int k = 0; k < 10; ++k) CHECK(ba.features[k] == bb.features[k]);
  }
}

TEST_CASE("default feature count matches the experiment setting") {
  CHECK(kDefaultFeatureCount == 200);
}

TEST_CASE("basis evaluation is the saturated dot product") {
  NodeBits t(8);
  t.set(2);
  t.set(5);
  CHECK(!basis_eval(t, NodeBits::of(8, {0, 1})));
  CHECK(basis_eval(t, NodeBits::of(8, {2, 5, 6})));  // saturates at 1
  CHECK(!basis_eval(t, NodeBits(8)));                 // empty seed set
}

TEST_CASE("basis evaluation is monotone in the seed set") {
  Rng rng = make_rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    NodeBits t(32), small(32), big(32);
    for (int v = 0; v < 32; ++v) {
      if (u(rng) < 0.2) t.set(v);
      if (u(rng) < 0.3) {
        big.set(v);
        if (u(rng) < 0.5) small.set(v);
      }
    }
    CHECK(basis_eval(t, small) <= basis_eval(t, big));
  }
}
