#include <doctest.h>

#include <cmath>

#include "cascadelab/eval.hpp"
#include "cascadelab/io.hpp"
#include "cascadelab/learner.hpp"
#include "test_support.hpp"

using namespace cascadelab;

TEST_CASE("adjusted loss reduces to the log likelihood at r=1") {
  for (LossVariant v : {LossVariant::Corrected, LossVariant::PaperLiteral}) {
    for (double t : {0.1, 0.4, 0.9}) {
      CHECK(adjusted_loss(t, 1, 1.0, v) == doctest::Approx(std::log(t)).epsilon(1e-12));
      CHECK(adjusted_loss(t, 0, 1.0, v) ==
            doctest::Approx(std::log(1.0 - t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("corrected loss value at r=0.8, t=0.25") {
  const double expected = 1.25 * std::log(0.25) - 0.25 * std::log(0.75);
  CHECK(adjusted_loss(0.25, 1, 0.8) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-1.6609474).epsilon(1e-6));
}

TEST_CASE("corrected loss is unbiased and the literal form is not") {
  for (double t = 0.1; t < 0.95; t += 0.1) {
    for (double r = 0.2; r <= 1.0; r += 0.1) {
      // True label 1: observed 1 with probability r, else observed 0.
      const double exp_pos = r * adjusted_loss(t, 1, r) + (1 - r) * adjusted_loss(t, 0, r);
      CHECK(exp_pos == doctest::Approx(std::log(t)).epsilon(1e-12));
      // True label 0: observation is always 0.
      CHECK(adjusted_loss(t, 0, r) == doctest::Approx(std::log(1 - t)).epsilon(1e-12));

      if (r < 0.999) {
        const double literal_neg = adjusted_loss(t, 0, r, LossVariant::PaperLiteral);
        CHECK(std::abs(literal_neg - std::log(1 - t)) > 1e-6);
      }
    }
  }
}

TEST_CASE("adjusted loss rejects arguments at the boundary") {
  CHECK_THROWS(adjusted_loss(0.0, 1, 0.8));
  CHECK_THROWS(adjusted_loss(1.0, 0, 0.8));
  CHECK_THROWS(adjusted_loss(0.5, 1, 0.0));
}

namespace {

TrainProblem random_problem(int features, int rows, double r, Rng& rng) {
  TrainProblem p;
  p.feature_count = features;
  p.retention = r;
  p.lambda = 0.05;
  p.loss = LossVariant::Corrected;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < rows; ++i) {
    TrainProblem::Row row;
    for (int k = 0; k < features; ++k)
      if (u(rng) < 0.4) row.fired.push_back(k);
    row.label = u(rng) < 0.5 ? 1 : 0;
    row.weight = 1 + static_cast<int>(u(rng) * 3);
    p.sample_count += row.weight;
    p.rows.push_back(std::move(row));
  }
  return p;
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng = make_rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    TrainProblem p = random_problem(6, 30, 0.7, rng);
    std::vector<double> beta(6);
    double z = 0.0;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (double& b : beta) {
      b = u(rng);
      z += b;
    }
    for (double& b : beta) b /= z;

    std::vector<double> grad = p.gradient(beta);
    const double h = 1e-6;
    for (int k = 0; k < 6; ++k) {
      std::vector<double> hi = beta, lo = beta;
      hi[k] += h;
      lo[k] -= h;
      const double fd = (p.objective(hi) - p.objective(lo)) / (2 * h);
      CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}

TEST_CASE("a single feature forces the trivial simplex") {
  std::vector<IncompleteCascade> cs = {{{0}, {0, 1}}, {{0}, {0}}};
  FeatureBank bank;
  bank.target = 1;
  bank.features = {NodeBits::of(2, {0})};
  RetentionProfile profile = RetentionProfile::constant(2, 1.0);
  auto beta = train_node(1, cs, bank, profile, TrainConfig{});
  CHECK(beta == std::vector<double>{1.0});
}

TEST_CASE("a perfectly informative feature takes nearly all the weight") {
  // Feature 0 fires exactly on the cascades where node 2 is active;
  // feature 1 fires everywhere.
  std::vector<IncompleteCascade> cs;
  FeatureBank bank;
  bank.target = 2;
  bank.features = {NodeBits::of(4, {0}), NodeBits::of(4, {0, 1})};
  for (int i = 0; i < 60; ++i) {
    if (i % 2 == 0)
      cs.push_back({{0}, {0, 2}});  // feature 0 and 1 fire, label 1
    else
      cs.push_back({{1}, {1}});     // only feature 1 fires, label 0
  }
  RetentionProfile profile = RetentionProfile::constant(4, 1.0);
  TrainConfig cfg;
  cfg.lambda = 0.005;
  auto beta = train_node(2, cs, bank, profile, cfg);
  CHECK(beta[0] >= 0.99);
}

TEST_CASE("training skips cascades where the target is a seed") {
  std::vector<IncompleteCascade> cs = {{{2}, {2}}, {{2}, {2}}};
  FeatureBank bank;
  bank.target = 2;
  bank.features = {NodeBits::of(4, {0}), NodeBits::of(4, {1})};
  RetentionProfile profile = RetentionProfile::constant(4, 1.0);
  TrainProblem p = TrainProblem::build(2, cs, bank, profile, TrainConfig{});
  CHECK(p.sample_count == 0);
  auto beta = p.solve(TrainConfig{});
  CHECK(beta == std::vector<double>{0.5, 0.5});
}

TEST_CASE("predict honors seeds, truncation and monotonicity") {
  InfluenceModel model;
  model.n = 4;
  model.lambda = 0.01;
  model.nodes.resize(4);
  for (NodeId v = 0; v < 4; ++v) {
    model.nodes[v].bank.target = v;
    model.nodes[v].bank.features = {NodeBits::of(4, {0}), NodeBits::of(4, {1})};
    model.nodes[v].beta = {0.5, 0.5};
  }

  SUBCASE("seeding everything returns all ones") {
    Prediction p = predict(model, {0, 1, 2, 3});
    CHECK(p.marginals == std::vector<double>{1, 1, 1, 1});
    CHECK(p.total == doctest::Approx(4.0));
  }

  SUBCASE("no intersecting feature floors at lambda") {
    Prediction p = predict(model, {2});
    CHECK(p.marginals[3] == doctest::Approx(0.01));
  }

  SUBCASE("all features firing caps at 1-lambda") {
    Prediction p = predict(model, {0, 1});
    CHECK(p.marginals[2] == doctest::Approx(0.99));
    CHECK(p.marginals[3] == doctest::Approx(0.99));
  }

  SUBCASE("non-seed predictions are monotone under seed inclusion") {
    Prediction small = predict(model, {0});
    Prediction big = predict(model, {0, 1});
    CHECK(small.marginals[2] <= big.marginals[2]);
    CHECK(small.marginals[3] <= big.marginals[3]);
  }
}

TEST_CASE("isolated single-node model predicts the truncation floor") {
  std::vector<IncompleteCascade> cs = {{{0}, {0}}, {{0}, {0}}};
  RetentionProfile profile = RetentionProfile::constant(1, 1.0);
  InfluenceModel model = train_all(cs, 1, profile, 5, TrainConfig{}, 3);
  Prediction p = predict(model, {});
  CHECK(p.marginals[0] == doctest::Approx(model.lambda));
  Prediction seeded = predict(model, {0});
  CHECK(seeded.marginals[0] == 1.0);
}

TEST_CASE("trained weights stay on the simplex at desk scale") {
  ExperimentConfig cfg;
  cfg.kron.power = 5;
  cfg.kron.edge_count = 64;
  cfg.cascade_count = 300;
  cfg.feature_count = 40;
  DiffusionSpec spec = cfg.build_spec();
  const int n = spec.graph.num_nodes();
  Rng seeds_rng = make_rng(derive_seed(cfg.master_seed, stream::train_seeds));
  auto sets = sample_seed_sets(n, cfg.cascade_count, 2.5, 10, seeds_rng);
  auto cascades = simulate_batch(spec, sets, 4);
  auto observed = corrupt_batch(cascades, RetentionProfile::constant(n, 0.8), 5);
  InfluenceModel model = train_all(observed, n, RetentionProfile::constant(n, 0.8),
                                   cfg.feature_count, TrainConfig{}, 6);
  for (NodeId v = 0; v < n; ++v) {
    double sum = 0.0;
    for (double b : model.nodes[v].beta) {
      CHECK(b >= 0.0);
      sum += b;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("training is deterministic given the seed") {
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 20; ++i)
    cs.push_back({{static_cast<NodeId>(i % 3)},
                  {static_cast<NodeId>(i % 3), static_cast<NodeId>(3 + i % 2)}});
  RetentionProfile profile = RetentionProfile::constant(5, 0.9);
  InfluenceModel a = train_all(cs, 5, profile, 10, TrainConfig{}, 42);
  InfluenceModel b = train_all(cs, 5, profile, 10, TrainConfig{}, 42);
  CHECK(model_to_json(a).dump() == model_to_json(b).dump());
}

TEST_CASE("model JSON round trips") {
  std::vector<IncompleteCascade> cs = {{{0}, {0, 1}}, {{1}, {1}}};
  RetentionProfile profile = RetentionProfile::constant(2, 1.0);
  InfluenceModel model = train_all(cs, 2, profile, 4, TrainConfig{}, 8);
  Json j = model_to_json(model);
  InfluenceModel back = model_from_json(j);
  CHECK(model_to_json(back).dump() == j.dump());
  Prediction pa = predict(model, {0});
  Prediction pb = predict(back, {0});
  CHECK(pa.marginals == pb.marginals);
}

TEST_CASE("learner recovers a small DIC influence function from complete data") {
  // 32 nodes, 16 edges keeps the exact oracle cheap (2^16 subsets).
  ExperimentConfig cfg;
  cfg.kron.power = 5;
  cfg.kron.edge_count = 16;
  cfg.master_seed = 12;
  DiffusionSpec spec = cfg.build_spec();
  const int n = spec.graph.num_nodes();

  Rng seeds_rng = make_rng(derive_seed(cfg.master_seed, stream::train_seeds));
  auto train_sets = sample_seed_sets(n, 4000, 2.5, 10, seeds_rng);
  auto cascades = simulate_batch(spec, train_sets, 13);
  auto observed = corrupt_batch(cascades, RetentionProfile::constant(n, 1.0), 14);

  InfluenceModel model = train_all(observed, n, RetentionProfile::constant(n, 1.0),
                                   200, TrainConfig{}, 15);

  Rng test_rng = make_rng(derive_seed(cfg.master_seed, stream::test_seeds));
  auto test_sets = sample_seed_sets(n, 50, 2.5, 10, test_rng);
  double err = 0.0;
  for (const auto& seeds : test_sets) {
    auto truth = exact_influence(spec, seeds);
    Prediction pred = predict(model, seeds);
    for (NodeId v = 0; v < n; ++v) {
      const double d = pred.marginals[v] - truth[v];
      err += d * d;
    }
  }
  err /= static_cast<double>(n) * test_sets.size();
  CHECK(err <= 0.01);
}
