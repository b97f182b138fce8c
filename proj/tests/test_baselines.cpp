#include <doctest.h>

#include <cmath>

#include "cascadelab/baselines.hpp"
#include "cascadelab/rng.hpp"

using namespace cascadelab;

TEST_CASE("logistic with all-zero labels predicts the negative class") {
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 40; ++i)
    cs.push_back({{static_cast<NodeId>(i % 4)}, {static_cast<NodeId>(i % 4)}});
  LogisticConfig cfg;
  cfg.l2 = 1e-6;
  LogisticRow row = train_logistic_row(cs, 5, 6, cfg);
  for (int u = 0; u < 4; ++u)
    CHECK(logistic_predict_node(row, {static_cast<NodeId>(u)}) < 0.5);
}

TEST_CASE("logistic separates separable single-seed data") {
  // Seeding node 0 always activates node 2; seeding node 1 never does.
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 30; ++i) {
    cs.push_back({{0}, {0, 2}});
    cs.push_back({{1}, {1}});
  }
  LogisticConfig cfg;
  cfg.l2 = 1e-4;
  LogisticRow row = train_logistic_row(cs, 2, 3, cfg);
  CHECK(logistic_predict_node(row, {0}) > 0.5);
  CHECK(logistic_predict_node(row, {1}) < 0.5);
}

TEST_CASE("logistic gradient matches finite differences") {
  std::vector<std::vector<NodeId>> rows = {{0}, {1}, {0, 2}, {2}, {1, 2}};
  std::vector<std::uint8_t> labels = {1, 0, 1, 0, 1};
  std::vector<double> w = {0.2, -0.3, 0.1};
  const double b = 0.05, l2 = 0.01;

  std::vector<double> grad(3);
  double grad_b = 0.0;
  detail::logistic_gradient(rows, labels, w, b, l2, grad, grad_b);

  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> hi = w, lo = w;
    hi[k] += h;
    lo[k] -= h;
    const double fd = (detail::logistic_objective(rows, labels, hi, b, l2) -
                       detail::logistic_objective(rows, labels, lo, b, l2)) /
                      (2 * h);
    CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-4));
  }
  const double fd_b = (detail::logistic_objective(rows, labels, w, b + h, l2) -
                       detail::logistic_objective(rows, labels, w, b - h, l2)) /
                      (2 * h);
  CHECK(grad_b == doctest::Approx(fd_b).epsilon(1e-4));
}

TEST_CASE("linear regression on constant targets returns the constant") {
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 20; ++i)
    cs.push_back({{static_cast<NodeId>(i % 3)},
                  {static_cast<NodeId>(i % 3), 3, 4}});  // every size is 3
  LinearModel model = train_linear(cs, 5, 1e-10);
  CHECK(linear_predict_total(model, {0}) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(linear_predict_total(model, {2}) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("linear regression recovers a planted linear model") {
  // Integer targets: y = 1 + 2*[0 in S] + 3*[1 in S] encoded as the
  // observed-set size.
  std::vector<IncompleteCascade> data;
  for (int i = 0; i < 100; ++i) {
    for (std::vector<NodeId> seeds :
         {std::vector<NodeId>{0}, std::vector<NodeId>{1}, std::vector<NodeId>{0, 1},
          std::vector<NodeId>{2}}) {
      int y = 1;
      if (std::binary_search(seeds.begin(), seeds.end(), 0)) y += 2;
      if (std::binary_search(seeds.begin(), seeds.end(), 1)) y += 3;
      IncompleteCascade c;
      c.seeds = seeds;
      for (int k = 0; k < y; ++k) c.observed.push_back(static_cast<NodeId>(k));
      data.push_back(std::move(c));
    }
  }
  LinearModel model = train_linear(data, 4, 1e-8);
  CHECK(model.weights[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(model.weights[1] == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(model.weights[2] == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(model.bias == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("two-valued regressor slope is the difference of conditional means") {
  // x = [0 in S]; y = 5 when seeded by 0, y = 2 otherwise.
  std::vector<IncompleteCascade> cs;
  for (int i = 0; i < 30; ++i) {
    cs.push_back({{0}, {0, 1, 2, 3, 4}});  // size 5
    cs.push_back({{1}, {1, 2}});           // size 2
  }
  LinearModel model = train_linear(cs, 2, 1e-9);
  CHECK(model.weights[0] - model.weights[1] ==
        doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("collinear data without ridge raises") {
  // Node 1 never appears: its normal-equation row is all zero.
  std::vector<IncompleteCascade> cs = {{{0}, {0}}, {{0}, {0, 2}}};
  CHECK_THROWS(train_linear(cs, 3, 0.0));
  CHECK_NOTHROW(train_linear(cs, 3, 1e-4));
}

TEST_CASE("baselines are invariant to cascade order") {
  std::vector<IncompleteCascade> cs;
  Rng rng = make_rng(7);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int i = 0; i < 60; ++i) {
    NodeId s = pick(rng);
    IncompleteCascade c{{s}, {s}};
    if (pick(rng) > 2) c.observed.push_back(static_cast<NodeId>(6));
    std::sort(c.observed.begin(), c.observed.end());
    cs.push_back(std::move(c));
  }
  std::vector<IncompleteCascade> shuffled = cs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  LinearModel la = train_linear(cs, 7, 1e-4);
  LinearModel lb = train_linear(shuffled, 7, 1e-4);
  for (int u = 0; u < 7; ++u)
    CHECK(la.weights[u] == doctest::Approx(lb.weights[u]).epsilon(1e-9));

  LogisticConfig cfg;
  LogisticRow ra = train_logistic_row(cs, 6, 7, cfg);
  LogisticRow rb = train_logistic_row(shuffled, 6, 7, cfg);
  for (int u = 0; u < 7; ++u)
    CHECK(ra.weights[u] == doctest::Approx(rb.weights[u]).epsilon(1e-9));
}
