#include <doctest.h>

#include <numeric>

#include "cascadelab/observation.hpp"
#include "test_support.hpp"

using namespace cascadelab;

namespace {

// Deterministic fake generator handing out a fixed sequence of doubles,
// for pinning exactly which draw lands on which node.
struct SequenceRng {
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return (1ULL << 53) - 1; }
  std::vector<double> values;
  std::size_t next = 0;
  result_type operator()() {
    double v = values.at(next++);
    return static_cast<result_type>(v * static_cast<double>(max()));
  }
};

}  // namespace

TEST_CASE("corrupt keeps seeds and filters non-seeds") {
  Cascade c{{1, 4}, {1, 2, 4, 5, 7}};
  Rng rng = make_rng(3);

  SUBCASE("all-ones profile is the identity") {
    auto obs = corrupt(c, RetentionProfile::constant(8, 1.0), rng);
    CHECK(obs.observed == c.active);
    CHECK(obs.seeds == c.seeds);
  }

  SUBCASE("zero retention keeps only the seeds") {
    auto obs = corrupt(c, RetentionProfile::constant(8, 0.0), rng);
    CHECK(obs.observed == c.seeds);
  }

  SUBCASE("seeds survive any profile") {
    for (int trial = 0; trial < 100; ++trial) {
      auto obs = corrupt(c, RetentionProfile::constant(8, 0.3), rng);
      for (NodeId s : c.seeds)
        CHECK(std::binary_search(obs.observed.begin(), obs.observed.end(), s));
      for (NodeId v : obs.observed)
        CHECK(std::binary_search(c.active.begin(), c.active.end(), v));
    }
  }
}

TEST_CASE("corrupt keeps the right fraction over a large active set") {
  const int n = 100002;
  Cascade c;
  c.seeds = {0};
  c.active.resize(n);
  std::iota(c.active.begin(), c.active.end(), 0);
  Rng rng = make_rng(17);
  auto obs = corrupt(c, RetentionProfile::constant(n, 0.8), rng);
  const double kept =
      static_cast<double>(obs.observed.size() - 1) / static_cast<double>(n - 1);
  CHECK(kept == doctest::Approx(0.8).epsilon(0.00625));
}

TEST_CASE("corrupt consumes one draw per non-seed in ascending id order") {
  Cascade c{{2}, {0, 2, 3, 5}};
  RetentionProfile p = RetentionProfile::constant(6, 0.5);
  // Draws land on nodes 0, 3, 5 in this order.
  SequenceRng rng{.values = {0.1, 0.9, 0.2}};
  auto obs = corrupt(c, p, rng);
  CHECK(obs.observed == std::vector<NodeId>{0, 2, 5});
  CHECK(rng.next == 3);
}

TEST_CASE("corrupt commutes with node relabeling under permuted draws") {
  const int n = 6;
  Cascade c{{1}, {1, 2, 4, 5}};
  std::vector<double> rates = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
  std::vector<double> draws_per_node = {0.55, 0.1, 0.65, 0.3, 0.45, 0.41};

  // Reverse relabeling pi(v) = n-1-v.
  auto pi = [&](NodeId v) { return static_cast<NodeId>(n - 1 - v); };

  RetentionProfile p{rates, 0.65};
  std::vector<double> base_draws;
  for (NodeId v : c.active)
    if (v != 1) base_draws.push_back(draws_per_node[v]);
  SequenceRng rng{.values = base_draws};
  auto obs = corrupt(c, p, rng);

  Cascade relabeled{{pi(1)}, {pi(5), pi(4), pi(2), pi(1)}};
  std::sort(relabeled.active.begin(), relabeled.active.end());
  std::vector<double> perm_rates(n), perm_draw_values;
  for (NodeId v = 0; v < n; ++v) perm_rates[pi(v)] = rates[v];
  for (NodeId v : relabeled.active)
    if (v != pi(1)) perm_draw_values.push_back(draws_per_node[n - 1 - v]);
  SequenceRng perm_rng{.values = perm_draw_values};
  auto perm_obs = corrupt(relabeled, RetentionProfile{perm_rates, 0.65}, perm_rng);

  std::vector<NodeId> expected;
  for (NodeId v : obs.observed) expected.push_back(pi(v));
  std::sort(expected.begin(), expected.end());
  CHECK(perm_obs.observed == expected);
}

TEST_CASE("draw_rates matches the requested distribution") {
  Rng rng = make_rng(29);

  SUBCASE("sigma zero is degenerate") {
    RetentionProfile p = draw_rates(100, 0.8, 0.0, RateDist::Gaussian, rng);
    for (double r : p.rates) CHECK(r == 0.8);
  }

  SUBCASE("uniform support stays inside [mean-sigma, mean+sigma]") {
    RetentionProfile p = draw_rates(10000, 0.8, 0.1, RateDist::Uniform, rng);
    for (double r : p.rates) {
      CHECK(r >= 0.7);
      CHECK(r <= 0.9);
    }
  }

  SUBCASE("clamped gaussian keeps the mean within the quoted bias") {
    RetentionProfile p = draw_rates(1000000, 0.8, 0.2, RateDist::Gaussian, rng);
    double mean = std::accumulate(p.rates.begin(), p.rates.end(), 0.0) / p.size();
    CHECK(std::abs(mean - 0.8) < 0.01);
    for (double r : p.rates) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("corrupt_batch is reproducible and order independent") {
  Rng inst_rng = make_rng(5);
  DiffusionSpec spec = testing::random_tiny_instance(ModelKind::DIC, inst_rng);
  std::vector<std::vector<NodeId>> seed_sets;
  for (int i = 0; i < 50; ++i)
    seed_sets.push_back(testing::random_seed_set(spec.graph.num_nodes(), inst_rng));
  auto cascades = simulate_batch_serial(spec, seed_sets, 9);
  RetentionProfile p = RetentionProfile::constant(spec.graph.num_nodes(), 0.6);
  auto a = corrupt_batch(cascades, p, 11);
  auto b = corrupt_batch(cascades, p, 11);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].observed == b[i].observed);
}
