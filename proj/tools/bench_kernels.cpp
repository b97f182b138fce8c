// Compares the OpenMP kernels against their serial reference
// implementations: wall time, speedup, and bit-exact agreement.

#include <chrono>
#include <cstdio>

#include <CLI11.hpp>

#include "cascadelab/eval.hpp"
#include "cascadelab/io.hpp"
#include "cascadelab/threads.hpp"

namespace cl = cascadelab;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

template <class Fn>
double time_ms(Fn&& fn) {
  const double t0 = now_ms();
  fn();
  return now_ms() - t0;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-18s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n",
              kernel, serial_ms, parallel_ms, serial_ms / parallel_ms,
              equal ? "outputs equal" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark: serial reference vs OpenMP kernels"};
  int power = 7;
  long edges = 256;
  int cascades = 2000;
  long mc_samples = 20000;
  int feature_count = 100;
  int test_sets = 50;
  int threads = 0;
  std::uint64_t seed = 7;
  app.add_option("--power", power);
  app.add_option("--edges", edges);
  app.add_option("--cascades", cascades);
  app.add_option("--mc-samples", mc_samples);
  app.add_option("--k", feature_count);
  app.add_option("--test-sets", test_sets);
  app.add_option("--threads", threads);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  cl::ExperimentConfig cfg;
  cfg.kron.power = power;
  cfg.kron.edge_count = edges;
  cfg.cascade_count = cascades;
  cfg.feature_count = feature_count;
  cfg.master_seed = seed;
  cl::DiffusionSpec spec = cfg.build_spec();
  const int n = spec.graph.num_nodes();
  std::printf("graph: %d nodes, %d edges, %d threads\n", n, spec.graph.num_edges(),
              cl::resolve_threads(threads));

  cl::Rng seeds_rng = cl::make_rng(cl::derive_seed(seed, cl::stream::train_seeds));
  auto seed_sets =
      cl::sample_seed_sets(n, cascades, cfg.seed_exponent, cfg.max_seed_size, seeds_rng);
  cl::Rng test_rng = cl::make_rng(cl::derive_seed(seed, cl::stream::test_seeds));
  auto eval_sets =
      cl::sample_seed_sets(n, test_sets, cfg.seed_exponent, cfg.max_seed_size, test_rng);

  std::vector<cl::Cascade> batch_serial, batch_parallel;
  double t_serial = time_ms([&] {
    batch_serial = cl::simulate_batch_serial(spec, seed_sets, seed);
  });
  double t_parallel = time_ms([&] {
    batch_parallel = cl::simulate_batch(spec, seed_sets, seed, threads);
  });
  bool equal = true;
  for (std::size_t i = 0; i < batch_serial.size(); ++i)
    equal = equal && batch_serial[i].active == batch_parallel[i].active;
  report("simulate_batch", t_serial, t_parallel, equal);

  cl::InfluenceEstimate mc_serial, mc_parallel;
  t_serial = time_ms([&] {
    mc_serial = cl::mc_influence_serial(spec, eval_sets.front(), mc_samples, seed);
  });
  t_parallel = time_ms([&] {
    mc_parallel = cl::mc_influence(spec, eval_sets.front(), mc_samples, seed, threads);
  });
  report("mc_influence", t_serial, t_parallel,
         mc_serial.marginals == mc_parallel.marginals);

  cl::GroundTruth gt_serial, gt_parallel;
  t_serial = time_ms([&] {
    gt_serial = cl::ground_truth_serial(spec, eval_sets, mc_samples / 2, seed);
  });
  t_parallel = time_ms([&] {
    gt_parallel = cl::ground_truth(spec, eval_sets, mc_samples / 2, seed, threads);
  });
  report("ground_truth", t_serial, t_parallel, gt_serial.totals == gt_parallel.totals);

  auto observed = cl::corrupt_batch(batch_serial,
                                    cl::RetentionProfile::constant(n, 0.8),
                                    cl::derive_seed(seed, cl::stream::corrupt));
  cl::RetentionProfile assumed = cl::RetentionProfile::constant(n, 0.8);
  cl::InfluenceModel model_serial, model_parallel;
  t_serial = time_ms([&] {
    model_serial =
        cl::train_all_serial(observed, n, assumed, feature_count, cfg.train, seed);
  });
  t_parallel = time_ms([&] {
    model_parallel =
        cl::train_all(observed, n, assumed, feature_count, cfg.train, seed, threads);
  });
  equal = true;
  for (int v = 0; v < n; ++v)
    equal = equal && model_serial.nodes[v].beta == model_parallel.nodes[v].beta;
  report("train_all", t_serial, t_parallel, equal);
  return 0;
}
