// cascade-lab: generate diffusion graphs and cascades, corrupt observations,
// train influence models, and run the synthetic evaluation sweeps.

#include <chrono>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "cascadelab/eval.hpp"
#include "cascadelab/io.hpp"
#include "cascadelab/threads.hpp"

namespace cl = cascadelab;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct GenGraphArgs {
  std::string kron = "0.9,0.5,0.5,0.3";
  int power = 7;
  long edges = 256;
  std::string weights = "dic-uniform:0,0.4";
  double window = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

std::array<double, 4> parse_kron(const std::string& text) {
  std::array<double, 4> m{};
  std::stringstream ss(text);
  std::string item;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(ss, item, ','))
      throw std::invalid_argument("--kron needs four comma-separated values");
    m[i] = std::stod(item);
  }
  return m;
}

int run_gen_graph(const GenGraphArgs& args) {
  Timer timer;
  cl::KroneckerSpec spec{parse_kron(args.kron), args.power, args.edges};
  cl::Rng graph_rng = cl::make_rng(cl::derive_seed(args.seed, cl::stream::graph));
  cl::DirectedGraph g = cl::kronecker_generate(spec, graph_rng);
  cl::WeightScheme scheme = cl::WeightScheme::parse(args.weights);
  cl::Rng weight_rng = cl::make_rng(cl::derive_seed(args.seed, cl::stream::weights));
  g = cl::assign_weights(g, scheme, weight_rng);

  cl::ModelKind kind = cl::ModelKind::DIC;
  double window = 0.0;
  switch (scheme.kind) {
    case cl::WeightScheme::Kind::DicUniform: kind = cl::ModelKind::DIC; break;
    case cl::WeightScheme::Kind::DltInDegree: kind = cl::ModelKind::DLT; break;
    case cl::WeightScheme::Kind::CicUniform:
      kind = cl::ModelKind::CIC;
      window = args.window;
      break;
  }
  cl::DiffusionSpec diffusion{kind, std::move(g), window};
  diffusion.validate();
  cl::save_graph(args.output, diffusion);

  cl::RunManifest manifest;
  manifest.subcommand = "gen-graph";
  manifest.config = {{"kron", args.kron},     {"power", args.power},
                     {"edges", args.edges},   {"weights", args.weights},
                     {"window", args.window}, {"seed", args.seed}};
  manifest.master_seed = args.seed;
  manifest.outputs = {args.output};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "wrote " << args.output << " (" << diffusion.graph.num_nodes()
            << " nodes, " << diffusion.graph.num_edges() << " edges)\n";
  return 0;
}

struct SimulateArgs {
  std::string graph;
  long count = 0;
  double seed_exponent = 2.5;
  int max_seed_size = 10;
  double window = 0.0;  // 0 keeps the graph file's window
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
};

int run_simulate(const SimulateArgs& args) {
  Timer timer;
  cl::DiffusionSpec spec = cl::load_graph(args.graph);
  if (args.window > 0.0) {
    if (spec.kind != cl::ModelKind::CIC)
      throw std::runtime_error("--window only applies to CIC graphs");
    spec.window = args.window;
  }
  const int n = spec.graph.num_nodes();
  cl::Rng seed_rng = cl::make_rng(cl::derive_seed(args.seed, cl::stream::train_seeds));
  auto seed_sets = cl::sample_seed_sets(n, static_cast<int>(args.count),
                                        args.seed_exponent,
                                        std::min(args.max_seed_size, n), seed_rng);
  auto cascades = cl::simulate_batch(spec, seed_sets,
                                     cl::derive_seed(args.seed, cl::stream::simulate),
                                     args.threads);
  cl::save_cascades(args.output, cascades);

  double mean_size = 0.0;
  for (const cl::Cascade& c : cascades) mean_size += c.active.size();
  if (!cascades.empty()) mean_size /= cascades.size();

  cl::RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.config = {{"count", args.count},
                     {"seed_exponent", args.seed_exponent},
                     {"max_seed_size", args.max_seed_size},
                     {"window", args.window},
                     {"seed", args.seed}};
  manifest.master_seed = args.seed;
  manifest.inputs = {args.graph};
  manifest.outputs = {args.output};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "wrote " << args.output << " (" << cascades.size()
            << " cascades, mean size " << mean_size << ")\n";
  return 0;
}

struct CorruptArgs {
  std::string cascades;
  std::string graph;
  double retention = 1.0;
  double sigma = 0.0;
  std::string dist = "gaussian";
  std::uint64_t seed = 0;
  std::string output;
};

int run_corrupt(const CorruptArgs& args) {
  Timer timer;
  auto cascades = cl::load_cascades(args.cascades);
  int n = 0;
  if (!args.graph.empty()) {
    n = cl::load_graph(args.graph).graph.num_nodes();
  } else {
    for (const cl::Cascade& c : cascades)
      for (cl::NodeId v : c.active) n = std::max(n, v + 1);
  }

  cl::RetentionProfile profile;
  std::string rates_file;
  if (args.sigma > 0.0) {
    cl::Rng rates_rng = cl::make_rng(cl::derive_seed(args.seed, cl::stream::rates));
    profile = cl::draw_rates(n, args.retention, args.sigma,
                             cl::rate_dist_from_name(args.dist), rates_rng);
    rates_file = args.output + ".rates.json";
    cl::save_rates(rates_file, profile.rates);
  } else {
    profile = cl::RetentionProfile::constant(n, args.retention);
  }
  auto observed = cl::corrupt_batch(cascades, profile,
                                    cl::derive_seed(args.seed, cl::stream::corrupt));
  cl::save_incomplete_cascades(args.output, observed);
  cl::save_observation_meta(args.output + ".meta.json", args.retention, rates_file);

  cl::RunManifest manifest;
  manifest.subcommand = "corrupt";
  manifest.config = {{"retention", args.retention},
                     {"sigma", args.sigma},
                     {"dist", args.dist},
                     {"seed", args.seed}};
  manifest.master_seed = args.seed;
  manifest.inputs = {args.cascades};
  manifest.outputs = {args.output};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "wrote " << args.output << " (" << observed.size() << " cascades)\n";
  return 0;
}

struct TrainArgs {
  std::string cascades;
  std::string graph;
  std::string method = "ours";
  double retention = 1.0;
  std::string rates_file;
  int k = cl::kDefaultFeatureCount;
  double lambda = 0.01;
  std::string loss = "corrected";
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
};

int run_train(const TrainArgs& args) {
  Timer timer;
  cl::DiffusionSpec spec = cl::load_graph(args.graph);
  const int n = spec.graph.num_nodes();
  auto data = cl::load_incomplete_cascades(args.cascades);
  const cl::Method method = cl::method_from_name(args.method);

  switch (method) {
    case cl::Method::Ours:
    case cl::Method::InfluLearner: {
      cl::RetentionProfile profile;
      if (method == cl::Method::InfluLearner) {
        profile = cl::RetentionProfile::constant(n, 1.0);
      } else if (!args.rates_file.empty()) {
        profile.rates = cl::load_rates(args.rates_file);
        profile.mean = args.retention;
        if (static_cast<int>(profile.rates.size()) != n)
          throw std::runtime_error("rates file size does not match graph");
      } else {
        profile = cl::RetentionProfile::constant(n, args.retention);
      }
      cl::TrainConfig cfg;
      cfg.lambda = args.lambda;
      cfg.loss = cl::loss_variant_from_name(args.loss);
      cl::InfluenceModel model =
          cl::train_all(data, n, profile, args.k, cfg, args.seed, args.threads);
      cl::save_model(args.output, model);
      break;
    }
    case cl::Method::Logistic: {
      cl::LogisticConfig cfg;
      cfg.l2 = args.l2;
      cl::save_logistic(args.output, cl::train_logistic(data, n, cfg, args.threads));
      break;
    }
    case cl::Method::Linear: {
      cl::save_linear(args.output, cl::train_linear(data, n, args.l2));
      break;
    }
  }

  cl::RunManifest manifest;
  manifest.subcommand = "train";
  manifest.config = {{"method", args.method},   {"retention", args.retention},
                     {"rates_file", args.rates_file}, {"k", args.k},
                     {"lambda", args.lambda},   {"loss", args.loss},
                     {"l2", args.l2},           {"seed", args.seed}};
  manifest.master_seed = args.seed;
  manifest.inputs = {args.cascades, args.graph};
  manifest.outputs = {args.output};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "wrote " << args.output << "\n";
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string graph;
  int test_count = 50;
  double seed_exponent = 2.5;
  int max_seed_size = 10;
  long mc_samples = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
};

int run_eval(const EvalArgs& args) {
  Timer timer;
  cl::DiffusionSpec spec = cl::load_graph(args.graph);
  const int n = spec.graph.num_nodes();
  cl::Rng test_rng = cl::make_rng(cl::derive_seed(args.seed, cl::stream::test_seeds));
  auto test_sets = cl::sample_seed_sets(n, args.test_count, args.seed_exponent,
                                        std::min(args.max_seed_size, n), test_rng);
  cl::GroundTruth truth =
      cl::ground_truth(spec, test_sets, args.mc_samples,
                       cl::derive_seed(args.seed, cl::stream::ground_truth),
                       args.threads);

  const cl::Json model_json = cl::read_json(args.model);
  std::vector<double> totals(test_sets.size());
  std::string method = "ours";
  if (model_json.contains("method")) method = model_json.at("method");
  if (method == "logistic") {
    cl::LogisticModel model = cl::load_logistic(model_json);
    for (std::size_t s = 0; s < test_sets.size(); ++s) {
      auto marg = cl::logistic_predict(model, test_sets[s]);
      totals[s] = std::accumulate(marg.begin(), marg.end(), 0.0);
    }
  } else if (method == "linear") {
    cl::LinearModel model = cl::load_linear(model_json);
    for (std::size_t s = 0; s < test_sets.size(); ++s)
      totals[s] = cl::linear_predict_total(model, test_sets[s]);
  } else {
    cl::InfluenceModel model = cl::model_from_json(model_json);
    if (model.n != n) throw std::runtime_error("model/graph size mismatch");
    for (std::size_t s = 0; s < test_sets.size(); ++s)
      totals[s] = cl::predict(model, test_sets[s]).total;
  }
  const double mae = cl::mae_total(totals, truth.totals);

  cl::Json report;
  report["mae"] = mae;
  report["test_seed_sets"] = static_cast<int>(test_sets.size());
  report["mc_samples"] = args.mc_samples;
  cl::Json per_set = cl::Json::array();
  for (std::size_t s = 0; s < test_sets.size(); ++s)
    per_set.push_back({{"seeds", test_sets[s]},
                       {"true_total", truth.totals[s]},
                       {"predicted_total", totals[s]}});
  report["per_set"] = std::move(per_set);
  cl::write_json_atomic(args.output, report);

  cl::RunManifest manifest;
  manifest.subcommand = "eval";
  manifest.config = {{"test_count", args.test_count},
                     {"seed_exponent", args.seed_exponent},
                     {"max_seed_size", args.max_seed_size},
                     {"mc_samples", args.mc_samples},
                     {"seed", args.seed}};
  manifest.master_seed = args.seed;
  manifest.inputs = {args.model, args.graph};
  manifest.outputs = {args.output};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "mae " << mae << "\n";
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string outdir;
  int threads = 0;
};

int run_sweep(const SweepArgs& args) {
  Timer timer;
  const cl::Json config_json = cl::read_json(args.config);
  cl::ExperimentConfig cfg = cl::experiment_from_json(config_json);
  cfg.threads = args.threads;
  const cl::SweepKind kind = cl::sweep_kind_of(config_json);

  cl::ResultsTable table;
  switch (kind) {
    case cl::SweepKind::Retention: table = cl::run_retention_sweep(cfg); break;
    case cl::SweepKind::Misspecification:
      table = cl::run_misspecification_sweep(cfg);
      break;
    case cl::SweepKind::Nonuniform: table = cl::run_nonuniform_sweep(cfg); break;
  }

  std::filesystem::create_directories(args.outdir);
  const std::filesystem::path dir(args.outdir);
  cl::write_results_csv(dir / "results.csv", table);
  cl::write_aggregate_csv(dir / "aggregate.csv", table);
  cl::write_gnuplot_script(dir / "plot.gp", "aggregate.csv", cl::sweep_kind_name(kind),
                           cl::sweep_kind_name(kind) + " sweep");

  cl::RunManifest manifest;
  manifest.subcommand = "sweep";
  manifest.config = cl::experiment_to_json(cfg);
  manifest.config["sweep"] = cl::sweep_kind_name(kind);
  manifest.master_seed = cfg.master_seed;
  manifest.inputs = {args.config};
  manifest.outputs = {(dir / "results.csv").string(), (dir / "aggregate.csv").string(),
                      (dir / "plot.gp").string()};
  manifest.duration_seconds = timer.seconds();
  cl::write_manifest(manifest);
  std::cout << "wrote " << (dir / "results.csv").string() << " (" << table.rows.size()
            << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascade-lab: influence function learning from incomplete cascades"};
  app.require_subcommand(1);

  GenGraphArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-graph", "generate a weighted Kronecker graph");
  gen->add_option("--kron", gen_args.kron, "2x2 seed matrix, row major");
  gen->add_option("--power", gen_args.power, "graph has 2^power nodes");
  gen->add_option("--edges", gen_args.edges, "number of distinct edges");
  gen->add_option("--weights", gen_args.weights,
                  "dic-uniform:a,b | dlt-indegree | cic-uniform:a,b");
  gen->add_option("--window", gen_args.window, "CIC observation window");
  gen->add_option("--seed", gen_args.seed, "master seed");
  gen->add_option("-o,--output", gen_args.output, "graph JSON path")->required();

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "sample cascades from a graph");
  sim->add_option("--graph", sim_args.graph, "graph JSON path")->required();
  sim->add_option("--count", sim_args.count, "number of cascades")->required();
  sim->add_option("--seed-exponent", sim_args.seed_exponent,
                  "power-law exponent of seed set sizes");
  sim->add_option("--max-seed-size", sim_args.max_seed_size, "largest seed set");
  sim->add_option("--window", sim_args.window, "override CIC window");
  sim->add_option("--seed", sim_args.seed, "master seed");
  sim->add_option("--threads", sim_args.threads, "worker threads (0 = auto)");
  sim->add_option("-o,--output", sim_args.output, "cascades JSONL path")->required();

  CorruptArgs cor_args;
  CLI::App* cor = app.add_subcommand("corrupt", "apply the observation-loss process");
  cor->add_option("--cascades", cor_args.cascades, "complete cascades JSONL")->required();
  cor->add_option("--graph", cor_args.graph, "graph JSON (sizes the rates file)");
  cor->add_option("--retention", cor_args.retention, "mean retention rate")->required();
  cor->add_option("--sigma", cor_args.sigma, "per-node rate spread (0 = uniform rate)");
  cor->add_option("--dist", cor_args.dist, "uniform | gaussian");
  cor->add_option("--seed", cor_args.seed, "master seed");
  cor->add_option("-o,--output", cor_args.output, "observed cascades JSONL")->required();

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit an influence model");
  train->add_option("--cascades", train_args.cascades, "observed cascades JSONL")
      ->required();
  train->add_option("--graph", train_args.graph, "graph JSON path")->required();
  train->add_option("--method", train_args.method,
                    "ours | influlearner | logistic | linear");
  train->add_option("--retention", train_args.retention, "assumed retention rate");
  train->add_option("--rates-file", train_args.rates_file, "per-node rates JSON");
  train->add_option("--k", train_args.k, "features per node");
  train->add_option("--lambda", train_args.lambda, "prediction truncation");
  train->add_option("--loss", train_args.loss, "corrected | paper-literal");
  train->add_option("--l2", train_args.l2, "ridge strength for baselines");
  train->add_option("--seed", train_args.seed, "master seed");
  train->add_option("--threads", train_args.threads, "worker threads (0 = auto)");
  train->add_option("-o,--output", train_args.output, "model JSON path")->required();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score a model against MC ground truth");
  eval->add_option("--model", eval_args.model, "model JSON path")->required();
  eval->add_option("--graph", eval_args.graph, "graph JSON path")->required();
  eval->add_option("--test-count", eval_args.test_count, "number of test seed sets");
  eval->add_option("--seed-exponent", eval_args.seed_exponent, "seed size exponent");
  eval->add_option("--max-seed-size", eval_args.max_seed_size, "largest seed set");
  eval->add_option("--mc-samples", eval_args.mc_samples, "live-edge samples");
  eval->add_option("--seed", eval_args.seed, "master seed");
  eval->add_option("--threads", eval_args.threads, "worker threads (0 = auto)");
  eval->add_option("-o,--output", eval_args.output, "report JSON path")->required();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "run a configured experiment sweep");
  sweep->add_option("--config", sweep_args.config, "sweep config JSON")->required();
  sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = auto)");
  sweep->add_option("-o,--outdir", sweep_args.outdir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen_graph(gen_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (cor->parsed()) return run_corrupt(cor_args);
    if (train->parsed()) return run_train(train_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
