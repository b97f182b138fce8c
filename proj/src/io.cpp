#include "cascadelab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cascadelab {

namespace fs = std::filesystem;

std::string tool_version() { return "0.1.0"; }

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json_atomic(const fs::path& path, const Json& value) {
  write_text_atomic(path, value.dump(2) + "\n");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& path) { return Json::parse(read_text(path)); }

Json graph_to_json(const DiffusionSpec& spec) {
  Json j;
  j["n"] = spec.graph.num_nodes();
  j["model"] = model_kind_name(spec.kind);
  if (spec.kind == ModelKind::CIC) j["window"] = spec.window;
  Json edges = Json::array();
  for (const Edge& e : spec.graph.edges()) edges.push_back({e.src, e.dst, e.weight});
  j["edges"] = std::move(edges);
  return j;
}

DiffusionSpec graph_from_json(const Json& j) {
  DiffusionSpec spec;
  spec.kind = model_kind_from_name(j.at("model").get<std::string>());
  if (spec.kind == ModelKind::CIC) spec.window = j.at("window").get<double>();
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const Json& e : j.at("edges"))
    edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>()});
  spec.graph = DirectedGraph(n, std::move(edges));
  spec.validate();
  return spec;
}

void save_graph(const fs::path& path, const DiffusionSpec& spec) {
  write_json_atomic(path, graph_to_json(spec));
}

DiffusionSpec load_graph(const fs::path& path) {
  return graph_from_json(read_json(path));
}

namespace {

std::string cascade_lines(const std::vector<Cascade>& cs) {
  std::string text;
  for (const Cascade& c : cs) {
    Json j;
    j["seeds"] = c.seeds;
    j["active"] = c.active;
    text += j.dump();
    text += '\n';
  }
  return text;
}

template <class Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    fn(Json::parse(line));
  }
}

}  // namespace

void save_cascades(const fs::path& path, const std::vector<Cascade>& cs) {
  write_text_atomic(path, cascade_lines(cs));
}

std::vector<Cascade> load_cascades(const fs::path& path) {
  std::vector<Cascade> out;
  for_each_line(path, [&](const Json& j) {
    Cascade c;
    c.seeds = j.at("seeds").get<std::vector<NodeId>>();
    c.active = j.at("active").get<std::vector<NodeId>>();
    out.push_back(std::move(c));
  });
  return out;
}

void save_incomplete_cascades(const fs::path& path,
                              const std::vector<IncompleteCascade>& cs) {
  std::string text;
  for (const IncompleteCascade& c : cs) {
    Json j;
    j["seeds"] = c.seeds;
    j["observed"] = c.observed;
    text += j.dump();
    text += '\n';
  }
  write_text_atomic(path, text);
}

std::vector<IncompleteCascade> load_incomplete_cascades(const fs::path& path) {
  std::vector<IncompleteCascade> out;
  for_each_line(path, [&](const Json& j) {
    IncompleteCascade c;
    c.seeds = j.at("seeds").get<std::vector<NodeId>>();
    const char* key = j.contains("observed") ? "observed" : "active";
    c.observed = j.at(key).get<std::vector<NodeId>>();
    out.push_back(std::move(c));
  });
  return out;
}

void save_observation_meta(const fs::path& path, double retention_mean,
                           const std::string& rates_file) {
  Json j;
  j["retention_mean"] = retention_mean;
  if (!rates_file.empty()) j["rates_file"] = rates_file;
  write_json_atomic(path, j);
}

void save_rates(const fs::path& path, const std::vector<double>& rates) {
  write_json_atomic(path, Json(rates));
}

std::vector<double> load_rates(const fs::path& path) {
  return read_json(path).get<std::vector<double>>();
}

Json model_to_json(const InfluenceModel& model) {
  Json j;
  j["lambda"] = model.lambda;
  j["retention_mean"] = model.retention_mean;
  Json nodes = Json::array();
  for (NodeId v = 0; v < model.n; ++v) {
    const NodeModel& nm = model.nodes[v];
    Json entry;
    entry["v"] = v;
    Json features = Json::array();
    for (const NodeBits& t : nm.bank.features) features.push_back(t.to_ids());
    entry["features"] = std::move(features);
    entry["beta"] = nm.beta;
    nodes.push_back(std::move(entry));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

InfluenceModel model_from_json(const Json& j) {
  InfluenceModel model;
  model.lambda = j.at("lambda").get<double>();
  model.retention_mean = j.at("retention_mean").get<double>();
  model.n = static_cast<int>(j.at("nodes").size());
  model.nodes.resize(model.n);
  for (const Json& entry : j.at("nodes")) {
    const NodeId v = entry.at("v").get<NodeId>();
    if (v < 0 || v >= model.n) throw std::runtime_error("model: node id out of range");
    NodeModel nm;
    nm.bank.target = v;
    for (const Json& f : entry.at("features"))
      nm.bank.features.push_back(NodeBits::of(model.n, f.get<std::vector<NodeId>>()));
    nm.beta = entry.at("beta").get<std::vector<double>>();
    if (nm.beta.size() != nm.bank.features.size())
      throw std::runtime_error("model: beta/features size mismatch");
    model.nodes[v] = std::move(nm);
  }
  return model;
}

void save_model(const fs::path& path, const InfluenceModel& model) {
  write_json_atomic(path, model_to_json(model));
}

InfluenceModel load_model(const fs::path& path) {
  return model_from_json(read_json(path));
}

void save_logistic(const fs::path& path, const LogisticModel& model) {
  Json j;
  j["method"] = "logistic";
  j["n"] = model.n;
  Json nodes = Json::array();
  for (NodeId v = 0; v < model.n; ++v) {
    Json entry;
    entry["v"] = v;
    entry["weights"] = model.rows[v].weights;
    entry["bias"] = model.rows[v].bias;
    nodes.push_back(std::move(entry));
  }
  j["nodes"] = std::move(nodes);
  write_json_atomic(path, j);
}

LogisticModel load_logistic(const Json& j) {
  LogisticModel model;
  model.n = j.at("n").get<int>();
  model.rows.resize(model.n);
  for (const Json& entry : j.at("nodes")) {
    const NodeId v = entry.at("v").get<NodeId>();
    model.rows[v].weights = entry.at("weights").get<std::vector<double>>();
    model.rows[v].bias = entry.at("bias").get<double>();
  }
  return model;
}

void save_linear(const fs::path& path, const LinearModel& model) {
  Json j;
  j["method"] = "linear";
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  write_json_atomic(path, j);
}

LinearModel load_linear(const Json& j) {
  LinearModel model;
  model.weights = j.at("weights").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  return model;
}

void write_manifest(const RunManifest& manifest) {
  if (manifest.outputs.empty())
    throw std::invalid_argument("manifest: no outputs recorded");
  Json j;
  j["subcommand"] = manifest.subcommand;
  j["config"] = manifest.config;
  j["master_seed"] = manifest.master_seed;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["tool_version"] = tool_version();
  j["duration_seconds"] = manifest.duration_seconds;
  fs::path path = manifest.outputs.front() + ".manifest.json";
  write_json_atomic(path, j);
}

namespace {

std::string format_double(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

}  // namespace

void write_results_csv(const fs::path& path, const ResultsTable& table) {
  std::string text = "method,param,replication,mae\n";
  for (const auto& row : table.rows) {
    text += row.method;
    text += ',';
    text += format_double(row.param);
    text += ',';
    text += std::to_string(row.replication);
    text += ',';
    text += format_double(row.mae);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void write_aggregate_csv(const fs::path& path, const ResultsTable& table) {
  std::string text = "method,param,mean_mae,std_mae\n";
  for (const auto& agg : table.aggregate()) {
    text += agg.method;
    text += ',';
    text += format_double(agg.param);
    text += ',';
    text += format_double(agg.mean_mae);
    text += ',';
    text += format_double(agg.std_mae);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void write_gnuplot_script(const fs::path& path, const std::string& aggregate_csv,
                          const std::string& sweep, const std::string& title) {
  std::string xlabel = "retention rate";
  if (sweep == "misspecification") xlabel = "assumed retention rate";
  if (sweep == "nonuniform") xlabel = "sigma of per-node retention rates";
  std::string text;
  text += "set datafile separator ','\n";
  text += "set key outside\n";
  text += "set xlabel '" + xlabel + "'\n";
  text += "set ylabel 'MAE of total influence'\n";
  text += "set title '" + title + "'\n";
  text += "plot for [m in system(\"tail -n +2 " + aggregate_csv +
          " | cut -d, -f1 | sort -u | tr '\\n' ' '\")] \\\n";
  text += "  '< grep \"^'.m.',\" " + aggregate_csv +
          "' using 2:3:4 with yerrorlines title m\n";
  write_text_atomic(path, text);
}

SweepKind sweep_kind_from_name(const std::string& name) {
  if (name == "retention") return SweepKind::Retention;
  if (name == "misspecification") return SweepKind::Misspecification;
  if (name == "nonuniform") return SweepKind::Nonuniform;
  throw std::invalid_argument("unknown sweep '" + name + "'");
}

std::string sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Retention: return "retention";
    case SweepKind::Misspecification: return "misspecification";
    case SweepKind::Nonuniform: return "nonuniform";
  }
  return {};
}

Json experiment_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["kron"] = cfg.kron.seed_matrix;
  j["power"] = cfg.kron.power;
  j["edges"] = cfg.kron.edge_count;
  j["weights"] = cfg.weights.to_string();
  j["model"] = model_kind_name(cfg.model);
  j["window"] = cfg.window;
  j["cascades"] = cfg.cascade_count;
  j["seed_exponent"] = cfg.seed_exponent;
  j["max_seed_size"] = cfg.max_seed_size;
  j["retention_grid"] = cfg.retention_grid;
  j["true_retention"] = cfg.true_retention;
  j["assumed_grid"] = cfg.assumed_grid;
  j["sigma_grid"] = cfg.sigma_grid;
  j["rate_dist"] = rate_dist_name(cfg.rate_dist);
  j["test_seed_sets"] = cfg.test_seed_sets;
  j["mc_samples"] = cfg.mc_samples;
  j["k"] = cfg.feature_count;
  j["lambda"] = cfg.train.lambda;
  j["loss"] = loss_variant_name(cfg.train.loss);
  j["replications"] = cfg.replications;
  j["master_seed"] = cfg.master_seed;
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = std::move(methods);
  return j;
}

ExperimentConfig experiment_from_json(const Json& j) {
  ExperimentConfig cfg;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "desk")
      cfg = ExperimentConfig::desk();
    else if (preset == "paper")
      cfg = ExperimentConfig::paper();
    else
      throw std::invalid_argument("unknown preset '" + preset + "'");
  }
  if (j.contains("kron")) cfg.kron.seed_matrix = j.at("kron").get<std::array<double, 4>>();
  if (j.contains("power")) cfg.kron.power = j.at("power").get<int>();
  if (j.contains("edges")) cfg.kron.edge_count = j.at("edges").get<long>();
  if (j.contains("weights")) {
    cfg.weights = WeightScheme::parse(j.at("weights").get<std::string>());
    switch (cfg.weights.kind) {
      case WeightScheme::Kind::DicUniform: cfg.model = ModelKind::DIC; break;
      case WeightScheme::Kind::DltInDegree: cfg.model = ModelKind::DLT; break;
      case WeightScheme::Kind::CicUniform: cfg.model = ModelKind::CIC; break;
    }
  }
  if (j.contains("model"))
    cfg.model = model_kind_from_name(j.at("model").get<std::string>());
  if (j.contains("window")) cfg.window = j.at("window").get<double>();
  if (j.contains("cascades")) cfg.cascade_count = j.at("cascades").get<int>();
  if (j.contains("seed_exponent")) cfg.seed_exponent = j.at("seed_exponent").get<double>();
  if (j.contains("max_seed_size")) cfg.max_seed_size = j.at("max_seed_size").get<int>();
  if (j.contains("retention_grid"))
    cfg.retention_grid = j.at("retention_grid").get<std::vector<double>>();
  if (j.contains("true_retention"))
    cfg.true_retention = j.at("true_retention").get<double>();
  if (j.contains("assumed_grid"))
    cfg.assumed_grid = j.at("assumed_grid").get<std::vector<double>>();
  if (j.contains("sigma_grid"))
    cfg.sigma_grid = j.at("sigma_grid").get<std::vector<double>>();
  if (j.contains("rate_dist"))
    cfg.rate_dist = rate_dist_from_name(j.at("rate_dist").get<std::string>());
  if (j.contains("test_seed_sets")) cfg.test_seed_sets = j.at("test_seed_sets").get<int>();
  if (j.contains("mc_samples")) cfg.mc_samples = j.at("mc_samples").get<long>();
  if (j.contains("k")) cfg.feature_count = j.at("k").get<int>();
  if (j.contains("lambda")) cfg.train.lambda = j.at("lambda").get<double>();
  if (j.contains("loss"))
    cfg.train.loss = loss_variant_from_name(j.at("loss").get<std::string>());
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const Json& m : j.at("methods"))
      cfg.methods.push_back(method_from_name(m.get<std::string>()));
  }
  return cfg;
}

SweepKind sweep_kind_of(const Json& j) {
  return sweep_kind_from_name(j.at("sweep").get<std::string>());
}

}  // namespace cascadelab
