#ifndef CASCADELAB_IO_HPP
#define CASCADELAB_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascadelab/baselines.hpp"
#include "cascadelab/diffusion.hpp"
#include "cascadelab/eval.hpp"
#include "cascadelab/learner.hpp"
#include "cascadelab/observation.hpp"

namespace cascadelab {

using Json = nlohmann::ordered_json;

std::string tool_version();

// All writers go through a temp file + rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& value);
std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

// Graph file: {"n": int, "model": "dic"|"dlt"|"cic", "window": float (cic),
// "edges": [[u, v, w], ...]}.
Json graph_to_json(const DiffusionSpec& spec);
DiffusionSpec graph_from_json(const Json& j);
void save_graph(const std::filesystem::path& path, const DiffusionSpec& spec);
DiffusionSpec load_graph(const std::filesystem::path& path);

// Cascade files are JSON Lines with ascending id arrays.
void save_cascades(const std::filesystem::path& path, const std::vector<Cascade>& cs);
std::vector<Cascade> load_cascades(const std::filesystem::path& path);
void save_incomplete_cascades(const std::filesystem::path& path,
                              const std::vector<IncompleteCascade>& cs);
// Accepts both "observed" (corrupted) and "active" (complete) records.
std::vector<IncompleteCascade> load_incomplete_cascades(
    const std::filesystem::path& path);

// Sidecar next to an incomplete cascade file.
void save_observation_meta(const std::filesystem::path& path, double retention_mean,
                           const std::string& rates_file);
void save_rates(const std::filesystem::path& path, const std::vector<double>& rates);
std::vector<double> load_rates(const std::filesystem::path& path);

// Influence model file:
// {"lambda": l, "retention_mean": r, "nodes": [{"v", "features", "beta"}]}.
Json model_to_json(const InfluenceModel& model);
InfluenceModel model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const InfluenceModel& model);
InfluenceModel load_model(const std::filesystem::path& path);

// Baseline model files carry a "method" tag.
void save_logistic(const std::filesystem::path& path, const LogisticModel& model);
LogisticModel load_logistic(const Json& j);
void save_linear(const std::filesystem::path& path, const LinearModel& model);
LinearModel load_linear(const Json& j);

struct RunManifest {
  std::string subcommand;
  Json config;
  std::uint64_t master_seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;
};

// Written atomically as <output>.manifest.json next to the first output.
void write_manifest(const RunManifest& manifest);

// Results CSVs: raw rows and per-cell aggregates.
void write_results_csv(const std::filesystem::path& path, const ResultsTable& table);
void write_aggregate_csv(const std::filesystem::path& path, const ResultsTable& table);
// Small gnuplot script plotting the aggregate file.
void write_gnuplot_script(const std::filesystem::path& path,
                          const std::string& aggregate_csv, const std::string& sweep,
                          const std::string& title);

enum class SweepKind { Retention, Misspecification, Nonuniform };
SweepKind sweep_kind_from_name(const std::string& name);
std::string sweep_kind_name(SweepKind k);

Json experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const Json& j);
SweepKind sweep_kind_of(const Json& j);

}  // namespace cascadelab

#endif
