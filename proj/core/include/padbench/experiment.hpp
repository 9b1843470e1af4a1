#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padbench/cache.hpp"
#include "padbench/classifier.hpp"
#include "padbench/features.hpp"
#include "padbench/protocols.hpp"
#include "padbench/report.hpp"

namespace padbench {

// Everything a run needs; fully serializable, and its hash is recorded in
// the report so artifacts can be traced back to their configuration.
struct ExperimentConfig {
    std::string data_root = ".";
    std::vector<std::string> manifests;  // resolved against data_root when relative
    std::string extractor = "color_lbp";
    std::string extractor_config_json;  // "" = defaults
    // Built-in name ("grandtest", "unseen_attack:replay", ...), a path to a
    // protocol config file (*.json), or an inline JSON object.
    std::string protocol = "grandtest";
    double svm_c = 1.0;
    std::optional<double> svm_gamma;  // default 1/dim
    double svm_tol = 1e-3;
    std::uint64_t seed = 0;
    int frame_stride = 1;  // take every k-th frame
    int workers = 2;
    std::string out_dir = "out";
    std::string cache_dir;  // "" = "cache"; PADBENCH_CACHE_DIR overrides both
};

ExperimentConfig experiment_config_from_json(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// FNV-1a over the canonical JSON form.
std::uint64_t experiment_config_hash(const ExperimentConfig& cfg);

// Cache directory after the environment override.
std::string resolve_cache_dir(const ExperimentConfig& cfg);

Registry load_registry(const ExperimentConfig& cfg);

ProtocolSpec resolve_protocol(const std::string& protocol);

// Per-registry-index feature vectors; empty vectors mark samples that were
// not requested.
using FeatureTable = std::vector<FeatureVector>;

// Cache-aware video feature extraction over a bounded worker pool. `wanted`
// lists registry indices; pass all indices to warm the whole cache.
FeatureTable extract_features(const Registry& registry, const std::vector<std::size_t>& wanted,
                              const FeatureExtractor& extractor, FeatureCache& cache,
                              const ExperimentConfig& cfg);

// Full pipeline: manifests -> features (cached) -> protocol filter ->
// train -> dev EER threshold -> test metrics -> artifacts in cfg.out_dir
// (report.json, report.txt, model.bin, scores_*.tsv, det_dev.tsv,
// protocol.json). Degenerate protocols yield a partial report with
// warnings instead of failing.
EvaluationReport run_experiment(const ExperimentConfig& cfg);

// One report per family member present in the registry (see
// make_protocol_family). Members run over the worker pool; artifacts land
// in cfg.out_dir/<member>/, plus sweep.json and sweep_table.txt on top.
std::vector<EvaluationReport> run_protocol_sweep(const ExperimentConfig& cfg,
                                                 const std::string& family);

// Dataset/subset/label counts and category marginals (the `ingest` output).
std::string registry_summary_json(const Registry& registry);

}  // namespace padbench
