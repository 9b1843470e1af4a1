// padbench CLI: ingest | extract | evaluate | sweep | synth | report
//
// Exit codes: 0 ok, 2 degenerate protocol (partial report), 1 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "padbench/experiment.hpp"
#include "padbench/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace padbench;

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> data_root;
    std::optional<std::string> protocol;
    std::optional<std::string> extractor;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> cache_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "experiment config file (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--data-root", flags.data_root, "override the configured data root");
    cmd->add_option("--protocol", flags.protocol, "protocol name[:param], config path or inline JSON");
    cmd->add_option("--extractor", flags.extractor, "feature extractor: color_lbp or iqm");
    cmd->add_option("--seed", flags.seed, "override the configured seed");
    cmd->add_option("--workers", flags.workers, "worker pool size");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--cache-dir", flags.cache_dir,
                    "feature cache directory (PADBENCH_CACHE_DIR overrides)");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = load_experiment_config(flags.config_path);
    if (flags.data_root) cfg.data_root = *flags.data_root;
    if (flags.protocol) cfg.protocol = *flags.protocol;
    if (flags.extractor) cfg.extractor = *flags.extractor;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.workers) cfg.workers = *flags.workers;
    if (flags.out) cfg.out_dir = *flags.out;
    if (flags.cache_dir) cfg.cache_dir = *flags.cache_dir;
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write '" + path.string() + "'");
    out << content;
}

int cmd_ingest(const CommonFlags& flags) {
    const ExperimentConfig cfg = resolve_config(flags);
    const Registry registry = load_registry(cfg);
    const std::string summary = registry_summary_json(registry);
    if (flags.out) {
        write_file(fs::path(*flags.out) / "registry_summary.json", summary);
        std::cout << "registry summary written to "
                  << (fs::path(*flags.out) / "registry_summary.json").string() << "\n";
    } else {
        std::cout << summary;
    }
    return 0;
}

int cmd_extract(const CommonFlags& flags) {
    const ExperimentConfig cfg = resolve_config(flags);
    const Registry registry = load_registry(cfg);
    const auto extractor = make_extractor(cfg.extractor, cfg.extractor_config_json);
    std::vector<std::size_t> all(registry.samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    FeatureCache cache(resolve_cache_dir(cfg));
    extract_features(registry, all, *extractor, cache, cfg);
    std::cout << "extracted " << all.size() << " video features (" << cfg.extractor
              << ", dim " << extractor->dim() << ") into " << cache.dir().string() << "\n";
    return 0;
}

int cmd_evaluate(const CommonFlags& flags) {
    const ExperimentConfig cfg = resolve_config(flags);
    const EvaluationReport report = run_experiment(cfg);
    std::cout << render_report_table({report});
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "report written to " << (fs::path(cfg.out_dir) / "report.json").string() << "\n";
    return report.degenerate ? 2 : 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& family) {
    const ExperimentConfig cfg = resolve_config(flags);
    const auto reports = run_protocol_sweep(cfg, family);
    std::cout << render_report_table(reports);
    bool degenerate = false;
    for (const auto& r : reports) {
        degenerate = degenerate || r.degenerate;
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    }
    std::cout << "sweep written to " << (fs::path(cfg.out_dir) / "sweep.json").string() << "\n";
    return degenerate ? 2 : 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir, std::uint64_t seed,
              std::optional<int> bona_count, std::optional<int> attack_count,
              std::optional<int> frames, std::optional<int> subjects, int workers) {
    SyntheticSpec spec;
    if (!spec_path.empty()) spec = load_synthetic_spec(spec_path);
    spec.seed = seed;
    if (bona_count || attack_count)
        spec.cells = full_grid(bona_count.value_or(3), attack_count.value_or(1));
    if (frames) spec.frames_per_video = *frames;
    if (subjects) spec.subjects_per_dataset = *subjects;

    const auto manifests = generate_synthetic(spec, out_dir, workers);

    // Starter experiment config pointing at the generated data.
    ExperimentConfig cfg;
    cfg.data_root = out_dir;
    for (const auto& m : manifests)
        cfg.manifests.push_back(fs::relative(m, out_dir).string());
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.out_dir = (fs::path(out_dir) / "out").string();
    cfg.cache_dir = (fs::path(out_dir) / "cache").string();
    write_file(fs::path(out_dir) / "experiment.json", experiment_config_to_json(cfg));

    std::cout << "generated " << manifests.size() << " dataset(s) under " << out_dir << "\n";
    for (const auto& m : manifests) std::cout << "  " << m << "\n";
    std::cout << "starter config: " << (fs::path(out_dir) / "experiment.json").string() << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs) {
    std::vector<EvaluationReport> reports;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto doc = nlohmann::json::parse(text);
        if (doc.is_array()) {
            for (const auto& r : doc) reports.push_back(report_from_json(r.dump()));
        } else {
            reports.push_back(report_from_json(text));
        }
    }
    std::cout << render_report_table(reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"face-PAD generalization benchmark engine"};
    app.require_subcommand(1);

    CommonFlags ingest_flags, extract_flags, evaluate_flags, sweep_flags;
    std::string family;
    std::string spec_path, synth_out;
    std::uint64_t synth_seed = 0;
    std::optional<int> bona_count, attack_count, frames, subjects;
    int synth_workers = 2;
    std::vector<std::string> report_inputs;

    auto* ingest = app.add_subcommand("ingest", "load manifests and summarize the registry");
    add_common(ingest, ingest_flags, true);

    auto* extract = app.add_subcommand("extract", "extract video features into the cache");
    add_common(extract, extract_flags, true);

    auto* evaluate = app.add_subcommand("evaluate", "run one protocol end to end");
    add_common(evaluate, evaluate_flags, true);

    auto* sweep = app.add_subcommand("sweep", "run every member of a protocol family");
    add_common(sweep, sweep_flags, true);
    sweep->add_option("--family", family,
                      "grandtest | cross_dataset | one_pai | unseen_attack | unseen_device | "
                      "cross_face_resolution | cross_conditions")
        ->required();

    auto* synth = app.add_subcommand("synth", "generate a synthetic registry");
    synth->add_option("--spec", spec_path, "synthetic spec file (JSON)");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_seed, "generation seed");
    synth->add_option("--bona-count", bona_count, "full grid: bona fide videos per cell");
    synth->add_option("--attack-count", attack_count, "full grid: attack videos per cell");
    synth->add_option("--frames", frames, "frames per video");
    synth->add_option("--subjects", subjects, "subjects per dataset");
    synth->add_option("--workers", synth_workers, "worker pool size");

    auto* report = app.add_subcommand("report", "render report/sweep JSON as a table");
    report->add_option("--in", report_inputs, "report.json or sweep.json paths")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_flags);
        if (extract->parsed()) return cmd_extract(extract_flags);
        if (evaluate->parsed()) return cmd_evaluate(evaluate_flags);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, family);
        if (synth->parsed())
            return cmd_synth(spec_path, synth_out, synth_seed, bona_count, attack_count, frames,
                             subjects, synth_workers);
        if (report->parsed()) return cmd_report(report_inputs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
