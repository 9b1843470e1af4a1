#include "padbench/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "padbench/metrics.hpp"
#include "padbench/protocol_config.hpp"
#include "padbench/rng.hpp"
#include "parallel.hpp"

namespace padbench {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json config_to_canonical_json(const ExperimentConfig& cfg) {
    json doc;
    doc["data_root"] = cfg.data_root;
    doc["manifests"] = cfg.manifests;
    doc["extractor"] = cfg.extractor;
    doc["extractor_config"] = cfg.extractor_config_json.empty()
                                  ? json::object()
                                  : json::parse(cfg.extractor_config_json);
    doc["protocol"] = cfg.protocol;
    json clf;
    clf["C"] = cfg.svm_c;
    clf["gamma"] = cfg.svm_gamma ? json(*cfg.svm_gamma) : json(nullptr);
    clf["tol"] = cfg.svm_tol;
    doc["classifier"] = clf;
    doc["seed"] = cfg.seed;
    doc["frame_stride"] = cfg.frame_stride;
    doc["workers"] = cfg.workers;
    doc["out_dir"] = cfg.out_dir;
    doc["cache_dir"] = cfg.cache_dir;
    return doc;
}

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                              c == '.'
                          ? c
                          : '_');
    return out;
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io_error, "short write on '" + path.string() + "'");
}

std::string format_score(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scores_tsv(const ScoreSet& scores) {
    std::string out = "sample_id\tscore\tlabel\tpai_kind\n";
    for (const auto& e : scores) {
        out += e.sample_id;
        out += '\t';
        out += format_score(e.score);
        out += '\t';
        out += to_string(e.label);
        out += '\t';
        out += to_string(e.pai_kind);
        out += '\n';
    }
    return out;
}

std::string det_tsv(const std::vector<DetPoint>& points) {
    std::string out = "threshold\tfar\tfrr\n";
    for (const auto& p : points) {
        out += format_score(p.threshold);
        out += '\t';
        out += format_score(p.far);
        out += '\t';
        out += format_score(p.frr);
        out += '\n';
    }
    return out;
}

// The cache key hash covers the frame stride on top of the extractor
// config: both change the per-video vector.
std::uint64_t effective_config_hash(const FeatureExtractor& extractor, int frame_stride) {
    return fnv1a64("frame_stride=" + std::to_string(frame_stride), extractor.config_hash());
}

SubsetCounts count_selection(const Registry& registry, const std::vector<std::size_t>& indices) {
    SubsetCounts c;
    for (std::size_t i : indices)
        (registry.samples[i].label == Label::bona_fide ? c.bona_fide : c.attacks)++;
    return c;
}

ScoreSet score_selection(const Registry& registry, const std::vector<std::size_t>& indices,
                         const FeatureTable& features, const TrainedModel& model) {
    ScoreSet scores;
    scores.reserve(indices.size());
    for (std::size_t i : indices) {
        const Sample& s = registry.samples[i];
        scores.push_back(
            ScoreEntry{s.sample_id, model.score(features[i].values), s.label, s.pai.kind});
    }
    return scores;
}

// Shared by run_experiment and sweep members: protocol filtering through
// artifact writing, with features already extracted.
EvaluationReport run_on(const Registry& registry, const ExperimentConfig& cfg,
                        const ProtocolSpec& spec, const FeatureTable& features,
                        const fs::path& out_dir) {
    const ProtocolSelection selection = apply_protocol(registry, spec);

    EvaluationReport report;
    report.protocol = spec.name;
    report.extractor_id = cfg.extractor;
    report.config_hash = experiment_config_hash(cfg);
    report.warnings = selection.warnings;
    report.degenerate = selection.degenerate();
    report.train_counts = count_selection(registry, selection.train);
    report.dev_counts = count_selection(registry, selection.dev);
    report.test_counts = count_selection(registry, selection.test);
    report.test.counts = report.test_counts;

    fs::create_directories(out_dir);
    write_text(out_dir / "protocol.json", protocol_to_json(spec));

    const bool can_train = report.train_counts.bona_fide > 0 && report.train_counts.attacks > 0;
    const bool can_eer = report.dev_counts.bona_fide > 0 && report.dev_counts.attacks > 0;
    if (can_train) {
        std::vector<std::vector<float>> x;
        std::vector<Label> y;
        x.reserve(selection.train.size());
        for (std::size_t i : selection.train) {
            x.push_back(features[i].values);
            y.push_back(registry.samples[i].label);
        }
        SvmConfig svm;
        svm.C = cfg.svm_c;
        svm.gamma = cfg.svm_gamma;
        svm.tol = cfg.svm_tol;
        const TrainedModel model = train_svm(x, y, svm);
        save_model(model, (out_dir / "model.bin").string());

        const ScoreSet dev_scores = score_selection(registry, selection.dev, features, model);
        const ScoreSet test_scores = score_selection(registry, selection.test, features, model);
        write_text(out_dir / "scores_dev.tsv", scores_tsv(dev_scores));
        write_text(out_dir / "scores_test.tsv", scores_tsv(test_scores));

        if (can_eer) {
            const EerResult eer = eer_threshold(dev_scores);
            report.threshold = eer.threshold;
            report.dev_eer = eer.eer;
            write_text(out_dir / "det_dev.tsv", det_tsv(det_points(dev_scores)));
            if (report.test_counts.bona_fide > 0)
                report.test = test_metrics(test_scores, eer.threshold);
            report.test.counts = report.test_counts;
        }
    }

    write_text(out_dir / "report.json", report_to_json(report));
    write_text(out_dir / "report.txt", render_report_table({report}));
    return report;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("experiment config: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.data_root = doc.value("data_root", cfg.data_root);
    if (doc.contains("manifests"))
        cfg.manifests = doc["manifests"].get<std::vector<std::string>>();
    cfg.extractor = doc.value("extractor", cfg.extractor);
    if (doc.contains("extractor_config") && !doc["extractor_config"].is_null() &&
        !doc["extractor_config"].empty())
        cfg.extractor_config_json = doc["extractor_config"].dump();
    if (doc.contains("protocol")) {
        if (doc["protocol"].is_object())
            cfg.protocol = doc["protocol"].dump();
        else
            cfg.protocol = doc["protocol"].get<std::string>();
    }
    if (doc.contains("classifier")) {
        const json& clf = doc["classifier"];
        cfg.svm_c = clf.value("C", cfg.svm_c);
        if (clf.contains("gamma") && !clf["gamma"].is_null())
            cfg.svm_gamma = clf["gamma"].get<double>();
        cfg.svm_tol = clf.value("tol", cfg.svm_tol);
    }
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.frame_stride = doc.value("frame_stride", cfg.frame_stride);
    cfg.workers = doc.value("workers", cfg.workers);
    cfg.out_dir = doc.value("out_dir", cfg.out_dir);
    cfg.cache_dir = doc.value("cache_dir", cfg.cache_dir);
    if (cfg.frame_stride < 1)
        throw Error(ErrorKind::config_error, "frame_stride must be >= 1");
    if (cfg.workers < 1) throw Error(ErrorKind::config_error, "workers must be >= 1");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open config '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return experiment_config_from_json(text);
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    return config_to_canonical_json(cfg).dump(2) + "\n";
}

std::uint64_t experiment_config_hash(const ExperimentConfig& cfg) {
    return fnv1a64(config_to_canonical_json(cfg).dump());
}

std::string resolve_cache_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("PADBENCH_CACHE_DIR"); env && *env) return env;
    return cfg.cache_dir.empty() ? "cache" : cfg.cache_dir;
}

Registry load_registry(const ExperimentConfig& cfg) {
    if (cfg.manifests.empty())
        throw Error(ErrorKind::config_error, "no manifests configured");
    std::vector<std::string> paths;
    for (const auto& m : cfg.manifests) {
        fs::path p(m);
        if (p.is_relative()) p = fs::path(cfg.data_root) / p;
        paths.push_back(p.string());
    }
    LoadOptions opts;
    opts.seed = cfg.seed;
    return load_manifests(paths, opts);
}

ProtocolSpec resolve_protocol(const std::string& protocol) {
    if (protocol.empty()) throw Error(ErrorKind::config_error, "empty protocol");
    if (protocol.front() == '{') return parse_protocol_config(protocol);
    if (protocol.size() > 5 && protocol.substr(protocol.size() - 5) == ".json")
        return load_protocol_config(protocol);
    return protocol_from_name(protocol);
}

FeatureTable extract_features(const Registry& registry, const std::vector<std::size_t>& wanted,
                              const FeatureExtractor& extractor, FeatureCache& cache,
                              const ExperimentConfig& cfg) {
    FeatureTable table(registry.samples.size());
    const std::uint64_t key_hash = effective_config_hash(extractor, cfg.frame_stride);

    detail::parallel_for(wanted.size(), cfg.workers, [&](std::size_t wi) {
        const std::size_t index = wanted[wi];
        const Sample& sample = registry.samples[index];
        const CacheKey key{sample.dataset_id, sample.sample_id, extractor.id(), key_hash};
        if (auto hit = cache.get(key)) {
            table[index] = std::move(*hit);
            return;
        }

        std::vector<FeatureVector> per_frame;
        for (std::size_t f = 0; f < sample.frames.size();
             f += static_cast<std::size_t>(cfg.frame_stride)) {
            if (!sample.eyes[f]) continue;  // no landmarks, no crop box
            fs::path frame_path(sample.frames[f]);
            if (frame_path.is_relative()) frame_path = fs::path(cfg.data_root) / frame_path;
            const Image frame = read_ppm(frame_path.string());
            const FaceCrop crop = crop_face(frame, face_box_from_eyes(*sample.eyes[f]));
            per_frame.push_back(extractor.extract(crop));
        }
        if (per_frame.empty())
            throw Error(ErrorKind::extraction_error,
                        "sample '" + sample.sample_id + "' has no annotated frames at stride " +
                            std::to_string(cfg.frame_stride));
        table[index] = video_feature(per_frame);
        cache.put(key, table[index]);
    });
    return table;
}

EvaluationReport run_experiment(const ExperimentConfig& cfg) {
    const Registry registry = load_registry(cfg);
    const auto extractor = make_extractor(cfg.extractor, cfg.extractor_config_json);
    const ProtocolSpec spec = resolve_protocol(cfg.protocol);
    validate_protocol_spec(spec, registry);

    const ProtocolSelection selection = apply_protocol(registry, spec);
    std::set<std::size_t> needed_set;
    needed_set.insert(selection.train.begin(), selection.train.end());
    needed_set.insert(selection.dev.begin(), selection.dev.end());
    needed_set.insert(selection.test.begin(), selection.test.end());
    const std::vector<std::size_t> needed(needed_set.begin(), needed_set.end());

    FeatureCache cache(resolve_cache_dir(cfg));
    const FeatureTable features = extract_features(registry, needed, *extractor, cache, cfg);
    return run_on(registry, cfg, spec, features, cfg.out_dir);
}

std::vector<EvaluationReport> run_protocol_sweep(const ExperimentConfig& cfg,
                                                 const std::string& family) {
    const Registry registry = load_registry(cfg);
    const auto extractor = make_extractor(cfg.extractor, cfg.extractor_config_json);
    const std::vector<ProtocolSpec> members = make_protocol_family(registry, family);
    if (members.empty())
        throw Error(ErrorKind::config_error,
                    "protocol family '" + family + "' has no members in this registry");

    std::vector<std::size_t> all(registry.samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    FeatureCache cache(resolve_cache_dir(cfg));
    const FeatureTable features = extract_features(registry, all, *extractor, cache, cfg);

    std::vector<EvaluationReport> reports(members.size());
    detail::parallel_for(members.size(), cfg.workers, [&](std::size_t m) {
        const fs::path member_dir = fs::path(cfg.out_dir) / safe_name(members[m].name);
        reports[m] = run_on(registry, cfg, members[m], features, member_dir);
    });

    json sweep = json::array();
    for (const auto& r : reports) sweep.push_back(json::parse(report_to_json(r)));
    write_text(fs::path(cfg.out_dir) / "sweep.json", sweep.dump(2) + "\n");
    write_text(fs::path(cfg.out_dir) / "sweep_table.txt", render_report_table(reports));
    return reports;
}

std::string registry_summary_json(const Registry& registry) {
    json datasets = json::object();
    for (const auto& [id, info] : registry.datasets) {
        std::set<std::string> subjects;
        std::size_t count = 0;
        for (const auto& s : registry.samples)
            if (s.dataset_id == id) {
                subjects.insert(s.subject_id);
                ++count;
            }
        json d;
        d["name"] = info.name;
        if (info.year > 0) d["year"] = info.year;
        d["split_policy"] = info.split_policy;
        d["samples"] = count;
        d["subjects"] = subjects.size();
        datasets[id] = d;
    }

    json subsets = json::object();
    for (Subset subset : {Subset::train, Subset::dev, Subset::test}) {
        std::size_t bona = 0, attacks = 0;
        for (const auto& s : registry.samples)
            if (s.subset == subset) (s.label == Label::bona_fide ? bona : attacks)++;
        subsets[std::string(to_string(subset))] = {{"bona_fide", bona}, {"attacks", attacks}};
    }

    json pai = json::object(), device = json::object(), lighting = json::object(),
         face = json::object();
    auto bump = [](json& j, const std::string& key) {
        j[key] = (j.contains(key) ? j[key].get<std::size_t>() : 0) + 1;
    };
    std::size_t bona = 0;
    for (const auto& s : registry.samples) {
        if (s.label == Label::bona_fide) ++bona;
        bump(pai, to_string(s.pai));
        bump(device, to_string(s.device));
        bump(lighting, std::string(to_string(s.lighting)));
        bump(face, s.face_resolution ? std::string(to_string(*s.face_resolution)) : "missing");
    }

    json doc;
    doc["datasets"] = datasets;
    doc["totals"] = {{"samples", registry.samples.size()},
                     {"bona_fide", bona},
                     {"attacks", registry.samples.size() - bona}};
    doc["subsets"] = subsets;
    doc["categories"] = {{"pai", pai},
                         {"device", device},
                         {"lighting", lighting},
                         {"face_resolution", face}};
    return doc.dump(2) + "\n";
}

}  // namespace padbench
