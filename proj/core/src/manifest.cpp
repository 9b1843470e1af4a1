#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "padbench/registry.hpp"
#include "padbench/rng.hpp"

namespace padbench {

namespace {

using nlohmann::json;

[[noreturn]] void record_error(const std::string& path, std::size_t index,
                               const std::string& sample_id, const std::string& message) {
    std::string where = path + ": record " + std::to_string(index);
    if (!sample_id.empty()) where += " (sample_id '" + sample_id + "')";
    throw Error(ErrorKind::parse_error, where + ": " + message);
}

const json& require_field(const json& rec, const char* key, const std::string& path,
                          std::size_t index, const std::string& sid) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null())
        record_error(path, index, sid, std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& rec, const char* key, const std::string& path,
                           std::size_t index, const std::string& sid) {
    const json& v = require_field(rec, key, path, index, sid);
    if (!v.is_string())
        record_error(path, index, sid, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Sample parse_record(const json& rec, const std::string& dataset_id, const std::string& path,
                    std::size_t index) {
    if (!rec.is_object()) record_error(path, index, "", "record must be an object");
    Sample s;
    s.dataset_id = dataset_id;
    s.sample_id = require_string(rec, "sample_id", path, index, "");
    const std::string& sid = s.sample_id;
    s.subject_id = require_string(rec, "subject_id", path, index, sid);

    try {
        s.label = parse_label(require_string(rec, "label", path, index, sid));
        s.pai.kind = parse_pai_kind(require_string(rec, "pai_kind", path, index, sid));

        if (rec.contains("pai_subtype") && !rec["pai_subtype"].is_null()) {
            s.pai.subtype = parse_pai_subtype(rec["pai_subtype"].get<std::string>());
        } else if (s.pai.kind == PaiKind::print && rec.contains("print_dpi")) {
            s.pai.subtype = categorize_print(rec["print_dpi"].get<long>());
        } else if (s.pai.kind == PaiKind::replay && rec.contains("screen_resolution")) {
            s.pai.subtype = categorize_replay(rec["screen_resolution"].get<long>());
        } else {
            s.pai.subtype = PaiSubtype::none;
        }

        s.device.kind = parse_device_kind(require_string(rec, "device_kind", path, index, sid));
        s.device.quality =
            parse_device_quality(require_string(rec, "device_quality", path, index, sid));
        s.lighting = parse_lighting(require_string(rec, "lighting", path, index, sid));
    } catch (const Error& e) {
        record_error(path, index, sid, e.what());
    }

    if ((s.label == Label::bona_fide) != (s.pai.kind == PaiKind::none))
        record_error(path, index, sid,
                     "label '" + std::string(to_string(s.label)) + "' inconsistent with pai '" +
                         to_string(s.pai) + "'");
    if (!subtype_valid_for(s.pai.kind, s.pai.subtype))
        record_error(path, index, sid,
                     "pai_subtype '" + std::string(to_string(s.pai.subtype)) +
                         "' not valid for pai_kind '" + std::string(to_string(s.pai.kind)) + "'");

    const json& frames = require_field(rec, "frames", path, index, sid);
    if (!frames.is_array())
        record_error(path, index, sid, "field 'frames' must be an array");
    for (const auto& f : frames) {
        if (!f.is_string()) record_error(path, index, sid, "frame entries must be strings");
        s.frames.push_back(f.get<std::string>());
    }

    const json& eyes = require_field(rec, "eyes", path, index, sid);
    if (!eyes.is_array() || eyes.size() != s.frames.size())
        record_error(path, index, sid, "field 'eyes' must be an array aligned with 'frames'");
    for (const auto& e : eyes) {
        if (e.is_null()) {
            s.eyes.push_back(std::nullopt);
            continue;
        }
        if (!e.is_array() || e.size() != 4)
            record_error(path, index, sid, "eye entries must be null or [lx, ly, rx, ry]");
        EyePair p;
        p.lx = e[0].get<double>();
        p.ly = e[1].get<double>();
        p.rx = e[2].get<double>();
        p.ry = e[3].get<double>();
        s.eyes.push_back(p);
    }

    if (std::any_of(s.eyes.begin(), s.eyes.end(), [](const auto& e) { return e.has_value(); })) {
        try {
            s.iod = mean_iod(s.eyes);
            s.face_resolution = categorize_face_resolution(*s.iod);
        } catch (const Error& e) {
            record_error(path, index, sid, e.what());
        }
    }
    return s;
}

// Subset assignment per split policy; `assigned` holds the manifest-supplied
// subsets (by record position) when present.
void apply_split_policy(std::vector<Sample>& samples,
                        const std::vector<std::optional<Subset>>& assigned,
                        const std::string& policy, std::uint64_t seed, const std::string& path) {
    if (policy == "as_is") {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!assigned[i])
                record_error(path, i, samples[i].sample_id,
                             "split_policy 'as_is' requires a subset on every record");
            samples[i].subset = *assigned[i];
        }
        return;
    }
    if (policy == "resplit_train_dev") {
        // Re-split the original training identities 80/20 into train/dev,
        // keeping the original test subset untouched.
        std::vector<std::string> train_subjects;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!assigned[i])
                record_error(path, i, samples[i].sample_id,
                             "split_policy 'resplit_train_dev' requires a subset on every record");
            if (*assigned[i] != Subset::test) train_subjects.push_back(samples[i].subject_id);
        }
        auto split = split_train_dev(train_subjects, seed);
        std::set<std::string> dev_set(split.dev.begin(), split.dev.end());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (*assigned[i] == Subset::test)
                samples[i].subset = Subset::test;
            else
                samples[i].subset =
                    dev_set.count(samples[i].subject_id) ? Subset::dev : Subset::train;
        }
        return;
    }
    if (policy == "three_way") {
        std::vector<std::string> subjects;
        for (const auto& s : samples) subjects.push_back(s.subject_id);
        auto split = split_three_way(subjects, seed);
        std::map<std::string, Subset> by_subject;
        for (const auto& id : split.train) by_subject[id] = Subset::train;
        for (const auto& id : split.dev) by_subject[id] = Subset::dev;
        for (const auto& id : split.test) by_subject[id] = Subset::test;
        for (auto& s : samples) s.subset = by_subject.at(s.subject_id);
        return;
    }
    throw Error(ErrorKind::parse_error, path + ": unknown split_policy '" + policy + "'");
}

}  // namespace

Registry load_manifest(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open manifest '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, path + ": " + e.what());
    }

    DatasetInfo info;
    const json* records = nullptr;
    if (doc.is_array()) {
        info.id = std::filesystem::path(path).stem().string();
        records = &doc;
    } else if (doc.is_object()) {
        if (!doc.contains("dataset_id") || !doc["dataset_id"].is_string())
            throw Error(ErrorKind::parse_error, path + ": missing string field 'dataset_id'");
        info.id = doc["dataset_id"].get<std::string>();
        if (doc.contains("name") && doc["name"].is_string())
            info.name = doc["name"].get<std::string>();
        if (doc.contains("year") && doc["year"].is_number_integer())
            info.year = doc["year"].get<int>();
        if (doc.contains("split_policy") && doc["split_policy"].is_string())
            info.split_policy = doc["split_policy"].get<std::string>();
        if (!doc.contains("samples") || !doc["samples"].is_array())
            throw Error(ErrorKind::parse_error, path + ": missing array field 'samples'");
        records = &doc["samples"];
    } else {
        throw Error(ErrorKind::parse_error, path + ": manifest must be an object or an array");
    }
    if (info.name.empty()) info.name = info.id;

    Registry frag;
    std::vector<std::optional<Subset>> assigned;
    std::size_t index = 0;
    for (const auto& rec : *records) {
        Sample s = parse_record(rec, info.id, path, index);
        if (rec.contains("subset") && !rec["subset"].is_null()) {
            try {
                assigned.push_back(parse_subset(rec["subset"].get<std::string>()));
            } catch (const Error& e) {
                record_error(path, index, s.sample_id, e.what());
            }
        } else {
            assigned.push_back(std::nullopt);
        }
        frag.samples.push_back(std::move(s));
        ++index;
    }

    if (info.split_policy.empty()) {
        const bool all = std::all_of(assigned.begin(), assigned.end(),
                                     [](const auto& a) { return a.has_value(); });
        const bool none = std::none_of(assigned.begin(), assigned.end(),
                                       [](const auto& a) { return a.has_value(); });
        if (all)
            info.split_policy = "as_is";
        else if (none)
            info.split_policy = "three_way";
        else
            throw Error(ErrorKind::parse_error,
                        path + ": records mix present/absent subsets; declare a split_policy");
    }

    const std::uint64_t dataset_seed = mix_seed(opts.seed, fnv1a64(info.id));
    apply_split_policy(frag.samples, assigned, info.split_policy, dataset_seed, path);

    frag.datasets.emplace(info.id, info);
    std::vector<Registry> one;
    one.push_back(std::move(frag));
    return merge_registries(std::move(one));  // runs the registry invariants
}

}  // namespace padbench
