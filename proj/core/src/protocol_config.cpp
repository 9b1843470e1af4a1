#include "padbench/protocol_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

namespace padbench {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorKind::config_error, message);
}

FilterPredicate parse_predicate(const json& j) {
    if (!j.is_object()) config_error("predicate must be an object");
    FilterPredicate pred;
    for (const char* mode : {"include", "exclude"}) {
        if (!j.contains(mode)) continue;
        const json& block = j[mode];
        if (!block.is_object()) config_error(std::string(mode) + " block must be an object");
        for (auto it = block.begin(); it != block.end(); ++it) {
            FilterClause clause;
            clause.field = parse_filter_field(it.key());
            clause.exclude = std::string_view(mode) == "exclude";
            if (!it.value().is_array()) config_error("clause values must be an array");
            for (const auto& v : it.value()) clause.values.push_back(v.get<std::string>());
            pred.clauses.push_back(std::move(clause));
        }
    }
    return pred;
}

json predicate_to_json(const FilterPredicate& pred) {
    json inc = json::object(), exc = json::object();
    for (const auto& c : pred.clauses)
        (c.exclude ? exc : inc)[std::string(to_string(c.field))] = c.values;
    json out = json::object();
    if (!inc.empty()) out["include"] = inc;
    if (!exc.empty()) out["exclude"] = exc;
    return out;
}

Subset subset_from_json(const json& v) { return parse_subset(v.get<std::string>()); }

}  // namespace

ProtocolSpec protocol_from_name(const std::string& name) {
    std::string base = name, param;
    if (auto pos = name.find(':'); pos != std::string::npos) {
        base = name.substr(0, pos);
        param = name.substr(pos + 1);
    }
    auto need_param = [&]() -> const std::string& {
        if (param.empty()) config_error("protocol '" + base + "' requires a parameter");
        return param;
    };
    if (base == "grandtest") return make_grandtest();
    if (base == "cross_dataset") return make_cross_dataset(need_param());
    if (base == "one_pai") return make_one_pai(parse_pai_kind(need_param()));
    if (base == "unseen_attack") return make_unseen_attack(parse_pai_kind(need_param()));
    if (base == "unseen_device") return make_unseen_device(parse_device_kind(need_param()));
    if (base == "cross_face_resolution") {
        const std::string& v = need_param();
        if (v == "lf_test") return make_cross_face_resolution(CrossFaceResolutionVariant::lf_test);
        if (v == "sf_test") return make_cross_face_resolution(CrossFaceResolutionVariant::sf_test);
        config_error("cross_face_resolution variant must be lf_test or sf_test, got '" + v + "'");
    }
    if (base == "cross_conditions") {
        const std::string& v = need_param();
        if (v == "test_adverse") return make_cross_conditions(CrossConditionsVariant::test_adverse);
        if (v == "test_optimal") return make_cross_conditions(CrossConditionsVariant::test_optimal);
        config_error("cross_conditions variant must be test_adverse or test_optimal, got '" + v +
                     "'");
    }
    config_error("unknown protocol '" + name + "'");
}

ProtocolSpec parse_protocol_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("protocol config: ") + e.what());
    }
    if (!doc.is_object()) config_error("protocol config must be an object");

    if (doc.contains("builtin")) {
        std::string name = doc["builtin"].get<std::string>();
        if (doc.contains("param")) name += ":" + doc["param"].get<std::string>();
        ProtocolSpec spec = protocol_from_name(name);
        if (doc.contains("name")) spec.name = doc["name"].get<std::string>();
        return spec;
    }

    ProtocolSpec spec;
    if (!doc.contains("name")) config_error("custom protocol needs a 'name'");
    spec.name = doc["name"].get<std::string>();
    for (Subset s : {Subset::train, Subset::dev, Subset::test}) {
        const auto key = std::string(to_string(s));
        if (!doc.contains(key)) config_error("custom protocol missing '" + key + "' predicate");
        auto pred = parse_predicate(doc[key]);
        (s == Subset::train ? spec.train : s == Subset::dev ? spec.dev : spec.test) =
            std::move(pred);
        const auto sources_key = key + "_sources";
        if (doc.contains(sources_key)) {
            std::vector<Subset> sources;
            for (const auto& v : doc[sources_key]) sources.push_back(subset_from_json(v));
            spec.sources[static_cast<std::size_t>(s)] = std::move(sources);
        }
    }
    return spec;
}

ProtocolSpec load_protocol_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open protocol config '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_protocol_config(text);
}

std::string protocol_to_json(const ProtocolSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    for (Subset s : {Subset::train, Subset::dev, Subset::test}) {
        const auto key = std::string(to_string(s));
        doc[key] = predicate_to_json(spec.predicate(s));
        json sources = json::array();
        for (Subset src : spec.source_subsets(s)) sources.push_back(std::string(to_string(src)));
        doc[key + "_sources"] = sources;
    }
    return doc.dump(2);
}

void validate_protocol_spec(const ProtocolSpec& spec, const Registry& registry) {
    for (Subset s : {Subset::train, Subset::dev, Subset::test}) {
        for (const auto& clause : spec.predicate(s).clauses) {
            if (clause.field != FilterField::dataset_id) continue;
            for (const auto& id : clause.values)
                if (!registry.datasets.count(id))
                    config_error("protocol '" + spec.name + "' references unknown dataset '" + id +
                                 "'");
        }
    }
}

std::vector<ProtocolSpec> make_protocol_family(const Registry& registry,
                                               const std::string& family) {
    std::vector<ProtocolSpec> specs;
    if (family == "grandtest") {
        specs.push_back(make_grandtest());
        return specs;
    }
    if (family == "cross_dataset") {
        for (const auto& [id, info] : registry.datasets) specs.push_back(make_cross_dataset(id));
        return specs;
    }
    if (family == "one_pai" || family == "unseen_attack") {
        std::set<PaiKind> kinds;
        for (const auto& s : registry.samples)
            if (s.label == Label::attack) kinds.insert(s.pai.kind);
        for (PaiKind k : kinds)
            specs.push_back(family == "one_pai" ? make_one_pai(k) : make_unseen_attack(k));
        return specs;
    }
    if (family == "unseen_device") {
        std::set<DeviceKind> kinds;
        for (const auto& s : registry.samples) kinds.insert(s.device.kind);
        for (DeviceKind k : kinds) specs.push_back(make_unseen_device(k));
        return specs;
    }
    if (family == "cross_face_resolution") {
        specs.push_back(make_cross_face_resolution(CrossFaceResolutionVariant::lf_test));
        specs.push_back(make_cross_face_resolution(CrossFaceResolutionVariant::sf_test));
        return specs;
    }
    if (family == "cross_conditions") {
        specs.push_back(make_cross_conditions(CrossConditionsVariant::test_adverse));
        specs.push_back(make_cross_conditions(CrossConditionsVariant::test_optimal));
        return specs;
    }
    config_error("unknown protocol family '" + family + "'");
}

}  // namespace padbench
