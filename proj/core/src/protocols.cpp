#include "padbench/protocols.hpp"

#include <algorithm>

namespace padbench {

std::string_view to_string(FilterField f) {
    switch (f) {
        case FilterField::dataset_id: return "dataset_id";
        case FilterField::label: return "label";
        case FilterField::pai_kind: return "pai_kind";
        case FilterField::pai_subtype: return "pai_subtype";
        case FilterField::device_kind: return "device_kind";
        case FilterField::device_quality: return "device_quality";
        case FilterField::lighting: return "lighting";
        case FilterField::face_resolution: return "face_resolution";
    }
    return "?";
}

FilterField parse_filter_field(std::string_view s) {
    if (s == "dataset_id") return FilterField::dataset_id;
    if (s == "label") return FilterField::label;
    if (s == "pai_kind") return FilterField::pai_kind;
    if (s == "pai_subtype") return FilterField::pai_subtype;
    if (s == "device_kind") return FilterField::device_kind;
    if (s == "device_quality") return FilterField::device_quality;
    if (s == "lighting") return FilterField::lighting;
    if (s == "face_resolution") return FilterField::face_resolution;
    throw Error(ErrorKind::config_error, "unknown filter field '" + std::string(s) + "'");
}

std::optional<std::string> field_value(const Sample& s, FilterField f) {
    switch (f) {
        case FilterField::dataset_id: return s.dataset_id;
        case FilterField::label: return std::string(to_string(s.label));
        case FilterField::pai_kind: return std::string(to_string(s.pai.kind));
        case FilterField::pai_subtype: return std::string(to_string(s.pai.subtype));
        case FilterField::device_kind: return std::string(to_string(s.device.kind));
        case FilterField::device_quality: return std::string(to_string(s.device.quality));
        case FilterField::lighting: return std::string(to_string(s.lighting));
        case FilterField::face_resolution:
            if (!s.face_resolution) return std::nullopt;
            return std::string(to_string(*s.face_resolution));
    }
    return std::nullopt;
}

bool FilterPredicate::matches(const Sample& s) const {
    for (const auto& clause : clauses) {
        const auto value = field_value(s, clause.field);
        const bool in_set =
            value && std::find(clause.values.begin(), clause.values.end(), *value) !=
                         clause.values.end();
        if (clause.exclude ? in_set : !in_set) return false;
    }
    return true;
}

const FilterPredicate& ProtocolSpec::predicate(Subset s) const {
    switch (s) {
        case Subset::train: return train;
        case Subset::dev: return dev;
        default: return test;
    }
}

const std::vector<Subset>& ProtocolSpec::source_subsets(Subset s) const {
    return sources[static_cast<std::size_t>(s)];
}

ProtocolSelection apply_protocol(const Registry& registry, const ProtocolSpec& spec) {
    ProtocolSelection out;
    // registry.samples is sorted by sample_id, so index order is output order.
    for (Subset subset : {Subset::train, Subset::dev, Subset::test}) {
        auto& slot = subset == Subset::train ? out.train
                     : subset == Subset::dev ? out.dev
                                             : out.test;
        const auto& sources = spec.source_subsets(subset);
        const auto& pred = spec.predicate(subset);
        for (std::size_t i = 0; i < registry.samples.size(); ++i) {
            const Sample& s = registry.samples[i];
            if (std::find(sources.begin(), sources.end(), s.subset) == sources.end()) continue;
            if (pred.matches(s)) slot.push_back(i);
        }

        std::size_t bona = 0, attacks = 0;
        for (std::size_t i : slot)
            (registry.samples[i].label == Label::bona_fide ? bona : attacks)++;
        const auto subset_name = std::string(to_string(subset));
        if (bona == 0)
            out.warnings.push_back("degenerate protocol '" + spec.name + "': " + subset_name +
                                   " has no bona fide samples");
        if (attacks == 0)
            out.warnings.push_back("degenerate protocol '" + spec.name + "': " + subset_name +
                                   " has no attack samples");
    }
    return out;
}

namespace {

FilterClause include(FilterField field, std::vector<std::string> values) {
    return FilterClause{field, false, std::move(values)};
}

FilterClause exclude(FilterField field, std::vector<std::string> values) {
    return FilterClause{field, true, std::move(values)};
}

std::string str(PaiKind k) { return std::string(to_string(k)); }
std::string str(DeviceKind k) { return std::string(to_string(k)); }

}  // namespace

ProtocolSpec make_grandtest() {
    ProtocolSpec spec;
    spec.name = "grandtest";
    return spec;
}

ProtocolSpec make_cross_dataset(const std::string& held_out) {
    ProtocolSpec spec;
    spec.name = "cross_dataset:" + held_out;
    spec.train.clauses = {exclude(FilterField::dataset_id, {held_out})};
    spec.dev.clauses = {exclude(FilterField::dataset_id, {held_out})};
    spec.test.clauses = {include(FilterField::dataset_id, {held_out})};
    spec.sources[static_cast<std::size_t>(Subset::test)] = {Subset::train, Subset::dev,
                                                            Subset::test};
    return spec;
}

ProtocolSpec make_one_pai(PaiKind kind) {
    ProtocolSpec spec;
    spec.name = "one_pai:" + str(kind);
    const FilterClause keep = include(FilterField::pai_kind, {"none", str(kind)});
    spec.train.clauses = {keep};
    spec.dev.clauses = {keep};
    spec.test.clauses = {keep};
    return spec;
}

ProtocolSpec make_unseen_attack(PaiKind kind) {
    ProtocolSpec spec;
    spec.name = "unseen_attack:" + str(kind);
    spec.train.clauses = {exclude(FilterField::pai_kind, {str(kind)})};
    spec.dev.clauses = {exclude(FilterField::pai_kind, {str(kind)})};
    spec.test.clauses = {include(FilterField::pai_kind, {"none", str(kind)})};
    return spec;
}

ProtocolSpec make_unseen_device(DeviceKind kind) {
    ProtocolSpec spec;
    spec.name = "unseen_device:" + str(kind);
    spec.train.clauses = {exclude(FilterField::device_kind, {str(kind)})};
    spec.dev.clauses = {exclude(FilterField::device_kind, {str(kind)})};
    spec.test.clauses = {include(FilterField::device_kind, {str(kind)})};
    return spec;
}

ProtocolSpec make_cross_face_resolution(CrossFaceResolutionVariant variant) {
    ProtocolSpec spec;
    const bool lf = variant == CrossFaceResolutionVariant::lf_test;
    spec.name = lf ? "cross_face_resolution:lf_test" : "cross_face_resolution:sf_test";
    const FilterClause fit = include(FilterField::face_resolution,
                                     lf ? std::vector<std::string>{"small", "medium"}
                                        : std::vector<std::string>{"large", "medium"});
    const FilterClause held = include(FilterField::face_resolution, {lf ? "large" : "small"});
    spec.train.clauses = {fit};
    spec.dev.clauses = {fit};
    spec.test.clauses = {held};
    return spec;
}

ProtocolSpec make_cross_conditions(CrossConditionsVariant variant) {
    // "none" rides along in both subtype sets so the PAI clause never
    // rejects bona fide samples.
    FilterPredicate optimal;
    optimal.clauses = {
        include(FilterField::device_quality, {"high"}),
        include(FilterField::pai_subtype, {"low", "medium", "paper", "none"}),
        include(FilterField::lighting, {"controlled", "no_info"}),
    };
    FilterPredicate adverse;
    adverse.clauses = {
        include(FilterField::device_quality, {"low"}),
        include(FilterField::pai_subtype, {"high", "silicone", "rigid", "none"}),
        include(FilterField::lighting, {"adverse"}),
    };

    ProtocolSpec spec;
    if (variant == CrossConditionsVariant::test_adverse) {
        spec.name = "cross_conditions:test_adverse";
        spec.train = optimal;
        spec.dev = optimal;
        spec.test = adverse;
    } else {
        spec.name = "cross_conditions:test_optimal";
        spec.train = adverse;
        spec.dev = adverse;
        spec.test = optimal;
    }
    return spec;
}

}  // namespace padbench
