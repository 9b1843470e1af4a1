#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "padbench/registry.hpp"

namespace padbench {

enum class FilterField {
    dataset_id,
    label,
    pai_kind,
    pai_subtype,
    device_kind,
    device_quality,
    lighting,
    face_resolution,
};

std::string_view to_string(FilterField f);
FilterField parse_filter_field(std::string_view s);

// The category value of one sample under one field, as its canonical
// snake_case string. Bona fide samples report "none" for pai_kind and
// pai_subtype; face_resolution is absent when no landmarks exist.
std::optional<std::string> field_value(const Sample& s, FilterField f);

// One conjunct: an include-set (value must be in `values`) or an
// exclude-set (value must not be). A missing value fails include clauses
// and passes exclude clauses.
struct FilterClause {
    FilterField field = FilterField::dataset_id;
    bool exclude = false;
    std::vector<std::string> values;
};

struct FilterPredicate {
    std::vector<FilterClause> clauses;  // empty = accept-all

    bool matches(const Sample& s) const;
};

// Declarative per-subset filters. `sources[s]` lists which original subset
// labels feed output subset s; the default is the identity mapping. The
// cross-dataset protocol re-labels every subset of the held-out dataset as
// test by widening the test sources.
struct ProtocolSpec {
    std::string name;
    FilterPredicate train, dev, test;
    std::array<std::vector<Subset>, 3> sources = {
        std::vector<Subset>{Subset::train},
        std::vector<Subset>{Subset::dev},
        std::vector<Subset>{Subset::test},
    };

    const FilterPredicate& predicate(Subset s) const;
    const std::vector<Subset>& source_subsets(Subset s) const;
};

// Indices into registry.samples, sorted by sample_id within each subset.
struct ProtocolSelection {
    std::vector<std::size_t> train, dev, test;
    std::vector<std::string> warnings;  // degeneracy notes, empty when clean

    bool degenerate() const { return !warnings.empty(); }
};

// Filters the registry into per-subset sample lists. Output subset s holds
// exactly the samples whose subset label is in sources[s] and that satisfy
// the predicate for s. Deterministic and independent of registry iteration
// order. Subsets missing a class needed downstream get a warning rather
// than a hard failure so leave-one-out sweeps always complete.
ProtocolSelection apply_protocol(const Registry& registry, const ProtocolSpec& spec);

// --- built-in protocols ------------------------------------------------------

// Everything passes, all subsets unfiltered.
ProtocolSpec make_grandtest();

// Hold one dataset out: train/dev on all others, test on every subset of
// the held-out dataset.
ProtocolSpec make_cross_dataset(const std::string& held_out);

// Bona fide plus attacks of exactly one kind, in all subsets.
ProtocolSpec make_one_pai(PaiKind kind);

// The PAI kind is excluded from train/dev and is the only attack in test.
ProtocolSpec make_unseen_attack(PaiKind kind);

// Same shape over capture-device kind: the device is excluded from
// train/dev and test contains only samples captured with it.
ProtocolSpec make_unseen_device(DeviceKind kind);

enum class CrossFaceResolutionVariant { lf_test, sf_test };

// lf_test: train/dev on small+medium faces, test on large. sf_test: the
// opposite extreme (train/dev large+medium, test small). Dev follows the
// train filter so tuning never sees the test resolution.
ProtocolSpec make_cross_face_resolution(CrossFaceResolutionVariant variant);

enum class CrossConditionsVariant { test_adverse, test_optimal };

// Optimal conditions: high-quality devices, low/medium print+replay and
// paper masks, controlled or no-info lighting. Adverse conditions:
// low-quality devices, high-quality print+replay and silicone/rigid masks,
// adverse lighting. The PAI clause constrains attacks only ("none" is in
// both subtype sets), so bona fide samples are filtered by device and
// lighting alone.
ProtocolSpec make_cross_conditions(CrossConditionsVariant variant);

}  // namespace padbench
