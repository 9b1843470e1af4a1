#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padbench/taxonomy.hpp"

namespace padbench {

// Pixel coordinates of the eye centers in one frame.
struct EyePair {
    double lx = 0, ly = 0, rx = 0, ry = 0;
};

// One video access with its full categorization.
struct Sample {
    std::string sample_id;
    std::string dataset_id;
    std::string subject_id;
    Label label = Label::bona_fide;
    PaiCategory pai;
    CaptureDeviceCategory device;
    Lighting lighting = Lighting::no_info;
    // Derived from the landmark annotations; empty when no frame has both
    // eyes annotated.
    std::optional<FaceResolution> face_resolution;
    std::optional<double> iod;
    Subset subset = Subset::train;
    std::vector<std::string> frames;  // paths relative to the data root
    std::vector<std::optional<EyePair>> eyes;  // aligned with frames
};

struct DatasetInfo {
    std::string id;
    std::string name;
    int year = 0;
    std::string split_policy;  // as_is | resplit_train_dev | three_way
};

struct Registry {
    std::vector<Sample> samples;  // kept sorted by sample_id
    std::map<std::string, DatasetInfo> datasets;
};

// --- paper split rules -------------------------------------------------------

struct TwoWaySplit {
    std::vector<std::string> train, dev;
};

struct ThreeWaySplit {
    std::vector<std::string> train, dev, test;
};

// 80/20 split over subject identities with a seeded shuffle of sorted ids.
// |train| = floor(0.8*N + 0.5), clamped so the dev side is never empty
// (the N=2 case yields 1/1). Throws Error{split_error} for N < 2.
TwoWaySplit split_train_dev(const std::vector<std::string>& subjects, std::uint64_t seed);

// 40/30/30 split over subject identities. |train| = floor(0.4*N + 0.5),
// |dev| = floor(0.3*N + 0.5), the remainder goes to test. Throws
// Error{split_error} for N < 3.
ThreeWaySplit split_three_way(const std::vector<std::string>& subjects, std::uint64_t seed);

// Arithmetic mean over annotated frames of the Euclidean distance between
// eye centers. Frames with a missing annotation are skipped; throws
// Error{missing_annotation} when no frame qualifies.
double mean_iod(const std::vector<std::optional<EyePair>>& eyes);

struct LoadOptions {
    std::uint64_t seed = 0;  // drives subset assignment when the manifest has none
};

// Parses one per-dataset manifest (JSON) into a single-dataset registry
// fragment. See the README for the schema. Subset assignment follows the
// manifest's split_policy; the effective seed is mix_seed(seed, dataset_id)
// so fragments are independent of load order.
Registry load_manifest(const std::string& path, const LoadOptions& opts = {});

// Loads and merges several manifests, then validates global invariants
// (unique sample ids, identity-disjoint subsets per dataset).
Registry load_manifests(const std::vector<std::string>& paths, const LoadOptions& opts = {});

// Merges fragments and re-checks invariants. Throws Error{invalid_metadata}
// on violations.
Registry merge_registries(std::vector<Registry> fragments);

}  // namespace padbench
