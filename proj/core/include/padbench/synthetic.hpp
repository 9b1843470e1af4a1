#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "padbench/registry.hpp"

namespace padbench {

// One (label x PAI x device x lighting x face-resolution) population cell.
struct SyntheticCell {
    int count = 1;
    Label label = Label::bona_fide;
    PaiCategory pai;
    CaptureDeviceCategory device;
    Lighting lighting = Lighting::no_info;
    FaceResolution face_resolution = FaceResolution::medium;
};

// Deterministic synthetic registry: smooth low-frequency textures plus
// sensor noise for bona fide frames; class-distinct artifacts on top for
// attacks (halftone dots for print, an oblique grating for replay, reduced
// texture variance for mask). Eye landmarks are placed to hit the
// requested face-resolution bands.
struct SyntheticSpec {
    std::uint64_t seed = 0;
    std::vector<std::string> dataset_ids = {"synth_a", "synth_b"};
    int subjects_per_dataset = 20;
    int frames_per_video = 2;
    double null_eye_fraction = 0.0;  // frames after the first may lose landmarks
    std::map<FaceResolution, double> iod_targets = {
        {FaceResolution::small, 60.0},
        {FaceResolution::medium, 160.0},
        {FaceResolution::large, 250.0},
    };
    std::vector<SyntheticCell> cells;  // empty = full_grid(3, 1)
};

SyntheticSpec synthetic_spec_from_json(const std::string& json_text);
SyntheticSpec load_synthetic_spec(const std::string& path);

// Every attack variant and every device/lighting/face-resolution combination,
// with the given per-cell counts.
std::vector<SyntheticCell> full_grid(int bona_fide_count, int attack_count);

// Writes <out_dir>/<dataset>/manifest.json plus PPM frames per dataset and
// returns the manifest paths. Same spec + seed -> identical bytes.
std::vector<std::string> generate_synthetic(const SyntheticSpec& spec,
                                            const std::string& out_dir, int workers = 2);

}  // namespace padbench
