#include "padbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "padbench/image.hpp"
#include "padbench/rng.hpp"
#include "parallel.hpp"

namespace padbench {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kFrameSideFactor = 2.4;  // frame side per unit IOD
constexpr double kEyeRowFactor = 0.45;    // eye row as a fraction of the frame side

struct VideoPlan {
    SyntheticCell cell;
    std::string sample_id;
    std::string subject_id;
};

SyntheticCell cell_from_json(const json& j) {
    SyntheticCell cell;
    cell.count = j.value("count", 1);
    cell.label = parse_label(j.at("label").get<std::string>());
    cell.pai.kind = parse_pai_kind(j.value("pai_kind", "none"));
    cell.pai.subtype = parse_pai_subtype(j.value("pai_subtype", "none"));
    cell.device.kind = parse_device_kind(j.at("device_kind").get<std::string>());
    cell.device.quality = parse_device_quality(j.at("device_quality").get<std::string>());
    cell.lighting = parse_lighting(j.at("lighting").get<std::string>());
    cell.face_resolution = parse_face_resolution(j.at("face_resolution").get<std::string>());
    if ((cell.label == Label::bona_fide) != (cell.pai.kind == PaiKind::none))
        throw Error(ErrorKind::config_error, "synthetic cell label inconsistent with pai_kind");
    if (!subtype_valid_for(cell.pai.kind, cell.pai.subtype))
        throw Error(ErrorKind::config_error, "synthetic cell pai_subtype invalid for its kind");
    if (cell.count < 0) throw Error(ErrorKind::config_error, "synthetic cell count negative");
    return cell;
}

// Per-video texture parameters drawn once so every frame of the video
// shares its base appearance.
struct VideoTexture {
    double amp[3], fx[3], fy[3], phase[3];
    double color_offset[3];
    double grating_angle, grating_phase;
};

VideoTexture draw_texture(Rng& rng) {
    VideoTexture t{};
    for (int k = 0; k < 3; ++k) {
        t.amp[k] = rng.uniform(10.0, 24.0);
        // period between box/1.5 and box/4, expressed per unit box side
        const double cycles = rng.uniform(1.5, 4.0);
        const double angle = rng.uniform(0.0, 2.0 * M_PI);
        t.fx[k] = cycles * std::cos(angle);
        t.fy[k] = cycles * std::sin(angle);
        t.phase[k] = rng.uniform(0.0, 2.0 * M_PI);
    }
    for (int c = 0; c < 3; ++c) t.color_offset[c] = rng.uniform(-10.0, 10.0);
    t.grating_angle = rng.uniform(20.0, 70.0) * M_PI / 180.0;
    t.grating_phase = rng.uniform(0.0, 2.0 * M_PI);
    return t;
}

double lighting_factor(Lighting lighting, double x_norm) {
    switch (lighting) {
        case Lighting::controlled: return 1.0;
        case Lighting::adverse: return 0.55 + 0.35 * x_norm;  // dim with a lateral ramp
        case Lighting::no_info: return 0.85;
    }
    return 1.0;
}

Image render_frame(const SyntheticCell& cell, const VideoTexture& tex, double iod, Rng& rng) {
    const int side = static_cast<int>(std::ceil(kFrameSideFactor * iod));
    const double box = 2.0 * iod;  // crop box side; artifact scales follow it
    const double noise_amp =
        (cell.device.quality == DeviceQuality::high ? 2.0 : 5.0) * std::sqrt(3.0);
    // Masks render almost noise-free so their block histograms collapse into
    // the flat/gradient patterns, far from the noise-driven bona fide codes.
    const double mask_noise_scale = cell.pai.kind == PaiKind::mask ? 0.05 : 1.0;
    const double halftone_period = std::max(2.0, box / 16.0);
    const double grating_period = std::max(2.0, box / 16.0);

    Image img(side, side);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            double v = 128.0;
            for (int k = 0; k < 3; ++k)
                v += tex.amp[k] * std::cos(2.0 * M_PI * (tex.fx[k] * x + tex.fy[k] * y) / box +
                                           tex.phase[k]);

            switch (cell.pai.kind) {
                case PaiKind::none:
                    break;
                case PaiKind::print: {
                    // halftone dot lattice
                    const double mx = std::fmod(x, halftone_period) - halftone_period / 2.0;
                    const double my = std::fmod(y, halftone_period) - halftone_period / 2.0;
                    const double r = halftone_period / 4.0;
                    v += (mx * mx + my * my <= r * r) ? -28.0 : 6.0;
                    break;
                }
                case PaiKind::replay: {
                    // oblique moire-like grating
                    const double u = x * std::cos(tex.grating_angle) +
                                     y * std::sin(tex.grating_angle);
                    v += 24.0 * std::sin(2.0 * M_PI * u / grating_period + tex.grating_phase);
                    break;
                }
                case PaiKind::mask:
                    // flatten texture toward the mean
                    v = 128.0 + 0.2 * (v - 128.0);
                    break;
            }

            const double light = lighting_factor(cell.lighting, static_cast<double>(x) / side);
            for (int c = 0; c < 3; ++c) {
                const double noise =
                    rng.uniform(-noise_amp, noise_amp) * mask_noise_scale;
                const double value = (v + tex.color_offset[c] + noise) * light;
                img.at(x, y, c) =
                    static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
            }
        }
    }
    return img;
}

}  // namespace

std::vector<SyntheticCell> full_grid(int bona_fide_count, int attack_count) {
    std::vector<SyntheticCell> cells;
    std::vector<PaiCategory> pais = {{PaiKind::none, PaiSubtype::none}};
    for (PaiKind kind : {PaiKind::print, PaiKind::replay})
        for (PaiSubtype st : {PaiSubtype::low, PaiSubtype::medium, PaiSubtype::high})
            pais.push_back({kind, st});
    for (PaiSubtype st : {PaiSubtype::paper, PaiSubtype::rigid, PaiSubtype::silicone})
        pais.push_back({PaiKind::mask, st});

    for (const auto& pai : pais)
        for (DeviceKind dk : {DeviceKind::webcam, DeviceKind::mobile_tablet,
                              DeviceKind::digital_camera})
            for (DeviceQuality dq : {DeviceQuality::low, DeviceQuality::high})
                for (Lighting light : {Lighting::controlled, Lighting::adverse, Lighting::no_info})
                    for (FaceResolution res :
                         {FaceResolution::small, FaceResolution::medium, FaceResolution::large}) {
                        SyntheticCell cell;
                        cell.label = pai.kind == PaiKind::none ? Label::bona_fide : Label::attack;
                        cell.count = cell.label == Label::bona_fide ? bona_fide_count : attack_count;
                        cell.pai = pai;
                        cell.device = {dk, dq};
                        cell.lighting = light;
                        cell.face_resolution = res;
                        cells.push_back(cell);
                    }
    return cells;
}

SyntheticSpec synthetic_spec_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("synthetic spec: ") + e.what());
    }
    SyntheticSpec spec;
    spec.seed = doc.value("seed", spec.seed);
    if (doc.contains("dataset_ids"))
        spec.dataset_ids = doc["dataset_ids"].get<std::vector<std::string>>();
    spec.subjects_per_dataset = doc.value("subjects_per_dataset", spec.subjects_per_dataset);
    spec.frames_per_video = doc.value("frames_per_video", spec.frames_per_video);
    spec.null_eye_fraction = doc.value("null_eye_fraction", spec.null_eye_fraction);
    if (doc.contains("iod_targets"))
        for (auto it = doc["iod_targets"].begin(); it != doc["iod_targets"].end(); ++it)
            spec.iod_targets[parse_face_resolution(it.key())] = it.value().get<double>();
    if (doc.contains("cells")) {
        spec.cells.clear();
        for (const auto& c : doc["cells"]) spec.cells.push_back(cell_from_json(c));
    } else if (doc.contains("grid")) {
        spec.cells = full_grid(doc["grid"].value("bona_fide_count", 3),
                               doc["grid"].value("attack_count", 1));
    }
    return spec;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open synthetic spec '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return synthetic_spec_from_json(text);
}

std::vector<std::string> generate_synthetic(const SyntheticSpec& spec,
                                            const std::string& out_dir, int workers) {
    if (spec.dataset_ids.empty())
        throw Error(ErrorKind::config_error, "synthetic spec needs at least one dataset id");
    if (spec.subjects_per_dataset < 3)
        throw Error(ErrorKind::config_error, "synthetic spec needs >= 3 subjects per dataset");
    if (spec.frames_per_video < 1)
        throw Error(ErrorKind::config_error, "synthetic spec needs >= 1 frame per video");
    const std::vector<SyntheticCell> default_cells =
        spec.cells.empty() ? full_grid(3, 1) : std::vector<SyntheticCell>{};
    const std::vector<SyntheticCell>& cells = spec.cells.empty() ? default_cells : spec.cells;
    bool any_bona = false, any_attack = false;
    for (const auto& c : cells)
        if (c.count > 0) (c.label == Label::bona_fide ? any_bona : any_attack) = true;
    if (!any_bona || !any_attack)
        throw Error(ErrorKind::config_error,
                    "synthetic spec needs at least one bona fide and one attack cell");

    std::vector<std::string> manifest_paths;
    for (const auto& dataset_id : spec.dataset_ids) {
        // Expand cells into per-video plans; subjects rotate so every
        // identity spans many cells and subject-level splits keep all
        // categories in every subset.
        std::vector<VideoPlan> plans;
        std::size_t seq = 0;
        for (const auto& cell : cells) {
            for (int i = 0; i < cell.count; ++i) {
                VideoPlan plan;
                plan.cell = cell;
                char buf[32];
                std::snprintf(buf, sizeof buf, "%05zu", seq);
                plan.sample_id = dataset_id + "_" + buf;
                char subj[32];
                std::snprintf(subj, sizeof subj, "s%03zu",
                              seq % static_cast<std::size_t>(spec.subjects_per_dataset));
                plan.subject_id = subj;
                ++seq;
                plans.push_back(std::move(plan));
            }
        }

        const fs::path dataset_dir = fs::path(out_dir) / dataset_id;
        const fs::path frames_dir = dataset_dir / "frames";
        fs::create_directories(frames_dir);

        json samples = json::array();
        samples.get_ref<json::array_t&>().resize(plans.size());

        detail::parallel_for(plans.size(), workers, [&](std::size_t p) {
            const VideoPlan& plan = plans[p];
            Rng rng(mix_seed(spec.seed, fnv1a64(plan.sample_id)));
            const VideoTexture tex = draw_texture(rng);
            const double iod_target = spec.iod_targets.at(plan.cell.face_resolution);

            json frames = json::array(), eyes = json::array();
            for (int f = 0; f < spec.frames_per_video; ++f) {
                // jitter keeps the per-frame IOD within +-3 px of target
                const double jlx = rng.uniform(-1.5, 1.5), jly = rng.uniform(-1.5, 1.5);
                const double jrx = rng.uniform(-1.5, 1.5), jry = rng.uniform(-1.5, 1.5);
                const bool drop_eyes =
                    f > 0 && spec.null_eye_fraction > 0.0 && rng.real01() < spec.null_eye_fraction;

                const int side = static_cast<int>(std::ceil(kFrameSideFactor * iod_target));
                const double cx = side / 2.0;
                const double ey = kEyeRowFactor * side;
                const EyePair pair{cx - iod_target / 2.0 + jlx, ey + jly,
                                   cx + iod_target / 2.0 + jrx, ey + jry};

                const Image frame = render_frame(plan.cell, tex, iod_target, rng);
                const std::string frame_name = plan.sample_id + "_f" + std::to_string(f) + ".ppm";
                write_ppm((frames_dir / frame_name).string(), frame);
                frames.push_back((fs::path(dataset_id) / "frames" / frame_name).string());
                if (drop_eyes)
                    eyes.push_back(nullptr);
                else
                    eyes.push_back(json::array({pair.lx, pair.ly, pair.rx, pair.ry}));
            }

            json rec;
            rec["sample_id"] = plan.sample_id;
            rec["subject_id"] = plan.subject_id;
            rec["label"] = std::string(to_string(plan.cell.label));
            rec["pai_kind"] = std::string(to_string(plan.cell.pai.kind));
            if (plan.cell.pai.kind != PaiKind::none)
                rec["pai_subtype"] = std::string(to_string(plan.cell.pai.subtype));
            rec["device_kind"] = std::string(to_string(plan.cell.device.kind));
            rec["device_quality"] = std::string(to_string(plan.cell.device.quality));
            rec["lighting"] = std::string(to_string(plan.cell.lighting));
            rec["frames"] = frames;
            rec["eyes"] = eyes;
            samples[p] = rec;
        });

        json manifest;
        manifest["dataset_id"] = dataset_id;
        manifest["name"] = "synthetic dataset " + dataset_id;
        manifest["samples"] = samples;

        const fs::path manifest_path = dataset_dir / "manifest.json";
        std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::io_error, "cannot write manifest '" + manifest_path.string() + "'");
        out << manifest.dump(2) << "\n";
        manifest_paths.push_back(manifest_path.string());
    }
    return manifest_paths;
}

}  // namespace padbench
