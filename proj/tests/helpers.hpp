#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "padbench/registry.hpp"
#include "padbench/rng.hpp"
#include "padbench/taxonomy.hpp"

namespace padbench::test {

// Unique scratch directory under the build tree, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("padbench_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Uniform draws over the category vocabulary.
inline PaiCategory random_pai(Rng& rng, bool attack) {
    if (!attack) return {PaiKind::none, PaiSubtype::none};
    switch (rng.below(3)) {
        case 0:
            return {PaiKind::print, std::vector<PaiSubtype>{PaiSubtype::low, PaiSubtype::medium,
                                                            PaiSubtype::high}[rng.below(3)]};
        case 1:
            return {PaiKind::replay, std::vector<PaiSubtype>{PaiSubtype::low, PaiSubtype::medium,
                                                             PaiSubtype::high}[rng.below(3)]};
        default:
            return {PaiKind::mask, std::vector<PaiSubtype>{PaiSubtype::paper, PaiSubtype::rigid,
                                                           PaiSubtype::silicone}[rng.below(3)]};
    }
}

// Random in-memory registry for protocol filtering tests; no frames needed.
inline Registry random_registry(Rng& rng, std::size_t n_samples, int n_datasets = 3) {
    Registry reg;
    for (int d = 0; d < n_datasets; ++d) {
        DatasetInfo info;
        info.id = "ds" + std::to_string(d);
        info.name = info.id;
        info.split_policy = "as_is";
        reg.datasets.emplace(info.id, info);
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
        Sample s;
        char buf[32];
        std::snprintf(buf, sizeof buf, "sample_%06zu", i);
        s.sample_id = buf;
        s.dataset_id = "ds" + std::to_string(rng.below(static_cast<std::uint64_t>(n_datasets)));
        s.subject_id = "subj" + std::to_string(i);  // trivially identity-disjoint
        s.label = rng.below(3) == 0 ? Label::bona_fide : Label::attack;
        s.pai = random_pai(rng, s.label == Label::attack);
        s.device.kind = std::vector<DeviceKind>{DeviceKind::webcam, DeviceKind::mobile_tablet,
                                                DeviceKind::digital_camera}[rng.below(3)];
        s.device.quality = rng.below(2) ? DeviceQuality::high : DeviceQuality::low;
        s.lighting = std::vector<Lighting>{Lighting::controlled, Lighting::adverse,
                                           Lighting::no_info}[rng.below(3)];
        if (rng.below(10) != 0)  // leave some face resolutions missing
            s.face_resolution = std::vector<FaceResolution>{
                FaceResolution::small, FaceResolution::medium,
                FaceResolution::large}[rng.below(3)];
        s.subset = std::vector<Subset>{Subset::train, Subset::dev, Subset::test}[rng.below(3)];
        reg.samples.push_back(std::move(s));
    }
    std::sort(reg.samples.begin(), reg.samples.end(),
              [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });
    return reg;
}

}  // namespace padbench::test
