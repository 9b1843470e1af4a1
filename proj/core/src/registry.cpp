#include "padbench/registry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "padbench/rng.hpp"

namespace padbench {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<std::string> shuffled_subjects(const std::vector<std::string>& subjects,
                                           std::uint64_t seed) {
    auto ids = sorted_unique(subjects);
    Rng rng(seed);
    rng.shuffle(ids);
    return ids;
}

}  // namespace

TwoWaySplit split_train_dev(const std::vector<std::string>& subjects, std::uint64_t seed) {
    auto ids = shuffled_subjects(subjects, seed);
    const std::size_t n = ids.size();
    if (n < 2)
        throw Error(ErrorKind::split_error,
                    "train/dev split needs at least 2 subjects, got " + std::to_string(n));
    std::size_t n_train = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n) + 0.5));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    TwoWaySplit out;
    out.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.dev.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    return out;
}

ThreeWaySplit split_three_way(const std::vector<std::string>& subjects, std::uint64_t seed) {
    auto ids = shuffled_subjects(subjects, seed);
    const std::size_t n = ids.size();
    if (n < 3)
        throw Error(ErrorKind::split_error,
                    "three-way split needs at least 3 subjects, got " + std::to_string(n));
    const auto n_train =
        static_cast<std::size_t>(std::floor(0.4 * static_cast<double>(n) + 0.5));
    const auto n_dev = static_cast<std::size_t>(std::floor(0.3 * static_cast<double>(n) + 0.5));
    ThreeWaySplit out;
    auto it = ids.begin();
    out.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
    it += static_cast<std::ptrdiff_t>(n_train);
    out.dev.assign(it, it + static_cast<std::ptrdiff_t>(n_dev));
    it += static_cast<std::ptrdiff_t>(n_dev);
    out.test.assign(it, ids.end());
    return out;
}

double mean_iod(const std::vector<std::optional<EyePair>>& eyes) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& e : eyes) {
        if (!e) continue;
        const double dx = e->rx - e->lx;
        const double dy = e->ry - e->ly;
        sum += std::sqrt(dx * dx + dy * dy);
        ++count;
    }
    if (count == 0)
        throw Error(ErrorKind::missing_annotation, "no frame has both eyes annotated");
    return sum / static_cast<double>(count);
}

Registry merge_registries(std::vector<Registry> fragments) {
    Registry merged;
    for (auto& frag : fragments) {
        for (auto& [id, info] : frag.datasets) {
            if (merged.datasets.count(id))
                throw Error(ErrorKind::invalid_metadata, "dataset '" + id + "' loaded twice");
            merged.datasets.emplace(id, std::move(info));
        }
        merged.samples.insert(merged.samples.end(),
                              std::make_move_iterator(frag.samples.begin()),
                              std::make_move_iterator(frag.samples.end()));
    }
    std::sort(merged.samples.begin(), merged.samples.end(),
              [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });

    // Global invariants: unique sample ids, known dataset ids, and
    // identity-disjoint subsets within each dataset.
    std::map<std::pair<std::string, std::string>, Subset> subject_subset;
    for (std::size_t i = 0; i < merged.samples.size(); ++i) {
        const Sample& s = merged.samples[i];
        if (i > 0 && merged.samples[i - 1].sample_id == s.sample_id)
            throw Error(ErrorKind::invalid_metadata, "duplicate sample_id '" + s.sample_id + "'");
        if (!merged.datasets.count(s.dataset_id))
            throw Error(ErrorKind::invalid_metadata,
                        "sample '" + s.sample_id + "' references unknown dataset '" +
                            s.dataset_id + "'");
        auto key = std::make_pair(s.dataset_id, s.subject_id);
        auto [it, inserted] = subject_subset.emplace(key, s.subset);
        if (!inserted && it->second != s.subset)
            throw Error(ErrorKind::invalid_metadata,
                        "subject '" + s.subject_id + "' of dataset '" + s.dataset_id +
                            "' appears in both " + std::string(to_string(it->second)) + " and " +
                            std::string(to_string(s.subset)));
    }
    return merged;
}

Registry load_manifests(const std::vector<std::string>& paths, const LoadOptions& opts) {
    std::vector<Registry> fragments;
    fragments.reserve(paths.size());
    for (const auto& p : paths) fragments.push_back(load_manifest(p, opts));
    return merge_registries(std::move(fragments));
}

}  // namespace padbench
