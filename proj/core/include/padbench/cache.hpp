#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "padbench/features.hpp"

namespace padbench {

struct CacheKey {
    std::string dataset_id;
    std::string sample_id;
    std::string extractor_id;
    std::uint64_t config_hash = 0;
};

// On-disk per-video feature store. One binary file per key:
//   "PBFC" | u32 version | u32 id_len | extractor_id bytes |
//   u64 config_hash | u32 dim | dim x f32 payload | u32 crc32
// All integers and floats little-endian. Entries are written once via a
// temp-file rename, so readers never observe partial data; a second put on
// an existing key is a no-op.
class FeatureCache {
public:
    explicit FeatureCache(std::filesystem::path dir);

    void put(const CacheKey& key, const FeatureVector& fv);

    // Miss returns nullopt. Corrupt or mismatching entries throw
    // Error{checksum_error}.
    std::optional<FeatureVector> get(const CacheKey& key) const;

    std::filesystem::path entry_path(const CacheKey& key) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

}  // namespace padbench
