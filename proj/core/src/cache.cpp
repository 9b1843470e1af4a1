#include "padbench/cache.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace padbench {

namespace {

constexpr char kMagic[4] = {'P', 'B', 'F', 'C'};
constexpr std::uint32_t kVersion = 1;

void append_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f32(std::string& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    append_u32(buf, bits);
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw Error(ErrorKind::checksum_error, "cache entry '" + path_ + "' is truncated");
    }

    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
            out.push_back(c);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02x", static_cast<unsigned char>(c));
            out += buf;
        }
    }
    return out;
}

std::uint32_t crc32_of(const std::string& data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size())));
}

}  // namespace

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path FeatureCache::entry_path(const CacheKey& key) const {
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(key.config_hash));
    return dir_ / sanitize(key.dataset_id) / (sanitize(key.extractor_id) + "-" + hash_hex) /
           (sanitize(key.sample_id) + ".feat");
}

void FeatureCache::put(const CacheKey& key, const FeatureVector& fv) {
    const auto path = entry_path(key);
    if (std::filesystem::exists(path)) return;  // write-once
    std::filesystem::create_directories(path.parent_path());

    std::string buf;
    buf.append(kMagic, 4);
    append_u32(buf, kVersion);
    append_u32(buf, static_cast<std::uint32_t>(key.extractor_id.size()));
    buf += key.extractor_id;
    append_u64(buf, key.config_hash);
    append_u32(buf, static_cast<std::uint32_t>(fv.values.size()));
    for (float v : fv.values) append_f32(buf, v);
    append_u32(buf, crc32_of(buf));

    const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io_error, "cannot write cache entry '" + tmp.string() + "'");
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw Error(ErrorKind::io_error, "short write on cache entry '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::optional<FeatureVector> FeatureCache::get(const CacheKey& key) const {
    const auto path = entry_path(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    Reader r(data, path.string());
    if (r.bytes(4) != std::string(kMagic, 4))
        throw Error(ErrorKind::checksum_error, "cache entry '" + path.string() + "' has a bad magic");
    if (r.u32() != kVersion)
        throw Error(ErrorKind::checksum_error,
                    "cache entry '" + path.string() + "' has an unsupported version");
    const std::uint32_t id_len = r.u32();
    const std::string extractor_id = r.bytes(id_len);
    const std::uint64_t config_hash = r.u64();
    const std::uint32_t dim = r.u32();

    FeatureVector fv;
    fv.extractor_id = extractor_id;
    fv.values.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i) fv.values[i] = r.f32();

    const std::size_t payload_end = r.pos();
    const std::uint32_t stored_crc = r.u32();
    if (stored_crc != crc32_of(data.substr(0, payload_end)))
        throw Error(ErrorKind::checksum_error,
                    "cache entry '" + path.string() + "' failed its checksum");
    if (extractor_id != key.extractor_id || config_hash != key.config_hash)
        throw Error(ErrorKind::checksum_error,
                    "cache entry '" + path.string() + "' does not match its key");
    return fv;
}

}  // namespace padbench
