#include "padbench/features.hpp"

#include <cmath>

#include <json.hpp>

#include "padbench/rng.hpp"

namespace padbench {

namespace {

using nlohmann::json;

// Canonical form covers every field, including defaults, so two configs
// hash equal iff they resolve to the same extraction behavior.
std::string canonical_lbp_json(const LbpConfig& cfg) {
    json doc;
    doc["extractor"] = "color_lbp";
    doc["radius"] = cfg.radius;
    doc["neighbors"] = cfg.neighbors;
    doc["uniform"] = cfg.uniform;
    doc["block_size"] = cfg.block_size;
    doc["block_stride"] = cfg.block_stride;
    json channels = json::array();
    for (Channel c : cfg.channels) channels.push_back(std::string(to_string(c)));
    doc["channels"] = channels;
    return doc.dump();
}

std::string canonical_iqm_json(const IqmConfig& cfg) {
    json doc;
    doc["extractor"] = "iqm";
    doc["sigma"] = cfg.sigma;
    doc["kernel_size"] = cfg.kernel_size;
    doc["measures"] = cfg.measures.empty() ? default_iqm_measures() : cfg.measures;
    return doc.dump();
}

LbpConfig lbp_config_from_json(const std::string& text) {
    LbpConfig cfg;
    if (text.empty()) return cfg;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config_error, std::string("extractor config: ") + e.what());
    }
    cfg.radius = doc.value("radius", cfg.radius);
    cfg.neighbors = doc.value("neighbors", cfg.neighbors);
    cfg.uniform = doc.value("uniform", cfg.uniform);
    cfg.block_size = doc.value("block_size", cfg.block_size);
    cfg.block_stride = doc.value("block_stride", cfg.block_stride);
    if (doc.contains("channels")) {
        cfg.channels.clear();
        for (const auto& c : doc["channels"]) cfg.channels.push_back(parse_channel(c.get<std::string>()));
    }
    return cfg;
}

IqmConfig iqm_config_from_json(const std::string& text) {
    IqmConfig cfg;
    if (text.empty()) return cfg;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config_error, std::string("extractor config: ") + e.what());
    }
    cfg.sigma = doc.value("sigma", cfg.sigma);
    cfg.kernel_size = doc.value("kernel_size", cfg.kernel_size);
    if (doc.contains("measures"))
        cfg.measures = doc["measures"].get<std::vector<std::string>>();
    return cfg;
}

}  // namespace

std::uint64_t lbp_config_hash(const LbpConfig& cfg) { return fnv1a64(canonical_lbp_json(cfg)); }

std::uint64_t iqm_config_hash(const IqmConfig& cfg) { return fnv1a64(canonical_iqm_json(cfg)); }

FeatureVector video_feature(const std::vector<FeatureVector>& frames) {
    if (frames.empty())
        throw Error(ErrorKind::extraction_error, "video feature needs at least one frame");
    const std::size_t dim = frames.front().dim();
    std::vector<double> acc(dim, 0.0);
    for (const auto& f : frames) {
        if (f.dim() != dim || f.extractor_id != frames.front().extractor_id)
            throw Error(ErrorKind::extraction_error,
                        "per-frame features disagree in dimension or extractor");
        for (std::size_t i = 0; i < dim; ++i) acc[i] += f.values[i];
    }
    FeatureVector out;
    out.extractor_id = frames.front().extractor_id;
    out.values.resize(dim);
    const double count = static_cast<double>(frames.size());
    for (std::size_t i = 0; i < dim; ++i)
        out.values[i] = static_cast<float>(acc[i] / count);
    return out;
}

ColorLbpExtractor::ColorLbpExtractor(LbpConfig cfg)
    : cfg_(std::move(cfg)), hash_(lbp_config_hash(cfg_)) {
    lbp_dim(cfg_);  // validates
}

FeatureVector ColorLbpExtractor::extract(const FaceCrop& crop) const {
    return extract_color_lbp(crop, cfg_);
}

IqmExtractor::IqmExtractor(IqmConfig cfg) : cfg_(std::move(cfg)), hash_(iqm_config_hash(cfg_)) {
    iqm_dim(cfg_);  // validates
}

FeatureVector IqmExtractor::extract(const FaceCrop& crop) const {
    return extract_iqm(crop, cfg_);
}

std::unique_ptr<FeatureExtractor> make_extractor(const std::string& id,
                                                 const std::string& config_json) {
    if (id == "color_lbp")
        return std::make_unique<ColorLbpExtractor>(lbp_config_from_json(config_json));
    if (id == "iqm") return std::make_unique<IqmExtractor>(iqm_config_from_json(config_json));
    throw Error(ErrorKind::config_error, "unknown extractor '" + id + "'");
}

BBox face_box_from_eyes(const EyePair& eyes) {
    const double dx = eyes.rx - eyes.lx;
    const double dy = eyes.ry - eyes.ly;
    const double iod = std::sqrt(dx * dx + dy * dy);
    const double cx = (eyes.lx + eyes.rx) / 2.0;
    const double cy = (eyes.ly + eyes.ry) / 2.0 + 0.25 * iod;
    const double side = 2.0 * iod;
    return BBox{cx - side / 2.0, cy - side / 2.0, side, side};
}

}  // namespace padbench
