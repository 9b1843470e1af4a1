#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "padbench/color.hpp"
#include "padbench/image.hpp"
#include "padbench/registry.hpp"

namespace padbench {

struct FeatureVector {
    std::string extractor_id;
    std::vector<float> values;

    std::size_t dim() const { return values.size(); }
};

// --- color-texture LBP -------------------------------------------------------

// Uniform LBP over overlapping blocks of YCrCb + HSV channel planes.
struct LbpConfig {
    int radius = 1;
    int neighbors = 8;  // only 8 is supported
    bool uniform = true;
    int block_size = 16;
    int block_stride = 8;
    std::vector<Channel> channels = {Channel::y,
                                     Channel::cr,
                                     Channel::cb,
                                     Channel::h,
                                     Channel::s,
                                     Channel::v};
};

int lbp_bins(const LbpConfig& cfg);                       // 59 uniform, 256 raw
int lbp_blocks_per_axis(int image_size, const LbpConfig& cfg);
std::size_t lbp_dim(const LbpConfig& cfg);                // channels * blocks^2 * bins

// Per-pixel LBP codes for pixels whose full neighborhood lies inside the
// plane; border entries are 0xffff. Neighbor k of (x, y) sits at offset
// ((r,0),(r,r),(0,r),(-r,r),(-r,0),(-r,-r),(0,-r),(r,-r))[k] and sets bit k
// when its value >= the center value.
std::vector<std::uint16_t> lbp_code_map(const Plane& plane, int width, int height,
                                        const LbpConfig& cfg);

// Concatenated histograms over blocks of size block_size placed every
// block_stride pixels (row-major). Each block histogram counts the codes of
// the block's interior pixels, i.e. (block_size - 2*radius)^2 of them.
std::vector<float> lbp_block_histograms(const Plane& plane, int width, int height,
                                        const LbpConfig& cfg);

// Channel order is cfg.channels (outer), blocks row-major, bins inner.
FeatureVector extract_color_lbp(const FaceCrop& crop, const LbpConfig& cfg = {});

// --- image-quality-measure bank ---------------------------------------------

// Full-reference measures compare the grayscale crop against its Gaussian-
// blurred self; no-reference measures look at the color crop directly.
struct IqmConfig {
    std::vector<std::string> measures;  // empty = default_iqm_measures()
    double sigma = 1.0;                 // reference blur; 0 = identity reference
    int kernel_size = 5;
};

const std::vector<std::string>& default_iqm_measures();
bool iqm_measure_is_full_reference(const std::string& id);
std::size_t iqm_measure_arity(const std::string& id);
std::size_t iqm_dim(const IqmConfig& cfg);

// Separable Gaussian blur with reflect-101 borders; sigma <= 0 returns the
// plane unchanged.
Plane gaussian_blur(const Plane& plane, int width, int height, double sigma, int kernel_size);

// One full-reference measure between two planes (used directly by oracle
// tests on small hand-built images). Division-by-zero cases return the
// documented sentinel 0.
double iqm_full_reference(const std::string& id, const Plane& a, const Plane& b, int width,
                          int height);

// One no-reference measure of a color image; chromatic_moments yields nine
// values, the others one.
std::vector<double> iqm_no_reference(const std::string& id, const Image& image);

FeatureVector extract_iqm(const FaceCrop& crop, const IqmConfig& cfg = {});

// --- video-level aggregation and the extractor interface ---------------------

// Element-wise arithmetic mean of per-frame vectors (accumulated in double).
FeatureVector video_feature(const std::vector<FeatureVector>& frames);

class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;

    virtual const std::string& id() const = 0;
    virtual std::uint64_t config_hash() const = 0;
    virtual std::size_t dim() const = 0;
    virtual FeatureVector extract(const FaceCrop& crop) const = 0;
};

class ColorLbpExtractor final : public FeatureExtractor {
public:
    explicit ColorLbpExtractor(LbpConfig cfg = {});

    const std::string& id() const override { return id_; }
    std::uint64_t config_hash() const override { return hash_; }
    std::size_t dim() const override { return lbp_dim(cfg_); }
    FeatureVector extract(const FaceCrop& crop) const override;
    const LbpConfig& config() const { return cfg_; }

private:
    LbpConfig cfg_;
    std::string id_ = "color_lbp";
    std::uint64_t hash_;
};

class IqmExtractor final : public FeatureExtractor {
public:
    explicit IqmExtractor(IqmConfig cfg = {});

    const std::string& id() const override { return id_; }
    std::uint64_t config_hash() const override { return hash_; }
    std::size_t dim() const override { return iqm_dim(cfg_); }
    FeatureVector extract(const FaceCrop& crop) const override;
    const IqmConfig& config() const { return cfg_; }

private:
    IqmConfig cfg_;
    std::string id_ = "iqm";
    std::uint64_t hash_;
};

// id is "color_lbp" or "iqm"; config_json optionally overrides config
// fields (see README). The returned extractor's config_hash covers the
// fully resolved configuration.
std::unique_ptr<FeatureExtractor> make_extractor(const std::string& id,
                                                 const std::string& config_json = "");

std::uint64_t lbp_config_hash(const LbpConfig& cfg);
std::uint64_t iqm_config_hash(const IqmConfig& cfg);

// Square face box derived from the eye centers: side = 2 * IOD, centered
// at the eye midpoint shifted down by 0.25 * IOD.
BBox face_box_from_eyes(const EyePair& eyes);

}  // namespace padbench
