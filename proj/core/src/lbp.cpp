#include <array>

#include "padbench/features.hpp"

namespace padbench {

namespace {

void validate(const LbpConfig& cfg) {
    if (cfg.neighbors != 8)
        throw Error(ErrorKind::config_error, "LBP supports exactly 8 neighbors");
    if (cfg.radius < 1) throw Error(ErrorKind::config_error, "LBP radius must be >= 1");
    if (cfg.block_stride < 1)
        throw Error(ErrorKind::config_error, "LBP block stride must be >= 1");
    if (cfg.block_size <= 2 * cfg.radius)
        throw Error(ErrorKind::config_error, "LBP block size must exceed 2*radius");
    if (cfg.channels.empty())
        throw Error(ErrorKind::config_error, "LBP channel list must not be empty");
}

int circular_transitions(int code) {
    int transitions = 0;
    for (int i = 0; i < 8; ++i) {
        const int a = (code >> i) & 1;
        const int b = (code >> ((i + 1) % 8)) & 1;
        transitions += a ^ b;
    }
    return transitions;
}

// code -> histogram bin. Uniform codes (<= 2 transitions) get their own bin
// in ascending code order; the rest share the last bin.
const std::array<std::uint16_t, 256>& uniform_bin_table() {
    static const std::array<std::uint16_t, 256> table = [] {
        std::array<std::uint16_t, 256> t{};
        std::uint16_t next = 0;
        for (int code = 0; code < 256; ++code)
            if (circular_transitions(code) <= 2) t[code] = next++;
        for (int code = 0; code < 256; ++code)
            if (circular_transitions(code) > 2) t[code] = next;  // 58
        return t;
    }();
    return table;
}

constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

}  // namespace

int lbp_bins(const LbpConfig& cfg) { return cfg.uniform ? 59 : 256; }

int lbp_blocks_per_axis(int image_size, const LbpConfig& cfg) {
    return (image_size - cfg.block_size) / cfg.block_stride + 1;
}

std::size_t lbp_dim(const LbpConfig& cfg) {
    validate(cfg);
    const std::size_t blocks = static_cast<std::size_t>(lbp_blocks_per_axis(FaceCrop::kSize, cfg));
    return cfg.channels.size() * blocks * blocks * static_cast<std::size_t>(lbp_bins(cfg));
}

std::vector<std::uint16_t> lbp_code_map(const Plane& plane, int width, int height,
                                        const LbpConfig& cfg) {
    validate(cfg);
    const int r = cfg.radius;
    std::vector<std::uint16_t> codes(static_cast<std::size_t>(width) * height, 0xffff);
    for (int y = r; y < height - r; ++y) {
        for (int x = r; x < width - r; ++x) {
            const float center = plane[static_cast<std::size_t>(y) * width + x];
            int code = 0;
            for (int k = 0; k < 8; ++k) {
                const int nx = x + kNeighborOffsets[k][0] * r;
                const int ny = y + kNeighborOffsets[k][1] * r;
                if (plane[static_cast<std::size_t>(ny) * width + nx] >= center) code |= 1 << k;
            }
            codes[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint16_t>(code);
        }
    }
    return codes;
}

std::vector<float> lbp_block_histograms(const Plane& plane, int width, int height,
                                        const LbpConfig& cfg) {
    validate(cfg);
    if (width < cfg.block_size || height < cfg.block_size)
        throw Error(ErrorKind::config_error, "plane smaller than LBP block size");
    const auto codes = lbp_code_map(plane, width, height, cfg);
    const int bins = lbp_bins(cfg);
    const int nx = lbp_blocks_per_axis(width, cfg);
    const int ny = lbp_blocks_per_axis(height, cfg);
    const int r = cfg.radius;
    const auto& table = uniform_bin_table();

    std::vector<float> hist(static_cast<std::size_t>(nx) * ny * bins, 0.0f);
    for (int by = 0; by < ny; ++by) {
        for (int bx = 0; bx < nx; ++bx) {
            float* block = hist.data() + (static_cast<std::size_t>(by) * nx + bx) * bins;
            const int ox = bx * cfg.block_stride;
            const int oy = by * cfg.block_stride;
            for (int y = oy + r; y < oy + cfg.block_size - r; ++y) {
                for (int x = ox + r; x < ox + cfg.block_size - r; ++x) {
                    const std::uint16_t code = codes[static_cast<std::size_t>(y) * width + x];
                    block[cfg.uniform ? table[code] : code] += 1.0f;
                }
            }
        }
    }
    return hist;
}

FeatureVector extract_color_lbp(const FaceCrop& crop, const LbpConfig& cfg) {
    validate(cfg);
    FeatureVector fv;
    fv.extractor_id = "color_lbp";
    fv.values.reserve(lbp_dim(cfg));
    for (Channel c : cfg.channels) {
        const Plane plane = channel_plane(crop.image(), c);
        const auto hist = lbp_block_histograms(plane, FaceCrop::kSize, FaceCrop::kSize, cfg);
        fv.values.insert(fv.values.end(), hist.begin(), hist.end());
    }
    return fv;
}

}  // namespace padbench
