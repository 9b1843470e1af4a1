#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>

#include "padbench/features.hpp"

namespace padbench {

namespace {

constexpr double kEdgeThreshold = 64.0;  // Sobel magnitude cut for edge maps

void validate(const IqmConfig& cfg) {
    if (cfg.kernel_size < 1 || cfg.kernel_size % 2 == 0)
        throw Error(ErrorKind::config_error, "IQM blur kernel size must be odd and positive");
    for (const auto& id : cfg.measures) iqm_measure_arity(id);  // throws on unknown ids
}

const std::vector<std::string>& active_measures(const IqmConfig& cfg) {
    return cfg.measures.empty() ? default_iqm_measures() : cfg.measures;
}

int reflect101(int i, int n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
    return i;
}

// Sobel gradient magnitude; defined on interior pixels, 0 on the border.
std::vector<double> sobel_magnitude(const Plane& p, int w, int h) {
    std::vector<double> mag(static_cast<std::size_t>(w) * h, 0.0);
    auto at = [&](int x, int y) { return static_cast<double>(p[static_cast<std::size_t>(y) * w + x]); };
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double gx = -at(x - 1, y - 1) - 2 * at(x - 1, y) - at(x - 1, y + 1) +
                              at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1);
            const double gy = -at(x - 1, y - 1) - 2 * at(x, y - 1) - at(x + 1, y - 1) +
                              at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1);
            mag[static_cast<std::size_t>(y) * w + x] = std::sqrt(gx * gx + gy * gy);
        }
    }
    return mag;
}

// Row-column 2D DFT, plain O(N * (w + h)) evaluation.
std::vector<std::complex<double>> dft2(const Plane& p, int w, int h) {
    using cd = std::complex<double>;
    std::vector<cd> rows(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int u = 0; u < w; ++u) {
            cd acc = 0.0;
            for (int x = 0; x < w; ++x) {
                const double angle = -2.0 * M_PI * u * x / w;
                acc += static_cast<double>(p[static_cast<std::size_t>(y) * w + x]) *
                       cd(std::cos(angle), std::sin(angle));
            }
            rows[static_cast<std::size_t>(y) * w + u] = acc;
        }
    }
    std::vector<cd> out(static_cast<std::size_t>(w) * h);
    for (int u = 0; u < w; ++u) {
        for (int v = 0; v < h; ++v) {
            cd acc = 0.0;
            for (int y = 0; y < h; ++y) {
                const double angle = -2.0 * M_PI * v * y / h;
                acc += rows[static_cast<std::size_t>(y) * w + u] * cd(std::cos(angle), std::sin(angle));
            }
            out[static_cast<std::size_t>(v) * w + u] = acc;
        }
    }
    return out;
}

double safe_ratio(double num, double den) { return den != 0.0 ? num / den : 0.0; }

}  // namespace

const std::vector<std::string>& default_iqm_measures() {
    static const std::vector<std::string> ids = {
        "mse",
        "psnr",
        "snr",
        "structural_content",
        "max_difference",
        "average_difference",
        "normalized_absolute_error",
        "normalized_cross_correlation",
        "total_edge_difference",
        "spectral_magnitude_error",
        "spectral_phase_error",
        "gradient_magnitude_error",
        "ssim",
        "blurriness",
        "chromatic_moments",
        "color_diversity",
        "specular_ratio",
    };
    return ids;
}

bool iqm_measure_is_full_reference(const std::string& id) {
    static const std::set<std::string> no_reference = {"blurriness", "chromatic_moments",
                                                       "color_diversity", "specular_ratio"};
    iqm_measure_arity(id);
    return !no_reference.count(id);
}

std::size_t iqm_measure_arity(const std::string& id) {
    static const std::set<std::string> single = {
        "mse", "psnr", "snr", "structural_content", "max_difference", "average_difference",
        "normalized_absolute_error", "normalized_cross_correlation", "total_edge_difference",
        "spectral_magnitude_error", "spectral_phase_error", "gradient_magnitude_error", "ssim",
        "blurriness", "color_diversity", "specular_ratio"};
    if (single.count(id)) return 1;
    if (id == "chromatic_moments") return 9;
    throw Error(ErrorKind::config_error, "unknown IQM measure '" + id + "'");
}

std::size_t iqm_dim(const IqmConfig& cfg) {
    validate(cfg);
    std::size_t dim = 0;
    for (const auto& id : active_measures(cfg)) dim += iqm_measure_arity(id);
    return dim;
}

Plane gaussian_blur(const Plane& plane, int width, int height, double sigma, int kernel_size) {
    if (sigma <= 0.0) return plane;
    const int half = kernel_size / 2;
    std::vector<double> kernel(kernel_size);
    double sum = 0.0;
    for (int i = 0; i < kernel_size; ++i) {
        const double d = i - half;
        kernel[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += kernel[i];
    }
    for (auto& k : kernel) k /= sum;

    std::vector<double> tmp(static_cast<std::size_t>(width) * height, 0.0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += kernel[i + half] *
                       plane[static_cast<std::size_t>(y) * width + reflect101(x + i, width)];
            tmp[static_cast<std::size_t>(y) * width + x] = acc;
        }
    Plane out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += kernel[i + half] * tmp[static_cast<std::size_t>(reflect101(y + i, height)) * width + x];
            out[static_cast<std::size_t>(y) * width + x] = static_cast<float>(acc);
        }
    return out;
}

double iqm_full_reference(const std::string& id, const Plane& a, const Plane& b, int width,
                          int height) {
    if (a.size() != b.size() || a.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorKind::extraction_error, "plane sizes disagree in IQM measure");
    const std::size_t n = a.size();
    const double nd = static_cast<double>(n);

    if (id == "mse" || id == "psnr" || id == "snr") {
        double se = 0.0, energy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = static_cast<double>(a[i]) - b[i];
            se += d * d;
            energy += static_cast<double>(a[i]) * a[i];
        }
        const double mse = se / nd;
        if (id == "mse") return mse;
        if (id == "psnr") return mse > 0.0 ? 10.0 * std::log10(255.0 * 255.0 / mse) : 0.0;
        return (se > 0.0 && energy > 0.0) ? 10.0 * std::log10(energy / se) : 0.0;
    }
    if (id == "structural_content") {
        double ea = 0.0, eb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ea += static_cast<double>(a[i]) * a[i];
            eb += static_cast<double>(b[i]) * b[i];
        }
        return safe_ratio(ea, eb);
    }
    if (id == "max_difference") {
        double md = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            md = std::max(md, std::abs(static_cast<double>(a[i]) - b[i]));
        return md;
    }
    if (id == "average_difference") {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(a[i]) - b[i];
        return sum / nd;
    }
    if (id == "normalized_absolute_error") {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::abs(static_cast<double>(a[i]) - b[i]);
            den += std::abs(static_cast<double>(a[i]));
        }
        return safe_ratio(num, den);
    }
    if (id == "normalized_cross_correlation") {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += static_cast<double>(a[i]) * b[i];
            den += static_cast<double>(a[i]) * a[i];
        }
        return safe_ratio(num, den);
    }
    if (id == "total_edge_difference") {
        const auto ma = sobel_magnitude(a, width, height);
        const auto mb = sobel_magnitude(b, width, height);
        const double interior = static_cast<double>(width - 2) * (height - 2);
        double diff = 0.0;
        for (int y = 1; y < height - 1; ++y)
            for (int x = 1; x < width - 1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                diff += std::abs((ma[i] >= kEdgeThreshold ? 1.0 : 0.0) -
                                 (mb[i] >= kEdgeThreshold ? 1.0 : 0.0));
            }
        return interior > 0.0 ? diff / interior : 0.0;
    }
    if (id == "gradient_magnitude_error") {
        const auto ma = sobel_magnitude(a, width, height);
        const auto mb = sobel_magnitude(b, width, height);
        const double interior = static_cast<double>(width - 2) * (height - 2);
        double se = 0.0;
        for (int y = 1; y < height - 1; ++y)
            for (int x = 1; x < width - 1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                se += (ma[i] - mb[i]) * (ma[i] - mb[i]);
            }
        return interior > 0.0 ? se / interior : 0.0;
    }
    if (id == "spectral_magnitude_error" || id == "spectral_phase_error") {
        const auto fa = dft2(a, width, height);
        const auto fb = dft2(b, width, height);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (id == "spectral_magnitude_error") {
                const double d = std::abs(fa[i]) - std::abs(fb[i]);
                acc += d * d;
            } else {
                const double d = std::arg(fa[i]) - std::arg(fb[i]);
                acc += d * d;
            }
        }
        return acc / nd;
    }
    if (id == "ssim") {
        // Global-statistics SSIM with the usual stabilizers.
        const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
        const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
        double mua = 0.0, mub = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mua += a[i];
            mub += b[i];
        }
        mua /= nd;
        mub /= nd;
        double va = 0.0, vb = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double da = a[i] - mua;
            const double db = b[i] - mub;
            va += da * da;
            vb += db * db;
            cov += da * db;
        }
        va /= nd;
        vb /= nd;
        cov /= nd;
        return ((2.0 * mua * mub + c1) * (2.0 * cov + c2)) /
               ((mua * mua + mub * mub + c1) * (va + vb + c2));
    }
    throw Error(ErrorKind::config_error, "'" + id + "' is not a full-reference IQM measure");
}

std::vector<double> iqm_no_reference(const std::string& id, const Image& image) {
    const int w = image.width, h = image.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const double nd = static_cast<double>(n);

    if (id == "blurriness") {
        // 1 / (1 + mean |4-neighbor Laplacian|): 1 on perfectly flat images,
        // toward 0 as detail increases.
        const Plane g = gray_plane(image);
        double acc = 0.0;
        for (int y = 1; y < h - 1; ++y)
            for (int x = 1; x < w - 1; ++x) {
                const auto at = [&](int xx, int yy) {
                    return static_cast<double>(g[static_cast<std::size_t>(yy) * w + xx]);
                };
                acc += std::abs(4.0 * at(x, y) - at(x - 1, y) - at(x + 1, y) - at(x, y - 1) -
                                at(x, y + 1));
            }
        const double interior = static_cast<double>(w - 2) * (h - 2);
        const double mean_lap = interior > 0.0 ? acc / interior : 0.0;
        return {1.0 / (1.0 + mean_lap)};
    }
    if (id == "chromatic_moments") {
        // mean, stddev, skewness of H/360, S, V/255; skewness sentinel 0 on
        // zero variance.
        std::vector<double> out;
        for (Channel c : {Channel::h, Channel::s, Channel::v}) {
            const Plane p = channel_plane(image, c);
            const double scale = c == Channel::h ? 1.0 / 360.0 : (c == Channel::v ? 1.0 / 255.0 : 1.0);
            double mean = 0.0;
            for (float v : p) mean += v * scale;
            mean /= nd;
            double m2 = 0.0, m3 = 0.0;
            for (float v : p) {
                const double d = v * scale - mean;
                m2 += d * d;
                m3 += d * d * d;
            }
            m2 /= nd;
            m3 /= nd;
            const double sd = std::sqrt(m2);
            out.push_back(mean);
            out.push_back(sd);
            out.push_back(sd > 0.0 ? m3 / (sd * sd * sd) : 0.0);
        }
        return out;
    }
    if (id == "color_diversity") {
        // occupied fraction of the 8x8x8 quantized RGB cube
        std::vector<bool> used(512, false);
        for (std::size_t i = 0; i < n; ++i) {
            const int r = image.rgb[i * 3 + 0] >> 5;
            const int g = image.rgb[i * 3 + 1] >> 5;
            const int b = image.rgb[i * 3 + 2] >> 5;
            used[static_cast<std::size_t>((r << 6) | (g << 3) | b)] = true;
        }
        return {static_cast<double>(std::count(used.begin(), used.end(), true)) / 512.0};
    }
    if (id == "specular_ratio") {
        // bright and unsaturated pixels: V >= 0.8*255 and S <= 0.15
        const Plane s = channel_plane(image, Channel::s);
        const Plane v = channel_plane(image, Channel::v);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] >= 0.8 * 255.0 && s[i] <= 0.15) ++hits;
        return {static_cast<double>(hits) / nd};
    }
    throw Error(ErrorKind::config_error, "'" + id + "' is not a no-reference IQM measure");
}

FeatureVector extract_iqm(const FaceCrop& crop, const IqmConfig& cfg) {
    validate(cfg);
    const int n = FaceCrop::kSize;
    const Plane gray = gray_plane(crop.image());
    const Plane ref = gaussian_blur(gray, n, n, cfg.sigma, cfg.kernel_size);

    FeatureVector fv;
    fv.extractor_id = "iqm";
    fv.values.reserve(iqm_dim(cfg));
    for (const auto& id : active_measures(cfg)) {
        if (iqm_measure_is_full_reference(id)) {
            fv.values.push_back(static_cast<float>(iqm_full_reference(id, gray, ref, n, n)));
        } else {
            for (double v : iqm_no_reference(id, crop.image()))
                fv.values.push_back(static_cast<float>(v));
        }
    }
    return fv;
}

}  // namespace padbench
