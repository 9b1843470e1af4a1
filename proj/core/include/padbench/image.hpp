#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padbench/error.hpp"

namespace padbench {

// Interleaved 8-bit RGB.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t& at(int x, int y, int c) {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

// Binary PPM (P6, maxval 255). The one frame format the pipeline reads and
// writes; uncompressed, so artifacts are byte-reproducible.
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& image);

struct BBox {
    double x = 0, y = 0, w = 0, h = 0;
};

// 64x64 RGB face crop; the only constructor path is crop_face, which
// enforces the size invariant.
class FaceCrop {
public:
    static constexpr int kSize = 64;

    explicit FaceCrop(Image image);

    const Image& image() const { return image_; }

private:
    Image image_;
};

// Expands the box to a square about its center, clamps it to the frame,
// and bilinearly resamples to 64x64. Source coordinates use the pixel-
// center convention sx = rx + (dx + 0.5) * rw / 64 - 0.5 with edge clamp;
// channel values round to nearest. Throws Error{crop_error} when the box
// has no area or leaves the frame.
FaceCrop crop_face(const Image& frame, const BBox& bbox);

}  // namespace padbench
