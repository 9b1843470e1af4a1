#pragma once

#include <vector>

#include "padbench/image.hpp"

namespace padbench {

// One color channel as a row-major float plane.
using Plane = std::vector<float>;

enum class Channel { y, cr, cb, h, s, v };

std::string_view to_string(Channel c);
Channel parse_channel(std::string_view s);

// Full-range conversions from 8-bit RGB, fixed here so results are
// platform-identical:
//   Y  = 0.299 R + 0.587 G + 0.114 B                     in [0, 255]
//   Cr = 128 + 0.713 (R - Y),  Cb = 128 + 0.564 (B - Y)  in [0, 255]
//   V  = max(R, G, B) in [0, 255]
//   S  = (V - min) / V, 0 when V = 0                     in [0, 1]
//   H  = hexagonal hue in degrees                        in [0, 360)
Plane channel_plane(const Image& image, Channel c);

// Luminance Y of the conversion above.
Plane gray_plane(const Image& image);

}  // namespace padbench
