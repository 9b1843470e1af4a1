#include "padbench/color.hpp"

#include <algorithm>
#include <cmath>

namespace padbench {

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::y: return "y";
        case Channel::cr: return "cr";
        case Channel::cb: return "cb";
        case Channel::h: return "h";
        case Channel::s: return "s";
        case Channel::v: return "v";
    }
    return "?";
}

Channel parse_channel(std::string_view s) {
    if (s == "y") return Channel::y;
    if (s == "cr") return Channel::cr;
    if (s == "cb") return Channel::cb;
    if (s == "h") return Channel::h;
    if (s == "s") return Channel::s;
    if (s == "v") return Channel::v;
    throw Error(ErrorKind::config_error, "unknown channel '" + std::string(s) + "'");
}

namespace {

float hue_degrees(double r, double g, double b) {
    const double maxc = std::max({r, g, b});
    const double minc = std::min({r, g, b});
    const double delta = maxc - minc;
    if (delta == 0.0) return 0.0f;
    double h;
    if (maxc == r)
        h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (maxc == g)
        h = 60.0 * ((b - r) / delta + 2.0);
    else
        h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0) h += 360.0;
    return static_cast<float>(h);
}

}  // namespace

Plane channel_plane(const Image& image, Channel c) {
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    Plane plane(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = image.rgb[i * 3 + 0];
        const double g = image.rgb[i * 3 + 1];
        const double b = image.rgb[i * 3 + 2];
        const double y = 0.299 * r + 0.587 * g + 0.114 * b;
        switch (c) {
            case Channel::y:
                plane[i] = static_cast<float>(y);
                break;
            case Channel::cr:
                plane[i] = static_cast<float>(128.0 + 0.713 * (r - y));
                break;
            case Channel::cb:
                plane[i] = static_cast<float>(128.0 + 0.564 * (b - y));
                break;
            case Channel::h:
                plane[i] = hue_degrees(r, g, b);
                break;
            case Channel::s: {
                const double maxc = std::max({r, g, b});
                const double minc = std::min({r, g, b});
                plane[i] = maxc > 0.0 ? static_cast<float>((maxc - minc) / maxc) : 0.0f;
                break;
            }
            case Channel::v:
                plane[i] = static_cast<float>(std::max({r, g, b}));
                break;
        }
    }
    return plane;
}

Plane gray_plane(const Image& image) { return channel_plane(image, Channel::y); }

}  // namespace padbench
