#include "padbench/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

namespace padbench {

namespace {

// Skips whitespace and '#' comments between PPM header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) throw Error(ErrorKind::parse_error, path + ": malformed PPM header");
    return value;
}

}  // namespace

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open image '" + path + "'");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '6')
        throw Error(ErrorKind::parse_error, path + ": not a binary PPM (P6) file");
    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (width <= 0 || height <= 0 || maxval != 255)
        throw Error(ErrorKind::parse_error, path + ": unsupported PPM dimensions or maxval");
    in.get();  // single whitespace after maxval

    Image img(width, height);
    in.read(reinterpret_cast<char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.rgb.size()))
        throw Error(ErrorKind::parse_error, path + ": truncated PPM payload");
    return img;
}

void write_ppm(const std::string& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io_error, "cannot write image '" + path + "'");
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw Error(ErrorKind::io_error, "short write on image '" + path + "'");
}

FaceCrop::FaceCrop(Image image) : image_(std::move(image)) {
    if (image_.width != kSize || image_.height != kSize)
        throw Error(ErrorKind::crop_error, "face crop must be 64x64");
}

FaceCrop crop_face(const Image& frame, const BBox& bbox) {
    if (!(bbox.w > 0.0) || !(bbox.h > 0.0))
        throw Error(ErrorKind::crop_error, "bounding box has no area");
    if (bbox.x < 0.0 || bbox.y < 0.0 || bbox.x + bbox.w > frame.width ||
        bbox.y + bbox.h > frame.height)
        throw Error(ErrorKind::crop_error, "bounding box leaves the frame");

    const double side = std::max(bbox.w, bbox.h);
    const double cx = bbox.x + bbox.w / 2.0;
    const double cy = bbox.y + bbox.h / 2.0;
    const double rx0 = std::max(0.0, cx - side / 2.0);
    const double ry0 = std::max(0.0, cy - side / 2.0);
    const double rx1 = std::min(static_cast<double>(frame.width), cx + side / 2.0);
    const double ry1 = std::min(static_cast<double>(frame.height), cy + side / 2.0);
    const double rw = rx1 - rx0;
    const double rh = ry1 - ry0;

    const int n = FaceCrop::kSize;
    Image out(n, n);
    for (int dy = 0; dy < n; ++dy) {
        const double sy = ry0 + (dy + 0.5) * rh / n - 0.5;
        const int y0 = static_cast<int>(std::floor(sy));
        const double fy = sy - y0;
        const int y0c = std::clamp(y0, 0, frame.height - 1);
        const int y1c = std::clamp(y0 + 1, 0, frame.height - 1);
        for (int dx = 0; dx < n; ++dx) {
            const double sx = rx0 + (dx + 0.5) * rw / n - 0.5;
            const int x0 = static_cast<int>(std::floor(sx));
            const double fx = sx - x0;
            const int x0c = std::clamp(x0, 0, frame.width - 1);
            const int x1c = std::clamp(x0 + 1, 0, frame.width - 1);
            for (int c = 0; c < 3; ++c) {
                const double top = frame.at(x0c, y0c, c) * (1.0 - fx) + frame.at(x1c, y0c, c) * fx;
                const double bot = frame.at(x0c, y1c, c) * (1.0 - fx) + frame.at(x1c, y1c, c) * fx;
                const double v = top * (1.0 - fy) + bot * fy;
                out.at(dx, dy, c) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return FaceCrop(std::move(out));
}

}  // namespace padbench
