#pragma once

#include <string>
#include <string_view>

#include "padbench/error.hpp"

namespace padbench {

enum class Label { bona_fide, attack };
enum class Subset { train, dev, test };

enum class PaiKind { none, print, replay, mask };

// Combined subtype domain. Which values are legal depends on the kind:
// print/replay take a quality tier, mask takes a material, bona fide
// carries `none`.
enum class PaiSubtype { none, low, medium, high, paper, rigid, silicone };

struct PaiCategory {
    PaiKind kind = PaiKind::none;
    PaiSubtype subtype = PaiSubtype::none;
};

enum class DeviceKind { webcam, mobile_tablet, digital_camera };
enum class DeviceQuality { low, high };  // SD / HD, declared by the manifest

struct CaptureDeviceCategory {
    DeviceKind kind = DeviceKind::webcam;
    DeviceQuality quality = DeviceQuality::low;
};

enum class FaceResolution { small, medium, large };
enum class Lighting { controlled, adverse, no_info };

// --- threshold categorizers -------------------------------------------------

// Print quality from printer dots-per-inch.
// low: dpi <= 600, medium: 600 < dpi <= 1000, high: dpi > 1000.
PaiSubtype categorize_print(long dpi);

// Replay quality from the smaller dimension of the presenting screen, in
// pixels. low: res <= 480, medium: 480 < res < 1080, high: res >= 1080.
PaiSubtype categorize_replay(long screen_resolution);

// Face resolution from the mean interocular distance in pixels.
// small: iod <= 120, medium: 120 < iod <= 240, large: iod > 240.
FaceResolution categorize_face_resolution(double mean_iod);

bool subtype_valid_for(PaiKind kind, PaiSubtype subtype);

// --- snake_case string forms (manifests, protocol configs, reports) ---------

std::string_view to_string(Label v);
std::string_view to_string(Subset v);
std::string_view to_string(PaiKind v);
std::string_view to_string(PaiSubtype v);
std::string_view to_string(DeviceKind v);
std::string_view to_string(DeviceQuality v);
std::string_view to_string(FaceResolution v);
std::string_view to_string(Lighting v);

// "none", "print/low", "mask/rigid", ...
std::string to_string(const PaiCategory& pai);
// "webcam/low", "mobile_tablet/high", ...
std::string to_string(const CaptureDeviceCategory& dev);

// Parsers throw Error{invalid_metadata} on unknown strings.
Label parse_label(std::string_view s);
Subset parse_subset(std::string_view s);
PaiKind parse_pai_kind(std::string_view s);
PaiSubtype parse_pai_subtype(std::string_view s);
DeviceKind parse_device_kind(std::string_view s);
DeviceQuality parse_device_quality(std::string_view s);
FaceResolution parse_face_resolution(std::string_view s);
Lighting parse_lighting(std::string_view s);

}  // namespace padbench
