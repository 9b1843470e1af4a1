#include "padbench/taxonomy.hpp"

namespace padbench {

PaiSubtype categorize_print(long dpi) {
    if (dpi <= 0)
        throw Error(ErrorKind::invalid_metadata, "print dpi must be positive, got " + std::to_string(dpi));
    if (dpi <= 600) return PaiSubtype::low;
    if (dpi <= 1000) return PaiSubtype::medium;
    return PaiSubtype::high;
}

PaiSubtype categorize_replay(long screen_resolution) {
    if (screen_resolution <= 0)
        throw Error(ErrorKind::invalid_metadata,
                    "replay screen resolution must be positive, got " + std::to_string(screen_resolution));
    if (screen_resolution <= 480) return PaiSubtype::low;
    if (screen_resolution < 1080) return PaiSubtype::medium;
    return PaiSubtype::high;
}

FaceResolution categorize_face_resolution(double mean_iod) {
    if (!(mean_iod > 0.0))
        throw Error(ErrorKind::invalid_annotation,
                    "interocular distance must be positive, got " + std::to_string(mean_iod));
    if (mean_iod <= 120.0) return FaceResolution::small;
    if (mean_iod <= 240.0) return FaceResolution::medium;
    return FaceResolution::large;
}

bool subtype_valid_for(PaiKind kind, PaiSubtype subtype) {
    switch (kind) {
        case PaiKind::none:
            return subtype == PaiSubtype::none;
        case PaiKind::print:
        case PaiKind::replay:
            return subtype == PaiSubtype::low || subtype == PaiSubtype::medium ||
                   subtype == PaiSubtype::high;
        case PaiKind::mask:
            return subtype == PaiSubtype::paper || subtype == PaiSubtype::rigid ||
                   subtype == PaiSubtype::silicone;
    }
    return false;
}

std::string_view to_string(Label v) {
    return v == Label::bona_fide ? "bona_fide" : "attack";
}

std::string_view to_string(Subset v) {
    switch (v) {
        case Subset::train: return "train";
        case Subset::dev: return "dev";
        case Subset::test: return "test";
    }
    return "?";
}

std::string_view to_string(PaiKind v) {
    switch (v) {
        case PaiKind::none: return "none";
        case PaiKind::print: return "print";
        case PaiKind::replay: return "replay";
        case PaiKind::mask: return "mask";
    }
    return "?";
}

std::string_view to_string(PaiSubtype v) {
    switch (v) {
        case PaiSubtype::none: return "none";
        case PaiSubtype::low: return "low";
        case PaiSubtype::medium: return "medium";
        case PaiSubtype::high: return "high";
        case PaiSubtype::paper: return "paper";
        case PaiSubtype::rigid: return "rigid";
        case PaiSubtype::silicone: return "silicone";
    }
    return "?";
}

std::string_view to_string(DeviceKind v) {
    switch (v) {
        case DeviceKind::webcam: return "webcam";
        case DeviceKind::mobile_tablet: return "mobile_tablet";
        case DeviceKind::digital_camera: return "digital_camera";
    }
    return "?";
}

std::string_view to_string(DeviceQuality v) {
    return v == DeviceQuality::low ? "low" : "high";
}

std::string_view to_string(FaceResolution v) {
    switch (v) {
        case FaceResolution::small: return "small";
        case FaceResolution::medium: return "medium";
        case FaceResolution::large: return "large";
    }
    return "?";
}

std::string_view to_string(Lighting v) {
    switch (v) {
        case Lighting::controlled: return "controlled";
        case Lighting::adverse: return "adverse";
        case Lighting::no_info: return "no_info";
    }
    return "?";
}

std::string to_string(const PaiCategory& pai) {
    if (pai.kind == PaiKind::none) return "none";
    return std::string(to_string(pai.kind)) + "/" + std::string(to_string(pai.subtype));
}

std::string to_string(const CaptureDeviceCategory& dev) {
    return std::string(to_string(dev.kind)) + "/" + std::string(to_string(dev.quality));
}

namespace {

[[noreturn]] void bad_category(std::string_view what, std::string_view got) {
    throw Error(ErrorKind::invalid_metadata,
                "unknown " + std::string(what) + " '" + std::string(got) + "'");
}

}  // namespace

Label parse_label(std::string_view s) {
    if (s == "bona_fide") return Label::bona_fide;
    if (s == "attack") return Label::attack;
    bad_category("label", s);
}

Subset parse_subset(std::string_view s) {
    if (s == "train") return Subset::train;
    if (s == "dev") return Subset::dev;
    if (s == "test") return Subset::test;
    bad_category("subset", s);
}

PaiKind parse_pai_kind(std::string_view s) {
    if (s == "none") return PaiKind::none;
    if (s == "print") return PaiKind::print;
    if (s == "replay") return PaiKind::replay;
    if (s == "mask") return PaiKind::mask;
    bad_category("pai_kind", s);
}

PaiSubtype parse_pai_subtype(std::string_view s) {
    if (s == "none") return PaiSubtype::none;
    if (s == "low") return PaiSubtype::low;
    if (s == "medium") return PaiSubtype::medium;
    if (s == "high") return PaiSubtype::high;
    if (s == "paper") return PaiSubtype::paper;
    if (s == "rigid") return PaiSubtype::rigid;
    if (s == "silicone") return PaiSubtype::silicone;
    bad_category("pai_subtype", s);
}

DeviceKind parse_device_kind(std::string_view s) {
    if (s == "webcam") return DeviceKind::webcam;
    if (s == "mobile_tablet") return DeviceKind::mobile_tablet;
    if (s == "digital_camera") return DeviceKind::digital_camera;
    bad_category("device_kind", s);
}

DeviceQuality parse_device_quality(std::string_view s) {
    if (s == "low") return DeviceQuality::low;
    if (s == "high") return DeviceQuality::high;
    bad_category("device_quality", s);
}

FaceResolution parse_face_resolution(std::string_view s) {
    if (s == "small") return FaceResolution::small;
    if (s == "medium") return FaceResolution::medium;
    if (s == "large") return FaceResolution::large;
    bad_category("face_resolution", s);
}

Lighting parse_lighting(std::string_view s) {
    if (s == "controlled") return Lighting::controlled;
    if (s == "adverse") return Lighting::adverse;
    if (s == "no_info") return Lighting::no_info;
    bad_category("lighting", s);
}

}  // namespace padbench
