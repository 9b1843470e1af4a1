#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padbench/rng.hpp"
#include "padbench/taxonomy.hpp"

using namespace padbench;

TEST_CASE("print quality thresholds") {
    CHECK(categorize_print(600) == PaiSubtype::low);
    CHECK(categorize_print(601) == PaiSubtype::medium);
    CHECK(categorize_print(1000) == PaiSubtype::medium);
    CHECK(categorize_print(1001) == PaiSubtype::high);
    CHECK(categorize_print(1) == PaiSubtype::low);

    CHECK_THROWS_AS(categorize_print(0), Error);
    try {
        categorize_print(-5);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_metadata);
    }
}

TEST_CASE("replay quality thresholds") {
    CHECK(categorize_replay(480) == PaiSubtype::low);
    CHECK(categorize_replay(481) == PaiSubtype::medium);
    CHECK(categorize_replay(720) == PaiSubtype::medium);
    CHECK(categorize_replay(1079) == PaiSubtype::medium);
    CHECK(categorize_replay(1080) == PaiSubtype::high);
    CHECK_THROWS_AS(categorize_replay(0), Error);
}

TEST_CASE("face resolution thresholds") {
    CHECK(categorize_face_resolution(120.0) == FaceResolution::small);
    CHECK(categorize_face_resolution(120.5) == FaceResolution::medium);
    CHECK(categorize_face_resolution(240.0) == FaceResolution::medium);
    CHECK(categorize_face_resolution(240.5) == FaceResolution::large);
    try {
        categorize_face_resolution(0.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_annotation);
    }
}

TEST_CASE("category intervals partition the positive axis") {
    Rng rng(99);
    for (int i = 0; i < 20000; ++i) {
        const long dpi = 1 + static_cast<long>(rng.below(3000));
        const PaiSubtype p = categorize_print(dpi);
        const bool in_low = dpi <= 600;
        const bool in_med = dpi > 600 && dpi <= 1000;
        const bool in_high = dpi > 1000;
        CHECK(static_cast<int>(in_low) + static_cast<int>(in_med) + static_cast<int>(in_high) == 1);
        CHECK(p == (in_low ? PaiSubtype::low : in_med ? PaiSubtype::medium : PaiSubtype::high));

        const double iod = rng.uniform(1e-6, 500.0);
        const FaceResolution f = categorize_face_resolution(iod);
        const bool fs = iod <= 120.0, fm = iod > 120.0 && iod <= 240.0, fl = iod > 240.0;
        CHECK(static_cast<int>(fs) + static_cast<int>(fm) + static_cast<int>(fl) == 1);
        CHECK(f == (fs ? FaceResolution::small : fm ? FaceResolution::medium : FaceResolution::large));
    }
}

TEST_CASE("categorization is pure") {
    for (int rep = 0; rep < 3; ++rep) {
        CHECK(categorize_print(750) == PaiSubtype::medium);
        CHECK(categorize_replay(1080) == PaiSubtype::high);
        CHECK(categorize_face_resolution(240.0) == FaceResolution::medium);
    }
}

TEST_CASE("subtype domains follow the kind") {
    CHECK(subtype_valid_for(PaiKind::none, PaiSubtype::none));
    CHECK_FALSE(subtype_valid_for(PaiKind::none, PaiSubtype::low));
    CHECK(subtype_valid_for(PaiKind::print, PaiSubtype::high));
    CHECK_FALSE(subtype_valid_for(PaiKind::print, PaiSubtype::paper));
    CHECK(subtype_valid_for(PaiKind::mask, PaiSubtype::silicone));
    CHECK_FALSE(subtype_valid_for(PaiKind::mask, PaiSubtype::medium));
}

TEST_CASE("category strings round-trip") {
    CHECK(to_string(PaiCategory{PaiKind::mask, PaiSubtype::rigid}) == "mask/rigid");
    CHECK(to_string(PaiCategory{PaiKind::none, PaiSubtype::none}) == "none");
    CHECK(to_string(CaptureDeviceCategory{DeviceKind::mobile_tablet, DeviceQuality::high}) ==
          "mobile_tablet/high");

    for (auto v : {Lighting::controlled, Lighting::adverse, Lighting::no_info})
        CHECK(parse_lighting(to_string(v)) == v);
    for (auto v : {DeviceKind::webcam, DeviceKind::mobile_tablet, DeviceKind::digital_camera})
        CHECK(parse_device_kind(to_string(v)) == v);
    CHECK_THROWS_AS(parse_pai_kind("photo"), Error);
    CHECK_THROWS_AS(parse_lighting("dark"), Error);
}
