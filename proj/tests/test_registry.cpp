#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "padbench/registry.hpp"

using namespace padbench;
using padbench::test::TempDir;
using padbench::test::write_file;

namespace {

std::string manifest_with_records(const std::string& records) {
    return R"({"dataset_id": "demo", "samples": [)" + records + "]}";
}

const char* kValidRecord = R"({
  "sample_id": "demo_000", "subject_id": "a", "label": "attack",
  "pai_kind": "print", "pai_subtype": "low",
  "device_kind": "webcam", "device_quality": "low", "lighting": "controlled",
  "subset": "train", "frames": [], "eyes": []
})";

}  // namespace

TEST_CASE("mean iod over annotated frames") {
    CHECK(mean_iod({EyePair{0, 0, 3, 4}}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(mean_iod({EyePair{0, 0, 100, 0}, EyePair{0, 0, 200, 0}}) ==
          doctest::Approx(150.0).epsilon(1e-12));

    SUBCASE("frames without annotations are skipped") {
        CHECK(mean_iod({std::nullopt, EyePair{0, 0, 0, 42}, std::nullopt}) ==
              doctest::Approx(42.0));
    }
    SUBCASE("no annotated frame is an error") {
        try {
            mean_iod({std::nullopt, std::nullopt});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::missing_annotation);
        }
    }
    SUBCASE("matches an independent summation oracle") {
        Rng rng(5);
        std::vector<std::optional<EyePair>> eyes;
        double sum = 0.0;
        for (int i = 0; i < 50; ++i) {
            EyePair e{rng.uniform(0, 500), rng.uniform(0, 500), rng.uniform(0, 500),
                      rng.uniform(0, 500)};
            eyes.push_back(e);
            sum += std::hypot(e.rx - e.lx, e.ry - e.ly);
        }
        CHECK(mean_iod(eyes) == doctest::Approx(sum / 50.0).epsilon(1e-9));
    }
}

TEST_CASE("80/20 split by identity") {
    std::vector<std::string> subjects;
    for (int i = 0; i < 50; ++i) subjects.push_back("u" + std::to_string(i));

    const auto split = split_train_dev(subjects, 7);
    CHECK(split.train.size() == 40);
    CHECK(split.dev.size() == 10);

    std::set<std::string> all(split.train.begin(), split.train.end());
    all.insert(split.dev.begin(), split.dev.end());
    CHECK(all.size() == 50);

    SUBCASE("minimal case rounds to 1/1") {
        const auto tiny = split_train_dev({"a", "b"}, 3);
        CHECK(tiny.train.size() == 1);
        CHECK(tiny.dev.size() == 1);
    }
    SUBCASE("same seed, same partition") {
        const auto again = split_train_dev(subjects, 7);
        CHECK(again.train == split.train);
        CHECK(again.dev == split.dev);
    }
    SUBCASE("single subject is an error") {
        CHECK_THROWS_AS(split_train_dev({"only"}, 1), Error);
    }
}

TEST_CASE("40/30/30 split by identity") {
    std::vector<std::string> subjects;
    for (int i = 0; i < 14; ++i) subjects.push_back("u" + std::to_string(i));
    const auto split = split_three_way(subjects, 11);
    CHECK(split.train.size() == 6);
    CHECK(split.dev.size() == 4);
    CHECK(split.test.size() == 4);

    SUBCASE("exact proportions") {
        std::vector<std::string> ten(subjects.begin(), subjects.begin() + 10);
        const auto s10 = split_three_way(ten, 11);
        CHECK(s10.train.size() == 4);
        CHECK(s10.dev.size() == 3);
        CHECK(s10.test.size() == 3);
    }
    SUBCASE("disjointness over random subject sets") {
        Rng rng(21);
        for (int rep = 0; rep < 300; ++rep) {
            const std::size_t n = 3 + rng.below(80);
            std::vector<std::string> subjects_n;
            for (std::size_t i = 0; i < n; ++i) subjects_n.push_back("s" + std::to_string(i));
            const auto sp = split_three_way(subjects_n, rng.u64());
            std::set<std::string> seen;
            for (const auto* part : {&sp.train, &sp.dev, &sp.test})
                for (const auto& id : *part) CHECK(seen.insert(id).second);
            CHECK(seen.size() == n);
        }
    }
    SUBCASE("too few subjects") { CHECK_THROWS_AS(split_three_way({"a", "b"}, 0), Error); }
}

TEST_CASE("manifest loading validates and categorizes") {
    TempDir dir("registry");

    SUBCASE("three valid records load as three samples") {
        std::string records;
        for (int i = 0; i < 3; ++i) {
            std::string rec = kValidRecord;
            const auto pos = rec.find("demo_000");
            rec.replace(pos, 8, "demo_00" + std::to_string(i));
            records += (i ? "," : "") + rec;
        }
        write_file(dir.path() / "demo.json", manifest_with_records(records));
        const Registry reg = load_manifest((dir.path() / "demo.json").string());
        CHECK(reg.samples.size() == 3);
        CHECK(reg.datasets.count("demo") == 1);
        CHECK(reg.datasets.at("demo").split_policy == "as_is");
    }

    SUBCASE("label inconsistent with pai is rejected") {
        const char* bad = R"({
          "sample_id": "x", "subject_id": "a", "label": "bona_fide",
          "pai_kind": "mask", "pai_subtype": "rigid",
          "device_kind": "webcam", "device_quality": "low", "lighting": "controlled",
          "subset": "train", "frames": [], "eyes": []
        })";
        write_file(dir.path() / "bad.json", manifest_with_records(bad));
        try {
            load_manifest((dir.path() / "bad.json").string());
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::parse_error);
            CHECK(std::string(e.what()).find("x") != std::string::npos);
        }
    }

    SUBCASE("face resolution derives from the mean IOD") {
        const char* rec = R"({
          "sample_id": "x", "subject_id": "a", "label": "bona_fide", "pai_kind": "none",
          "device_kind": "webcam", "device_quality": "low", "lighting": "controlled",
          "subset": "train",
          "frames": ["f0.ppm", "f1.ppm", "f2.ppm"],
          "eyes": [[0,0,118,0],[0,0,122,0],[0,0,126,0]]
        })";
        write_file(dir.path() / "iod.json", manifest_with_records(rec));
        const Registry reg = load_manifest((dir.path() / "iod.json").string());
        REQUIRE(reg.samples.size() == 1);
        CHECK(reg.samples[0].iod == doctest::Approx(122.0));
        CHECK(reg.samples[0].face_resolution == FaceResolution::medium);
    }

    SUBCASE("unknown category strings are named in the error") {
        std::string rec = kValidRecord;
        const auto pos = rec.find("\"print\"");
        rec.replace(pos, 7, "\"prnt\"");
        write_file(dir.path() / "cat.json", manifest_with_records(rec));
        try {
            load_manifest((dir.path() / "cat.json").string());
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("prnt") != std::string::npos);
        }
    }

    SUBCASE("print dpi derives the subtype when no subtype is given") {
        const char* rec = R"({
          "sample_id": "x", "subject_id": "a", "label": "attack",
          "pai_kind": "print", "print_dpi": 1200,
          "device_kind": "webcam", "device_quality": "low", "lighting": "controlled",
          "subset": "train", "frames": [], "eyes": []
        })";
        write_file(dir.path() / "dpi.json", manifest_with_records(rec));
        const Registry reg = load_manifest((dir.path() / "dpi.json").string());
        CHECK(reg.samples[0].pai.subtype == PaiSubtype::high);
    }

    SUBCASE("missing manifest names the path") {
        try {
            load_manifest((dir.path() / "absent.json").string());
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("absent.json") != std::string::npos);
        }
    }
}

TEST_CASE("subset assignment policies") {
    TempDir dir("split");
    // 10 subjects, subjects u0..u9, two samples each, no subsets
    std::string records;
    for (int i = 0; i < 20; ++i) {
        char rec[512];
        std::snprintf(rec, sizeof rec,
                      R"(%s{"sample_id": "s%02d", "subject_id": "u%d", "label": "bona_fide",
                      "pai_kind": "none", "device_kind": "webcam", "device_quality": "low",
                      "lighting": "no_info", "frames": [], "eyes": []})",
                      i ? "," : "", i, i % 10);
        records += rec;
    }
    write_file(dir.path() / "m.json", manifest_with_records(records));

    LoadOptions opts;
    opts.seed = 4;
    const Registry reg = load_manifest((dir.path() / "m.json").string(), opts);
    CHECK(reg.datasets.at("demo").split_policy == "three_way");

    std::map<Subset, std::set<std::string>> by_subset;
    for (const auto& s : reg.samples) by_subset[s.subset].insert(s.subject_id);
    CHECK(by_subset[Subset::train].size() == 4);
    CHECK(by_subset[Subset::dev].size() == 3);
    CHECK(by_subset[Subset::test].size() == 3);

    SUBCASE("loading twice is idempotent") {
        const Registry again = load_manifest((dir.path() / "m.json").string(), opts);
        REQUIRE(again.samples.size() == reg.samples.size());
        for (std::size_t i = 0; i < reg.samples.size(); ++i) {
            CHECK(again.samples[i].sample_id == reg.samples[i].sample_id);
            CHECK(again.samples[i].subset == reg.samples[i].subset);
        }
    }
}

TEST_CASE("resplit_train_dev keeps the test subset untouched") {
    TempDir dir("resplit");
    std::string records;
    for (int i = 0; i < 30; ++i) {
        const bool is_test = i >= 20;
        char rec[512];
        std::snprintf(rec, sizeof rec,
                      R"(%s{"sample_id": "s%02d", "subject_id": "u%d", "label": "bona_fide",
                      "pai_kind": "none", "device_kind": "webcam", "device_quality": "low",
                      "lighting": "no_info", "subset": "%s", "frames": [], "eyes": []})",
                      i ? "," : "", i, i, is_test ? "test" : "train");
        records += rec;
    }
    write_file(dir.path() / "m.json",
               R"({"dataset_id": "demo", "split_policy": "resplit_train_dev", "samples": [)" +
                   records + "]}");
    const Registry reg = load_manifest((dir.path() / "m.json").string());

    std::size_t train = 0, dev = 0, test = 0;
    for (const auto& s : reg.samples) {
        if (s.subset == Subset::train) ++train;
        if (s.subset == Subset::dev) ++dev;
        if (s.subset == Subset::test) {
            ++test;
            CHECK(s.sample_id >= "s20");  // originally test stays test
        }
    }
    CHECK(test == 10);
    CHECK(train == 16);  // 80% of the 20 original train subjects
    CHECK(dev == 4);
}

TEST_CASE("merge rejects global invariant violations") {
    TempDir dir("merge");

    SUBCASE("duplicate sample ids") {
        write_file(dir.path() / "m.json",
                   manifest_with_records(std::string(kValidRecord) + "," + kValidRecord));
        CHECK_THROWS_AS(load_manifest((dir.path() / "m.json").string()), Error);
    }

    SUBCASE("subject in two subsets of one dataset") {
        std::string second = kValidRecord;
        second.replace(second.find("demo_000"), 8, "demo_001");
        second.replace(second.find("\"train\""), 7, "\"dev\"");
        write_file(dir.path() / "m.json",
                   manifest_with_records(std::string(kValidRecord) + "," + second));
        try {
            load_manifest((dir.path() / "m.json").string());
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_metadata);
        }
    }
}
