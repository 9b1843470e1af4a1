#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "helpers.hpp"
#include "padbench/protocol_config.hpp"
#include "padbench/protocols.hpp"

using namespace padbench;
using padbench::test::random_registry;

namespace {

using SemanticRule = std::function<bool(const Sample&, Subset)>;

// Re-derives the selection from first principles: for each sample and each
// output subset, apply the protocol's *meaning* rather than its predicate
// machinery.
void check_against_rule(const Registry& reg, const ProtocolSpec& spec, const SemanticRule& rule) {
    const ProtocolSelection got = apply_protocol(reg, spec);
    for (Subset subset : {Subset::train, Subset::dev, Subset::test}) {
        std::set<std::string> expected;
        for (const auto& s : reg.samples)
            if (rule(s, subset)) expected.insert(s.sample_id);
        const auto& indices = subset == Subset::train ? got.train
                              : subset == Subset::dev ? got.dev
                                                      : got.test;
        std::set<std::string> actual;
        for (std::size_t i : indices) actual.insert(reg.samples[i].sample_id);
        CHECK(actual == expected);
    }
}

bool in_native_subset(const Sample& s, Subset subset) { return s.subset == subset; }

}  // namespace

TEST_CASE("grandtest keeps every sample of every subset") {
    Rng rng(1);
    const Registry reg = random_registry(rng, 500);
    const ProtocolSpec spec = make_grandtest();
    check_against_rule(reg, spec, [](const Sample& s, Subset subset) {
        return in_native_subset(s, subset);
    });
    const auto sel = apply_protocol(reg, spec);
    CHECK(sel.train.size() + sel.dev.size() + sel.test.size() == reg.samples.size());
    CHECK(make_grandtest().train.clauses.empty());
    CHECK(make_grandtest().dev.clauses.empty());
    CHECK(make_grandtest().test.clauses.empty());
}

TEST_CASE("cross-dataset holds one dataset out and retags its subsets as test") {
    Rng rng(2);
    const Registry reg = random_registry(rng, 600, 4);
    const ProtocolSpec spec = make_cross_dataset("ds1");
    check_against_rule(reg, spec, [](const Sample& s, Subset subset) {
        if (subset == Subset::test) return s.dataset_id == "ds1";  // every subset of ds1
        return in_native_subset(s, subset) && s.dataset_id != "ds1";
    });

    SUBCASE("single-dataset registry degenerates to an empty train") {
        const Registry one = random_registry(rng, 60, 1);
        const auto sel = apply_protocol(one, make_cross_dataset("ds0"));
        CHECK(sel.train.empty());
        CHECK(sel.degenerate());
    }
}

TEST_CASE("one-PAI keeps bona fide plus exactly one attack kind") {
    Rng rng(3);
    const Registry reg = random_registry(rng, 600);
    check_against_rule(reg, make_one_pai(PaiKind::mask), [](const Sample& s, Subset subset) {
        return in_native_subset(s, subset) &&
               (s.label == Label::bona_fide || s.pai.kind == PaiKind::mask);
    });

    SUBCASE("bona fide counts are untouched") {
        const auto grand = apply_protocol(reg, make_grandtest());
        const auto one = apply_protocol(reg, make_one_pai(PaiKind::print));
        auto bona_count = [&](const std::vector<std::size_t>& idx) {
            return std::count_if(idx.begin(), idx.end(), [&](std::size_t i) {
                return reg.samples[i].label == Label::bona_fide;
            });
        };
        CHECK(bona_count(grand.train) == bona_count(one.train));
        CHECK(bona_count(grand.dev) == bona_count(one.dev));
        CHECK(bona_count(grand.test) == bona_count(one.test));
    }
    SUBCASE("no other attacks remain") {
        const auto sel = apply_protocol(reg, make_one_pai(PaiKind::mask));
        for (const auto* part : {&sel.train, &sel.dev, &sel.test})
            for (std::size_t i : *part)
                if (reg.samples[i].label == Label::attack)
                    CHECK(reg.samples[i].pai.kind == PaiKind::mask);
    }
}

TEST_CASE("unseen attack excludes the PAI from train/dev and tests only it") {
    Rng rng(4);
    const Registry reg = random_registry(rng, 600);
    check_against_rule(reg, make_unseen_attack(PaiKind::replay), [](const Sample& s, Subset subset) {
        if (!in_native_subset(s, subset)) return false;
        if (subset == Subset::test)
            return s.label == Label::bona_fide || s.pai.kind == PaiKind::replay;
        return s.pai.kind != PaiKind::replay;  // bona fide passes, kind is none
    });

    SUBCASE("train/test attack kinds are disjoint") {
        const auto sel = apply_protocol(reg, make_unseen_attack(PaiKind::replay));
        std::set<PaiKind> train_kinds, test_kinds;
        for (std::size_t i : sel.train)
            if (reg.samples[i].label == Label::attack) train_kinds.insert(reg.samples[i].pai.kind);
        for (std::size_t i : sel.test)
            if (reg.samples[i].label == Label::attack) test_kinds.insert(reg.samples[i].pai.kind);
        for (PaiKind k : test_kinds) CHECK(train_kinds.count(k) == 0);
    }
}

TEST_CASE("unseen device is symmetric over the capture device kind") {
    Rng rng(5);
    const Registry reg = random_registry(rng, 600);
    check_against_rule(reg, make_unseen_device(DeviceKind::webcam), [](const Sample& s, Subset subset) {
        if (!in_native_subset(s, subset)) return false;
        if (subset == Subset::test) return s.device.kind == DeviceKind::webcam;
        return s.device.kind != DeviceKind::webcam;
    });
}

TEST_CASE("cross face-resolution trains on one extreme and tests the other") {
    Rng rng(6);
    const Registry reg = random_registry(rng, 600);

    check_against_rule(reg, make_cross_face_resolution(CrossFaceResolutionVariant::lf_test),
                       [](const Sample& s, Subset subset) {
                           if (!in_native_subset(s, subset) || !s.face_resolution) return false;
                           if (subset == Subset::test)
                               return *s.face_resolution == FaceResolution::large;
                           return *s.face_resolution == FaceResolution::small ||
                                  *s.face_resolution == FaceResolution::medium;
                       });
    check_against_rule(reg, make_cross_face_resolution(CrossFaceResolutionVariant::sf_test),
                       [](const Sample& s, Subset subset) {
                           if (!in_native_subset(s, subset) || !s.face_resolution) return false;
                           if (subset == Subset::test)
                               return *s.face_resolution == FaceResolution::small;
                           return *s.face_resolution == FaceResolution::large ||
                                  *s.face_resolution == FaceResolution::medium;
                       });

    SUBCASE("no large faces reach the lf_test train subset") {
        const auto sel =
            apply_protocol(reg, make_cross_face_resolution(CrossFaceResolutionVariant::lf_test));
        for (std::size_t i : sel.train)
            CHECK(*reg.samples[i].face_resolution != FaceResolution::large);
    }
}

TEST_CASE("cross conditions splits optimal and adverse capture settings") {
    Rng rng(7);
    const Registry reg = random_registry(rng, 800);

    auto optimal = [](const Sample& s) {
        const bool pai_ok = s.label == Label::bona_fide ||
                            s.pai.subtype == PaiSubtype::low ||
                            s.pai.subtype == PaiSubtype::medium ||
                            s.pai.subtype == PaiSubtype::paper;
        return s.device.quality == DeviceQuality::high && pai_ok &&
               (s.lighting == Lighting::controlled || s.lighting == Lighting::no_info);
    };
    auto adverse = [](const Sample& s) {
        const bool pai_ok = s.label == Label::bona_fide ||
                            s.pai.subtype == PaiSubtype::high ||
                            s.pai.subtype == PaiSubtype::silicone ||
                            s.pai.subtype == PaiSubtype::rigid;
        return s.device.quality == DeviceQuality::low && pai_ok &&
               s.lighting == Lighting::adverse;
    };

    check_against_rule(reg, make_cross_conditions(CrossConditionsVariant::test_adverse),
                       [&](const Sample& s, Subset subset) {
                           if (!in_native_subset(s, subset)) return false;
                           return subset == Subset::test ? adverse(s) : optimal(s);
                       });
    check_against_rule(reg, make_cross_conditions(CrossConditionsVariant::test_optimal),
                       [&](const Sample& s, Subset subset) {
                           if (!in_native_subset(s, subset)) return false;
                           return subset == Subset::test ? optimal(s) : adverse(s);
                       });

    SUBCASE("no silicone masks in the test_adverse train subset") {
        const auto sel =
            apply_protocol(reg, make_cross_conditions(CrossConditionsVariant::test_adverse));
        for (std::size_t i : sel.train)
            CHECK(reg.samples[i].pai.subtype != PaiSubtype::silicone);
    }
}

TEST_CASE("degenerate subsets warn instead of failing") {
    // train holds only print attacks plus bona fide; excluding print leaves no attacks
    Registry reg;
    DatasetInfo info;
    info.id = "d";
    info.name = "d";
    reg.datasets.emplace("d", info);
    for (int i = 0; i < 10; ++i) {
        Sample s;
        s.sample_id = "s" + std::to_string(i);
        s.dataset_id = "d";
        s.subject_id = "u" + std::to_string(i);
        const bool attack = i % 2 == 0;
        s.label = attack ? Label::attack : Label::bona_fide;
        s.pai = attack ? PaiCategory{PaiKind::print, PaiSubtype::low}
                       : PaiCategory{PaiKind::none, PaiSubtype::none};
        s.device = {DeviceKind::webcam, DeviceQuality::low};
        s.lighting = Lighting::controlled;
        s.face_resolution = FaceResolution::small;
        s.subset = Subset::train;
        reg.samples.push_back(s);
    }
    std::sort(reg.samples.begin(), reg.samples.end(),
              [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });

    const auto sel = apply_protocol(reg, make_unseen_attack(PaiKind::print));
    CHECK(sel.degenerate());
    bool mentions_train_attacks = false;
    for (const auto& w : sel.warnings)
        mentions_train_attacks |= w.find("train has no attack samples") != std::string::npos;
    CHECK(mentions_train_attacks);
    for (std::size_t i : sel.train) CHECK(reg.samples[i].label == Label::bona_fide);
}

TEST_CASE("apply_protocol ignores registry iteration order") {
    Rng rng(8);
    Registry reg = random_registry(rng, 300);
    const auto spec = make_cross_conditions(CrossConditionsVariant::test_adverse);
    const auto base = apply_protocol(reg, spec);

    Registry shuffled = reg;
    rng.shuffle(shuffled.samples);
    std::sort(shuffled.samples.begin(), shuffled.samples.end(),
              [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });
    const auto again = apply_protocol(shuffled, spec);
    CHECK(base.train == again.train);
    CHECK(base.dev == again.dev);
    CHECK(base.test == again.test);
}

TEST_CASE("selection is always a subset of the registry satisfying its predicate") {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const Registry reg = random_registry(rng, 200);
        for (const auto& spec :
             {make_grandtest(), make_cross_dataset("ds0"), make_one_pai(PaiKind::print),
              make_unseen_attack(PaiKind::mask), make_unseen_device(DeviceKind::digital_camera),
              make_cross_face_resolution(CrossFaceResolutionVariant::sf_test),
              make_cross_conditions(CrossConditionsVariant::test_optimal)}) {
            const auto sel = apply_protocol(reg, spec);
            for (Subset subset : {Subset::train, Subset::dev, Subset::test}) {
                const auto& idx = subset == Subset::train ? sel.train
                                  : subset == Subset::dev ? sel.dev
                                                          : sel.test;
                for (std::size_t i : idx) {
                    REQUIRE(i < reg.samples.size());
                    CHECK(spec.predicate(subset).matches(reg.samples[i]));
                }
                CHECK(std::is_sorted(idx.begin(), idx.end()));
            }
        }
    }
}

TEST_CASE("protocol names resolve to specs") {
    CHECK(protocol_from_name("grandtest").name == "grandtest");
    CHECK(protocol_from_name("cross_dataset:replay_demo").name == "cross_dataset:replay_demo");
    CHECK(protocol_from_name("one_pai:mask").name == "one_pai:mask");
    CHECK(protocol_from_name("unseen_attack:replay").name == "unseen_attack:replay");
    CHECK(protocol_from_name("unseen_device:webcam").name == "unseen_device:webcam");
    CHECK(protocol_from_name("cross_face_resolution:lf_test").name ==
          "cross_face_resolution:lf_test");
    CHECK(protocol_from_name("cross_conditions:test_optimal").name ==
          "cross_conditions:test_optimal");
    CHECK_THROWS_AS(protocol_from_name("one_pai"), Error);       // parameter required
    CHECK_THROWS_AS(protocol_from_name("mystery:x"), Error);
}

TEST_CASE("custom protocol configs parse and serialize") {
    const char* config = R"({
      "name": "print_only_hd",
      "train": {"include": {"pai_kind": ["none", "print"], "device_quality": ["high"]}},
      "dev":   {"include": {"pai_kind": ["none", "print"], "device_quality": ["high"]}},
      "test":  {"include": {"pai_kind": ["none", "print"]},
                "exclude": {"lighting": ["adverse"]}},
      "test_sources": ["train", "dev", "test"]
    })";
    const ProtocolSpec spec = parse_protocol_config(config);
    CHECK(spec.name == "print_only_hd");
    CHECK(spec.train.clauses.size() == 2);
    CHECK(spec.test.clauses.size() == 2);
    CHECK(spec.source_subsets(Subset::test).size() == 3);

    const ProtocolSpec back = parse_protocol_config(protocol_to_json(spec));
    CHECK(back.name == spec.name);
    CHECK(back.source_subsets(Subset::test) == spec.source_subsets(Subset::test));

    Rng rng(10);
    const Registry reg = random_registry(rng, 200);
    const auto a = apply_protocol(reg, spec);
    const auto b = apply_protocol(reg, back);
    CHECK(a.train == b.train);
    CHECK(a.dev == b.dev);
    CHECK(a.test == b.test);
}

TEST_CASE("family enumeration matches registry contents") {
    Rng rng(11);
    const Registry reg = random_registry(rng, 400, 3);
    CHECK(make_protocol_family(reg, "grandtest").size() == 1);
    CHECK(make_protocol_family(reg, "cross_dataset").size() == 3);
    CHECK(make_protocol_family(reg, "cross_face_resolution").size() == 2);
    CHECK(make_protocol_family(reg, "cross_conditions").size() == 2);
    CHECK(make_protocol_family(reg, "one_pai").size() == 3);  // all kinds present at n=400
    CHECK_THROWS_AS(make_protocol_family(reg, "nope"), Error);

    SUBCASE("unknown dataset ids are rejected at validation") {
        CHECK_THROWS_AS(validate_protocol_spec(make_cross_dataset("missing"), reg), Error);
        CHECK_NOTHROW(validate_protocol_spec(make_cross_dataset("ds0"), reg));
    }
}
