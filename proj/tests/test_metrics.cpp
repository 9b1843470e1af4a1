#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "padbench/metrics.hpp"
#include "padbench/report.hpp"
#include "padbench/rng.hpp"

using namespace padbench;

namespace {

ScoreSet make_scores(const std::vector<double>& bona, const std::vector<double>& attack,
                     PaiKind kind = PaiKind::print) {
    ScoreSet s;
    int i = 0;
    for (double v : bona)
        s.push_back({"b" + std::to_string(i++), v, Label::bona_fide, PaiKind::none});
    for (double v : attack) s.push_back({"a" + std::to_string(i++), v, Label::attack, kind});
    return s;
}

// Independent of the implementation: dumb counting over the same candidate
// thresholds (midpoints of adjacent distinct scores plus the infinities).
EerResult eer_sweep_oracle(const ScoreSet& scores) {
    std::vector<double> all, bona, attack;
    for (const auto& e : scores) {
        all.push_back(e.score);
        (e.label == Label::bona_fide ? bona : attack).push_back(e.score);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<double> cands{-std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + 1 < all.size(); ++i) cands.push_back((all[i] + all[i + 1]) / 2.0);
    cands.push_back(std::numeric_limits<double>::infinity());

    EerResult best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double t : cands) {
        std::size_t fa = 0, fr = 0;
        for (double v : attack) fa += v >= t;
        for (double v : bona) fr += v < t;
        const double far = 100.0 * static_cast<double>(fa) / static_cast<double>(attack.size());
        const double frr = 100.0 * static_cast<double>(fr) / static_cast<double>(bona.size());
        if (std::abs(far - frr) < best_gap) {
            best_gap = std::abs(far - frr);
            best = {t, (far + frr) / 2.0, far, frr};
        }
    }
    return best;
}

}  // namespace

TEST_CASE("EER on perfectly separated scores") {
    const auto r = eer_threshold(make_scores({2, 3, 4}, {-4, -3, -2}));
    CHECK(r.eer == 0.0);
    // tie rule: -2 and 2 are adjacent, midpoint 0 is the smallest zero-gap candidate
    CHECK(r.threshold == doctest::Approx(0.0));
}

TEST_CASE("EER at chance level for interleaved scores") {
    const auto r = eer_threshold(make_scores({0, 2, 4, 6}, {1, 3, 5, 7}));
    CHECK(r.eer == doctest::Approx(50.0));
}

TEST_CASE("EER needs both classes") {
    CHECK_THROWS_AS(eer_threshold(make_scores({1, 2}, {})), Error);
    CHECK_THROWS_AS(eer_threshold(make_scores({}, {1, 2})), Error);
}

TEST_CASE("EER equals the exhaustive sweep oracle on random sets") {
    Rng rng(1234);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t nb = 1 + rng.below(40);
        const std::size_t na = 1 + rng.below(40);
        std::vector<double> bona, attack;
        const bool ties = rng.below(2) == 0;
        for (std::size_t i = 0; i < nb; ++i)
            bona.push_back(ties ? static_cast<double>(rng.below(10)) : rng.normal(1.0, 1.0));
        for (std::size_t i = 0; i < na; ++i)
            attack.push_back(ties ? static_cast<double>(rng.below(10)) : rng.normal(-1.0, 1.0));
        const auto scores = make_scores(bona, attack);
        const auto got = eer_threshold(scores);
        const auto want = eer_sweep_oracle(scores);
        CHECK(got.eer == doctest::Approx(want.eer).epsilon(1e-12));
        CHECK(std::abs(got.far - got.frr) == doctest::Approx(std::abs(want.far - want.frr)).epsilon(1e-12));
        CHECK(got.threshold == want.threshold);
    }
}

TEST_CASE("test metrics formula regression against known rate pairs") {
    // 10000 attacks of one kind, 3409 accepted; 10000 bona fide, 1641 rejected.
    ScoreSet s;
    for (int i = 0; i < 10000; ++i)
        s.push_back({"a" + std::to_string(i), i < 3409 ? 1.0 : -1.0, Label::attack, PaiKind::print});
    for (int i = 0; i < 10000; ++i)
        s.push_back({"b" + std::to_string(i), i < 1641 ? -1.0 : 1.0, Label::bona_fide, PaiKind::none});
    const TestMetrics m = test_metrics(s, 0.0);
    CHECK(format_rate(*m.apcer) == "34.09");
    CHECK(format_rate(m.bpcer) == "16.41");
    CHECK(format_rate(*m.acer) == "25.25");

    // second pair: APCER 13.86, BPCER 6.58 -> ACER 10.22
    ScoreSet s2;
    for (int i = 0; i < 10000; ++i)
        s2.push_back({"a" + std::to_string(i), i < 1386 ? 1.0 : -1.0, Label::attack, PaiKind::replay});
    for (int i = 0; i < 10000; ++i)
        s2.push_back({"b" + std::to_string(i), i < 658 ? -1.0 : 1.0, Label::bona_fide, PaiKind::none});
    const TestMetrics m2 = test_metrics(s2, 0.0);
    CHECK(format_rate(*m2.apcer) == "13.86");
    CHECK(format_rate(m2.bpcer) == "6.58");
    CHECK(format_rate(*m2.acer) == "10.22");
}

TEST_CASE("all rates zero when every score is on the right side") {
    const auto m = test_metrics(make_scores({1, 2, 3}, {-1, -2, -3}), 0.0);
    CHECK(*m.hter == 0.0);
    CHECK(*m.acer == 0.0);
    CHECK(m.bpcer == 0.0);
    CHECK(*m.apcer == 0.0);
}

TEST_CASE("metrics equal a brute-force counting oracle") {
    Rng rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        ScoreSet s;
        const std::size_t n = 20 + rng.below(200);
        std::size_t bona_n = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool bona = rng.below(2) == 0;
            bona_n += bona;
            const PaiKind kind =
                bona ? PaiKind::none
                     : std::vector<PaiKind>{PaiKind::print, PaiKind::replay,
                                            PaiKind::mask}[rng.below(3)];
            s.push_back({"s" + std::to_string(i), rng.normal(0, 2),
                         bona ? Label::bona_fide : Label::attack, kind});
        }
        if (bona_n == 0 || bona_n == n) continue;
        const double t = rng.normal(0, 1);
        const TestMetrics m = test_metrics(s, t);

        std::map<std::string, std::pair<std::size_t, std::size_t>> per;
        std::size_t br = 0, bt = 0, aa = 0, at = 0;
        for (const auto& e : s) {
            if (e.label == Label::bona_fide) {
                ++bt;
                br += e.score < t;
            } else {
                ++at;
                aa += e.score >= t;
                auto& [acc, tot] = per[std::string(to_string(e.pai_kind))];
                tot += 1;
                acc += e.score >= t;
            }
        }
        CHECK(m.bpcer == doctest::Approx(100.0 * br / bt).epsilon(1e-12));
        CHECK(*m.far_pooled == doctest::Approx(100.0 * aa / at).epsilon(1e-12));
        double worst = 0.0;
        for (const auto& [kind, counts] : per) {
            const double apcer_k = 100.0 * counts.first / counts.second;
            CHECK(m.apcer_by_pai.at(kind) == doctest::Approx(apcer_k).epsilon(1e-12));
            worst = std::max(worst, apcer_k);
        }
        CHECK(*m.apcer == doctest::Approx(worst).epsilon(1e-12));
        CHECK(*m.acer == (*m.apcer + m.bpcer) / 2.0);
        CHECK(*m.hter == (*m.far_pooled + m.bpcer) / 2.0);
        for (const auto& [kind, apcer_k] : m.apcer_by_pai) CHECK(*m.apcer >= apcer_k);
    }
}

TEST_CASE("raising the threshold is monotone in BPCER and APCER") {
    Rng rng(88);
    ScoreSet s;
    for (int i = 0; i < 200; ++i) {
        const bool bona = i % 2 == 0;
        s.push_back({"s" + std::to_string(i), rng.normal(bona ? 1 : -1, 1.5),
                     bona ? Label::bona_fide : Label::attack,
                     bona ? PaiKind::none : PaiKind::mask});
    }
    double prev_bpcer = -1.0, prev_apcer = 101.0;
    for (double t = -5.0; t <= 5.0; t += 0.25) {
        const auto m = test_metrics(s, t);
        CHECK(m.bpcer >= prev_bpcer);
        CHECK(*m.apcer <= prev_apcer);
        prev_bpcer = m.bpcer;
        prev_apcer = *m.apcer;
    }
}

TEST_CASE("metrics are invariant under strictly increasing score transforms") {
    Rng rng(9);
    ScoreSet s;
    for (int i = 0; i < 120; ++i) {
        const bool bona = i % 3 == 0;
        s.push_back({"s" + std::to_string(i), rng.normal(bona ? 0.5 : -0.5, 1),
                     bona ? Label::bona_fide : Label::attack,
                     bona ? PaiKind::none : PaiKind::replay});
    }
    auto warp = [](double v) { return std::tanh(v / 4.0) * 3.0 + v / 10.0; };  // strictly increasing
    ScoreSet warped = s;
    for (auto& e : warped) e.score = warp(e.score);

    const auto base = eer_threshold(s);
    const auto transformed = eer_threshold(warped);
    CHECK(transformed.eer == doctest::Approx(base.eer).epsilon(1e-12));

    // comparisons against the transformed threshold count the same samples
    const auto m = test_metrics(s, base.threshold);
    const auto wm = test_metrics(warped, warp(base.threshold));
    CHECK(wm.bpcer == m.bpcer);
    CHECK(*wm.apcer == *m.apcer);
    CHECK(*wm.acer == *m.acer);
    CHECK(*wm.hter == *m.hter);
}

TEST_CASE("single-PAI reports make HTER and ACER coincide") {
    Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        ScoreSet s;
        const std::size_t nb = 3 + rng.below(50), na = 3 + rng.below(50);
        for (std::size_t i = 0; i < nb; ++i)
            s.push_back({"b" + std::to_string(i), rng.normal(1, 1), Label::bona_fide, PaiKind::none});
        for (std::size_t i = 0; i < na; ++i)
            s.push_back({"a" + std::to_string(i), rng.normal(-1, 1), Label::attack, PaiKind::mask});
        EvaluationReport report;
        report.test = test_metrics(s, rng.normal(0, 1));
        CHECK(one_pai_equivalence_check(report));
        CHECK(std::abs(*report.test.hter - *report.test.acer) < 1e-9);
    }
}

TEST_CASE("multi-PAI reports are not applicable to the one-PAI identity") {
    ScoreSet s = make_scores({1, 2}, {-1, -2}, PaiKind::print);
    s.push_back({"extra", 3.0, Label::attack, PaiKind::mask});  // accepted -> APCER differs per kind
    EvaluationReport report;
    report.test = test_metrics(s, 0.0);
    REQUIRE(report.test.apcer_by_pai.size() == 2);
    try {
        one_pai_equivalence_check(report);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_applicable);
    }
}

TEST_CASE("test metrics require bona fide entries") {
    CHECK_THROWS_AS(test_metrics(make_scores({}, {1, 2, 3}), 0.0), Error);
}

TEST_CASE("degenerate test set without attacks keeps BPCER only") {
    const auto m = test_metrics(make_scores({1, -1}, {}), 0.0);
    CHECK(m.bpcer == doctest::Approx(50.0));
    CHECK_FALSE(m.apcer.has_value());
    CHECK_FALSE(m.hter.has_value());
}

TEST_CASE("DET sweep points bracket the operating range") {
    const auto points = det_points(make_scores({1, 2, 3}, {-3, -2, -1}));
    REQUIRE(points.size() >= 2);
    CHECK(points.front().far == doctest::Approx(100.0));  // -inf accepts everything
    CHECK(points.front().frr == doctest::Approx(0.0));
    CHECK(points.back().far == doctest::Approx(0.0));  // +inf rejects everything
    CHECK(points.back().frr == doctest::Approx(100.0));
}

TEST_CASE("report JSON round-trips") {
    EvaluationReport r;
    r.protocol = "unseen_attack:replay";
    r.extractor_id = "color_lbp";
    r.config_hash = 0x1234abcd5678ef00ULL;
    r.threshold = 0.25;
    r.dev_eer = 1.5;
    r.test = test_metrics(make_scores({1, 2, 3}, {-1, -2, 0.5}, PaiKind::replay), 0.25);
    r.train_counts = {10, 20};
    r.dev_counts = {5, 10};
    r.test_counts = r.test.counts;
    r.warnings = {"something odd"};
    r.degenerate = true;

    const std::string json = report_to_json(r);
    const EvaluationReport back = report_from_json(json);
    CHECK(back.protocol == r.protocol);
    CHECK(back.config_hash == r.config_hash);
    CHECK(back.threshold == r.threshold);
    CHECK(*back.test.acer == *r.test.acer);
    CHECK(back.test.apcer_by_pai == r.test.apcer_by_pai);
    CHECK(back.warnings == r.warnings);
    CHECK(back.degenerate);
    // serialization is deterministic
    CHECK(report_to_json(back) == json);
}
