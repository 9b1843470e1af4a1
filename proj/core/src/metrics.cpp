#include "padbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "padbench/error.hpp"

namespace padbench {

namespace {

struct SplitScores {
    std::vector<double> bona, attack;  // sorted ascending
};

SplitScores split_scores(const ScoreSet& scores) {
    SplitScores out;
    for (const auto& e : scores) {
        if (!std::isfinite(e.score))
            throw Error(ErrorKind::metric_error,
                        "non-finite score for sample '" + e.sample_id + "'");
        (e.label == Label::bona_fide ? out.bona : out.attack).push_back(e.score);
    }
    std::sort(out.bona.begin(), out.bona.end());
    std::sort(out.attack.begin(), out.attack.end());
    return out;
}

std::vector<double> candidate_thresholds(const SplitScores& s) {
    std::vector<double> all;
    all.reserve(s.bona.size() + s.attack.size());
    all.insert(all.end(), s.bona.begin(), s.bona.end());
    all.insert(all.end(), s.attack.begin(), s.attack.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    std::vector<double> cands;
    cands.push_back(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        cands.push_back((all[i] + all[i + 1]) / 2.0);
    cands.push_back(std::numeric_limits<double>::infinity());
    return cands;
}

// percent of attacks with score >= t
double far_at(const std::vector<double>& attack, double t) {
    const auto accepted =
        attack.end() - std::lower_bound(attack.begin(), attack.end(), t);
    return 100.0 * static_cast<double>(accepted) / static_cast<double>(attack.size());
}

// percent of bona fide with score < t
double frr_at(const std::vector<double>& bona, double t) {
    const auto rejected = std::lower_bound(bona.begin(), bona.end(), t) - bona.begin();
    return 100.0 * static_cast<double>(rejected) / static_cast<double>(bona.size());
}

}  // namespace

EerResult eer_threshold(const ScoreSet& dev) {
    const SplitScores s = split_scores(dev);
    if (s.bona.empty() || s.attack.empty())
        throw Error(ErrorKind::metric_error,
                    "EER needs both bona fide and attack scores (got " +
                        std::to_string(s.bona.size()) + " bona fide, " +
                        std::to_string(s.attack.size()) + " attacks)");

    EerResult best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double t : candidate_thresholds(s)) {
        const double far = far_at(s.attack, t);
        const double frr = frr_at(s.bona, t);
        const double gap = std::abs(far - frr);
        // Candidates are visited in ascending order, so strict improvement
        // implements the "smaller gap, then smaller threshold" tie rule.
        if (gap < best_gap) {
            best_gap = gap;
            best = EerResult{t, (far + frr) / 2.0, far, frr};
        }
    }
    return best;
}

TestMetrics test_metrics(const ScoreSet& test, double threshold) {
    TestMetrics m;
    m.threshold = threshold;

    std::size_t bona_total = 0, bona_rejected = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_pai;  // kind -> {accepted, total}
    std::size_t attack_total = 0, attack_accepted = 0;
    for (const auto& e : test) {
        if (!std::isfinite(e.score))
            throw Error(ErrorKind::metric_error,
                        "non-finite score for sample '" + e.sample_id + "'");
        if (e.label == Label::bona_fide) {
            ++bona_total;
            if (e.score < threshold) ++bona_rejected;
        } else {
            auto& [accepted, total] = per_pai[std::string(to_string(e.pai_kind))];
            ++total;
            ++attack_total;
            if (e.score >= threshold) {
                ++accepted;
                ++attack_accepted;
            }
        }
    }
    if (bona_total == 0)
        throw Error(ErrorKind::metric_error, "test metrics need bona fide samples");

    m.counts.bona_fide = bona_total;
    m.counts.attacks = attack_total;
    m.bpcer = 100.0 * static_cast<double>(bona_rejected) / static_cast<double>(bona_total);

    if (attack_total > 0) {
        double worst = 0.0;
        for (const auto& [kind, counts] : per_pai) {
            const double apcer_k =
                100.0 * static_cast<double>(counts.first) / static_cast<double>(counts.second);
            m.apcer_by_pai[kind] = apcer_k;
            worst = std::max(worst, apcer_k);
        }
        m.apcer = worst;
        m.acer = (*m.apcer + m.bpcer) / 2.0;
        m.far_pooled =
            100.0 * static_cast<double>(attack_accepted) / static_cast<double>(attack_total);
        m.hter = (*m.far_pooled + m.bpcer) / 2.0;
    }
    return m;
}

bool one_pai_equivalence_check(const EvaluationReport& report) {
    const std::size_t kinds = report.test.apcer_by_pai.size();
    if (kinds != 1)
        throw Error(ErrorKind::not_applicable,
                    "one-PAI equivalence needs exactly one attack kind in test, got " +
                        std::to_string(kinds));
    if (!report.test.hter || !report.test.acer)
        throw Error(ErrorKind::not_applicable, "report has no test error rates");
    return std::abs(*report.test.hter - *report.test.acer) < 1e-9;
}

std::vector<DetPoint> det_points(const ScoreSet& scores) {
    const SplitScores s = split_scores(scores);
    if (s.bona.empty() || s.attack.empty())
        throw Error(ErrorKind::metric_error, "DET sweep needs both classes");
    std::vector<DetPoint> points;
    for (double t : candidate_thresholds(s))
        points.push_back(DetPoint{t, far_at(s.attack, t), frr_at(s.bona, t)});
    return points;
}

}  // namespace padbench
