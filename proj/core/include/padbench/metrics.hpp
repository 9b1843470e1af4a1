#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padbench/taxonomy.hpp"

namespace padbench {

// One scored presentation. pai_kind is `none` for bona fide entries.
struct ScoreEntry {
    std::string sample_id;
    double score = 0.0;
    Label label = Label::bona_fide;
    PaiKind pai_kind = PaiKind::none;
};

using ScoreSet = std::vector<ScoreEntry>;

// Repo-wide convention: score >= threshold is accepted as bona fide.
// FAR(t) = fraction of attack scores >= t, FRR(t) = fraction of bona fide
// scores < t. All rates are percentages in [0, 100].

struct EerResult {
    double threshold = 0.0;
    double eer = 0.0;  // percent, (FAR + FRR) / 2 at the chosen threshold
    double far = 0.0;
    double frr = 0.0;
};

// Picks the threshold minimizing |FAR - FRR| over the candidate set
// (midpoints of adjacent distinct scores plus -inf/+inf). Ties break
// toward the smaller |FAR - FRR|, then the smaller threshold. Throws
// Error{metric_error} when either class is missing.
EerResult eer_threshold(const ScoreSet& dev);

struct SubsetCounts {
    std::size_t bona_fide = 0;
    std::size_t attacks = 0;
};

struct TestMetrics {
    double threshold = 0.0;
    double bpcer = 0.0;                      // % bona fide below threshold
    std::map<std::string, double> apcer_by_pai;  // % of each PAI kind accepted
    std::optional<double> apcer;             // max over PAI kinds
    std::optional<double> acer;              // (APCER + BPCER) / 2
    std::optional<double> far_pooled;        // % of all attacks accepted
    std::optional<double> hter;              // (pooled FAR + BPCER) / 2
    SubsetCounts counts;
};

// ISO 30107-3 style error rates of a test score set at a fixed threshold.
// Requires bona fide entries; attack-dependent rates stay empty when the
// set has no attacks (degenerate protocols).
TestMetrics test_metrics(const ScoreSet& test, double threshold);

struct EvaluationReport {
    std::string protocol;
    std::string extractor_id;
    std::uint64_t config_hash = 0;
    std::optional<double> threshold;
    std::optional<double> dev_eer;  // percent
    TestMetrics test;
    SubsetCounts train_counts, dev_counts, test_counts;
    std::vector<std::string> warnings;
    bool degenerate = false;
};

// True when HTER and ACER coincide (single-PAI test sets make pooled FAR
// equal APCER_max). Throws Error{not_applicable} when the report covers
// more than one PAI kind.
bool one_pai_equivalence_check(const EvaluationReport& report);

struct DetPoint {
    double threshold = 0.0;
    double far = 0.0;  // percent
    double frr = 0.0;  // percent
};

// (FAR, FRR) sweep over the same candidate thresholds eer_threshold uses.
std::vector<DetPoint> det_points(const ScoreSet& scores);

}  // namespace padbench
