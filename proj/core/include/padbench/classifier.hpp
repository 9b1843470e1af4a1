#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padbench/features.hpp"
#include "padbench/taxonomy.hpp"

namespace padbench {

inline double default_gamma(std::size_t dim) { return 1.0 / static_cast<double>(dim); }

// exp(-gamma * ||x - y||^2). Throws Error{data_error} on dimension mismatch.
double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y, double gamma);
double rbf_kernel(const std::vector<float>& x, const std::vector<float>& y, double gamma);

struct SvmConfig {
    double C = 1.0;
    std::optional<double> gamma;  // default 1/dim
    double tol = 1e-3;            // KKT tolerance
    long max_iterations = 20'000'000;  // total pair updates before giving up
};

struct TrainingStats {
    double dual_objective = 0.0;
    double kkt_residual = 0.0;
    long iterations = 0;
};

// RBF-kernel two-class SVM. Bona fide trains as +1, attack as -1, so higher
// decision values mean more bona fide. Features are standardized per
// dimension with train-set mean/scale before the kernel; support vectors
// are stored in that standardized space.
struct TrainedModel {
    std::size_t dim = 0;
    double gamma = 0.0;
    double C = 1.0;
    double bias = 0.0;
    std::vector<double> mean;   // per-dimension train mean
    std::vector<double> scale;  // per-dimension train stddev (1 where zero)
    std::vector<std::vector<double>> support_vectors;  // standardized
    std::vector<double> dual_coefficients;             // alpha_i * y_i
    TrainingStats stats;

    // Decision value sum_i alpha_i y_i K(sv_i, x') + b for the standardized
    // query x'. Throws Error{data_error} on dimension mismatch.
    double score(const std::vector<float>& x) const;
    double score(const std::vector<double>& x) const;
};

// Deterministic SMO dual optimization. The train set is canonicalized
// (sorted by feature bytes, then label) before optimizing, so the result is
// invariant to input permutation. Throws Error{training_error} when only
// one class is present or the iteration cap is hit, Error{data_error} on
// non-finite features.
TrainedModel train_svm(const std::vector<std::vector<float>>& features,
                       const std::vector<Label>& labels, const SvmConfig& cfg = {});

// Versioned binary model file (see README).
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace padbench
