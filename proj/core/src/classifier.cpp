#include "padbench/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

namespace padbench {

namespace {

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// Platt-style SMO with deterministic heuristics: candidate i1 scans in
// index order, i2 maximizes |E1 - E2| with smallest-index tie-breaks.
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
              double C, double gamma, double tol, long max_iterations)
        : x_(x), y_(y), n_(x.size()), C_(C), gamma_(gamma), tol_(tol),
          max_iterations_(max_iterations), alpha_(n_, 0.0), error_(n_, 0.0),
          kernel_(n_ * n_, 0.0) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                const double k =
                    std::exp(-gamma_ * squared_distance(x_[i].data(), x_[j].data(), x_[i].size()));
                kernel_[i * n_ + j] = k;
                kernel_[j * n_ + i] = k;
            }
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];  // f(x) starts at 0
    }

    void solve() {
        bool examine_all = true;
        for (;;) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!examine_all && !is_free(alpha_[i])) continue;
                changed += examine(i);
                if (iterations_ > max_iterations_)
                    throw Error(ErrorKind::training_error,
                                "SMO did not converge within the iteration cap");
            }
            if (examine_all) {
                if (changed == 0) break;
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return bias_; }
    long iterations() const { return iterations_; }

    double dual_objective() const {
        double obj = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            obj += alpha_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                obj -= 0.5 * alpha_[i] * alpha_[j] * y_[i] * y_[j] * kernel_[i * n_ + j];
            }
        }
        return obj;
    }

    // Worst violation of the KKT conditions, with decision values recomputed
    // from scratch so incremental drift cannot mask a violation.
    double kkt_residual() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double f = bias_;
            for (std::size_t j = 0; j < n_; ++j)
                if (alpha_[j] != 0.0) f += alpha_[j] * y_[j] * kernel_[j * n_ + i];
            const double margin = y_[i] * f;
            if (alpha_[i] <= 0.0)
                worst = std::max(worst, 1.0 - margin);
            else if (alpha_[i] >= C_)
                worst = std::max(worst, margin - 1.0);
            else
                worst = std::max(worst, std::abs(margin - 1.0));
        }
        return worst;
    }

private:
    bool is_free(double a) const { return a > 0.0 && a < C_; }

    bool examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double e2 = error_[i2];
        const double r2 = e2 * y2;
        const bool violates = (r2 < -tol_ && a2 < C_) || (r2 > tol_ && a2 > 0.0);
        if (!violates) return false;

        // Second-choice heuristic over free points, by |E1 - E2|.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == i2 || !is_free(alpha_[i])) continue;
            const double gap = std::abs(error_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return true;
        for (std::size_t i = 0; i < n_; ++i)
            if (i != i2 && is_free(alpha_[i]) && take_step(i, i2)) return true;
        for (std::size_t i = 0; i < n_; ++i)
            if (i != i2 && !is_free(alpha_[i]) && take_step(i, i2)) return true;
        return false;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        ++iterations_;
        const double y1 = y_[i1], y2 = y_[i2];
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const double e1 = error_[i1], e2 = error_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(C_, C_ + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - C_);
            hi = std::min(C_, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = kernel_[i1 * n_ + i1];
        const double k12 = kernel_[i1 * n_ + i2];
        const double k22 = kernel_[i2 * n_ + i2];
        const double eta = k11 + k22 - 2.0 * k12;
        if (eta <= 0.0) return false;  // PSD degeneracy (duplicate points)

        double a2_new = a2 + y2 * (e1 - e2) / eta;
        a2_new = std::clamp(a2_new, lo, hi);
        if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
        const double a1_new = a1 + s * (a2 - a2_new);

        const double b1 = bias_ - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12;
        const double b2 = bias_ - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22;
        double new_bias;
        if (a1_new > 0.0 && a1_new < C_)
            new_bias = b1;
        else if (a2_new > 0.0 && a2_new < C_)
            new_bias = b2;
        else
            new_bias = (b1 + b2) / 2.0;

        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        for (std::size_t i = 0; i < n_; ++i)
            error_[i] += d1 * kernel_[i1 * n_ + i] + d2 * kernel_[i2 * n_ + i] +
                         (new_bias - bias_);
        bias_ = new_bias;
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<double>& y_;
    std::size_t n_;
    double C_, gamma_, tol_;
    long max_iterations_;
    std::vector<double> alpha_, error_;
    std::vector<double> kernel_;
    double bias_ = 0.0;
    long iterations_ = 0;
};

}  // namespace

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y, double gamma) {
    if (x.size() != y.size())
        throw Error(ErrorKind::data_error, "RBF kernel inputs differ in dimension");
    if (!(gamma > 0.0)) throw Error(ErrorKind::data_error, "RBF gamma must be positive");
    return std::exp(-gamma * squared_distance(x.data(), y.data(), x.size()));
}

double rbf_kernel(const std::vector<float>& x, const std::vector<float>& y, double gamma) {
    std::vector<double> xd(x.begin(), x.end()), yd(y.begin(), y.end());
    return rbf_kernel(xd, yd, gamma);
}

double TrainedModel::score(const std::vector<double>& x) const {
    if (x.size() != dim) throw Error(ErrorKind::data_error, "score input has wrong dimension");
    std::vector<double> q(dim);
    for (std::size_t i = 0; i < dim; ++i) q[i] = (x[i] - mean[i]) / scale[i];
    double value = bias;
    for (std::size_t s = 0; s < support_vectors.size(); ++s)
        value += dual_coefficients[s] *
                 std::exp(-gamma * squared_distance(support_vectors[s].data(), q.data(), dim));
    return value;
}

double TrainedModel::score(const std::vector<float>& x) const {
    return score(std::vector<double>(x.begin(), x.end()));
}

TrainedModel train_svm(const std::vector<std::vector<float>>& features,
                       const std::vector<Label>& labels, const SvmConfig& cfg) {
    if (features.size() != labels.size() || features.empty())
        throw Error(ErrorKind::training_error, "features and labels must be non-empty and aligned");
    const std::size_t n = features.size();
    const std::size_t dim = features.front().size();
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (features[i].size() != dim)
            throw Error(ErrorKind::data_error, "train vectors differ in dimension");
        for (float v : features[i])
            if (!std::isfinite(v))
                throw Error(ErrorKind::data_error, "non-finite feature value in train set");
        (labels[i] == Label::bona_fide ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw Error(ErrorKind::training_error, "training needs both bona fide and attack samples");

    // Canonical order: sort by feature bytes then label. Training is then
    // exactly permutation-invariant.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (features[a] != features[b]) return features[a] < features[b];
        return labels[a] < labels[b];
    });

    TrainedModel model;
    model.dim = dim;
    model.C = cfg.C;
    model.gamma = cfg.gamma.value_or(default_gamma(dim));
    if (!(model.gamma > 0.0))
        throw Error(ErrorKind::training_error, "gamma must be positive");

    // Standardization statistics from the train set only.
    model.mean.assign(dim, 0.0);
    model.scale.assign(dim, 1.0);
    for (const auto& f : features)
        for (std::size_t d = 0; d < dim; ++d) model.mean[d] += f[d];
    for (std::size_t d = 0; d < dim; ++d) model.mean[d] /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (const auto& f : features)
        for (std::size_t d = 0; d < dim; ++d) {
            const double dv = f[d] - model.mean[d];
            var[d] += dv * dv;
        }
    for (std::size_t d = 0; d < dim; ++d) {
        const double sd = std::sqrt(var[d] / static_cast<double>(n));
        model.scale[d] = sd > 0.0 ? sd : 1.0;
    }

    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = features[order[i]];
        for (std::size_t d = 0; d < dim; ++d)
            x[i][d] = (f[d] - model.mean[d]) / model.scale[d];
        y[i] = labels[order[i]] == Label::bona_fide ? 1.0 : -1.0;
    }

    SmoSolver solver(x, y, cfg.C, model.gamma, cfg.tol, cfg.max_iterations);
    solver.solve();

    model.bias = solver.bias();
    model.stats.dual_objective = solver.dual_objective();
    model.stats.kkt_residual = solver.kkt_residual();
    model.stats.iterations = solver.iterations();
    for (std::size_t i = 0; i < n; ++i) {
        if (solver.alpha()[i] <= 0.0) continue;
        model.support_vectors.push_back(x[i]);
        model.dual_coefficients.push_back(solver.alpha()[i] * y[i]);
    }
    return model;
}

namespace {

constexpr char kModelMagic[4] = {'P', 'B', 'S', 'V'};
constexpr std::uint32_t kModelVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw Error(ErrorKind::parse_error, "model '" + path + "' is truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in, const std::string& path) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw Error(ErrorKind::parse_error, "model '" + path + "' is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::istream& in, const std::string& path) {
    const std::uint64_t bits = read_u64(in, path);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write model '" + path + "'");
    out.write(kModelMagic, 4);
    write_u32(out, kModelVersion);
    write_u64(out, model.dim);
    write_u64(out, model.support_vectors.size());
    write_f64(out, model.gamma);
    write_f64(out, model.C);
    write_f64(out, model.bias);
    write_f64(out, model.stats.dual_objective);
    write_f64(out, model.stats.kkt_residual);
    write_u64(out, static_cast<std::uint64_t>(model.stats.iterations));
    for (double v : model.mean) write_f64(out, v);
    for (double v : model.scale) write_f64(out, v);
    for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
        write_f64(out, model.dual_coefficients[s]);
        for (double v : model.support_vectors[s]) write_f64(out, v);
    }
    if (!out) throw Error(ErrorKind::io_error, "short write on model '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open model '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
        throw Error(ErrorKind::parse_error, "model '" + path + "' has a bad magic");
    if (read_u32(in, path) != kModelVersion)
        throw Error(ErrorKind::parse_error, "model '" + path + "' has an unsupported version");
    TrainedModel model;
    model.dim = read_u64(in, path);
    const std::uint64_t n_sv = read_u64(in, path);
    model.gamma = read_f64(in, path);
    model.C = read_f64(in, path);
    model.bias = read_f64(in, path);
    model.stats.dual_objective = read_f64(in, path);
    model.stats.kkt_residual = read_f64(in, path);
    model.stats.iterations = static_cast<long>(read_u64(in, path));
    model.mean.resize(model.dim);
    model.scale.resize(model.dim);
    for (auto& v : model.mean) v = read_f64(in, path);
    for (auto& v : model.scale) v = read_f64(in, path);
    model.support_vectors.resize(n_sv, std::vector<double>(model.dim));
    model.dual_coefficients.resize(n_sv);
    for (std::uint64_t s = 0; s < n_sv; ++s) {
        model.dual_coefficients[s] = read_f64(in, path);
        for (auto& v : model.support_vectors[s]) v = read_f64(in, path);
    }
    return model;
}

}  // namespace padbench
