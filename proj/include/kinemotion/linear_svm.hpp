#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinemotion/matrix.hpp"

namespace kinemotion {

/// Per-feature z-scoring fitted on training rows only.
/// Features with zero spread map to 0.
class Standardizer {
public:
    Standardizer() = default;
    Standardizer(std::vector<double> mean, std::vector<double> sd) : mean_(std::move(mean)), sd_(std::move(sd)) {}

    static Standardizer fit(const Matrix& x);

    Matrix transform(const Matrix& x) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& sd() const { return sd_; }

private:
    std::vector<double> mean_;
    std::vector<double> sd_;  // 0 marks a constant feature
};

struct SvmOptions {
    double tolerance = 1e-6;              // maximal KKT violation at exit
    std::size_t max_iterations = 100000;
};

/// Decision function w . x[selected] + bias.
struct LinearModel {
    std::vector<double> weights;                 // one per selected feature
    double bias = 0.0;
    double C = 1.0;
    std::vector<std::size_t> selected_features;  // column indices into the full row
    std::size_t iterations = 0;

    double decision(std::span<const double> x) const;
};

/// Soft-margin linear SVM, min 0.5 |w|^2 + C sum hinge, with an unregularised
/// bias, solved in the dual by SMO. Labels are 0/1.
/// Throws DegenerateError when only one class is present.
LinearModel train_linear_svm(const Matrix& x, std::span<const int> labels, double C, const SvmOptions& opts = {});

/// Logistic squashing of the margin.
double svm_probability(const LinearModel& model, std::span<const double> x);

/// Primal objective of `model` on (x, labels).
double svm_objective(const LinearModel& model, const Matrix& x, std::span<const int> labels);

/// Dual solver that keeps its Gram matrix and multipliers between calls, so a
/// feature can be dropped and the problem re-solved from the previous optimum.
class DualSvmSolver {
public:
    DualSvmSolver(const Matrix& x, std::span<const int> labels, double C);

    /// Re-solves from the current multipliers. Returns iterations used.
    std::size_t solve(const SvmOptions& opts);

    /// Removes a column from the kernel; `column` indexes the original matrix.
    void remove_feature(std::size_t column);

    const std::vector<std::size_t>& active_features() const { return active_; }

    /// Weights aligned with active_features().
    std::vector<double> weights() const;
    double bias() const;
    LinearModel model() const;

private:
    bool at_upper(std::size_t i) const { return alpha_[i] >= C_; }
    bool at_lower(std::size_t i) const { return alpha_[i] <= 0.0; }
    void rebuild_gradient();

    const Matrix* x_;
    std::vector<double> y_;      // +1 / -1
    double C_;
    std::size_t n_;
    std::vector<double> q_;      // n x n, y_i y_j <x_i, x_j>
    std::vector<double> alpha_;
    std::vector<double> grad_;   // Q alpha - 1
    std::vector<std::size_t> active_;
    std::size_t iterations_ = 0;
};

}  // namespace kinemotion
