#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kinemotion/linear_svm.hpp"

namespace kinemotion {

/// 2^-6 .. 2^7
std::vector<double> default_c_grid();

/// Standardizer plus linear SVM, applied to raw feature rows.
struct LinearSvmPipeline {
    Standardizer scaler;
    LinearModel model;

    double probability(std::span<const double> raw_row) const;
};

struct RfecvOptions {
    std::vector<double> c_grid = default_c_grid();
    int selection_folds = 5;   // feature-count selection
    int tuning_folds = 5;      // C selection
    int tuning_repeats = 6;
    SvmOptions svm;
    std::uint64_t seed = 0;
};

struct CandidateScore {
    double C = 0.0;
    std::size_t feature_count = 0;
    double selection_auc = 0.0;          // mean CV AUC at the chosen count
    double tuning_auc = 0.0;             // mean repeated-CV AUC of (C, count)
    std::vector<std::size_t> features;   // survivors of RFE on the whole partition
};

struct RfecvResult {
    std::vector<std::size_t> selected_features;
    double best_C = 0.0;
    std::vector<CandidateScore> candidates;  // one per C, grid order
    LinearSvmPipeline pipeline;              // refit on the whole partition
};

/// Elimination order of recursive feature elimination, least important first;
/// the last element is the final survivor. Expects standardized rows.
std::vector<std::size_t> rfe_ranking(const Matrix& x, std::span<const int> labels, double C, const SvmOptions& opts);

/// Mean held-out AUC for every feature count 1..d under stratified k-fold CV;
/// element [k-1] scores keeping k features. Standardization is refit per fold.
std::vector<double> rfe_cv_scores(const Matrix& x, std::span<const int> labels, double C, int folds,
                                  std::uint64_t seed, const SvmOptions& opts);

/// Nested selection: for each C the feature count maximising CV AUC (ties to
/// fewer features), then C by repeated CV AUC (ties to the smaller C), then
/// a refit on all rows.
RfecvResult rfecv_select(const Matrix& x, std::span<const int> labels, const RfecvOptions& opts = {});

}  // namespace kinemotion
