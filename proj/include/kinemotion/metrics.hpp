#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kinemotion {

/// Rank-based (Mann-Whitney) ROC-AUC for labels in {0, 1}; ties count one half.
/// Throws DegenerateError if only one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ConfusionMetrics {
    double accuracy = 0.0;
    double tpr = 0.0;  // NaN when no positives
    double tnr = 0.0;  // NaN when no negatives
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;

    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return tn + fp; }
};

/// Probabilities at or above the threshold are predicted positive.
ConfusionMetrics confusion_metrics(std::span<const double> probabilities, std::span<const int> labels,
                                   double threshold = 0.5);

/// Mean over the tasks a subject completed; absent tasks are skipped.
/// Throws EmptyInputError when no task probability is present.
double ensemble_vote(std::span<const std::optional<double>> task_probabilities);
double ensemble_vote(std::span<const double> task_probabilities);

/// Mean over all windows and augmented copies of one recording.
double window_vote(std::span<const double> window_probabilities);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Operating points from (0,0) to (1,1), one per distinct score threshold.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

/// TPR at `fpr` by linear interpolation between operating points; on a
/// vertical segment the upper value is taken.
double interpolate_tpr(std::span<const RocPoint> curve, double fpr);

struct ScoredSet {
    std::vector<double> scores;
    std::vector<int> labels;
};

struct RocBand {
    std::vector<double> fpr;       // 101 points on [0, 1]
    std::vector<double> mean_tpr;
    std::vector<double> sd_tpr;    // population SD across folds
};

inline constexpr std::size_t kRocGridPoints = 101;

/// Vertical averaging of per-fold ROC curves. Needs at least 2 folds.
RocBand mean_roc_curve(std::span<const ScoredSet> folds);

}  // namespace kinemotion
