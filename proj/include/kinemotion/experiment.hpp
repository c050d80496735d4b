#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinemotion/folds.hpp"
#include "kinemotion/kinematic_features.hpp"
#include "kinemotion/metrics.hpp"
#include "kinemotion/stats.hpp"

namespace kinemotion {

inline constexpr std::string_view kModelDeep = "PoseConv3D";
inline constexpr std::string_view kModelSvm = "SVM+RFECV";
inline constexpr std::string_view kModelForest = "Random Forest";

/// Canonical report order of model families.
int model_order(std::string_view model_id);

struct ExperimentConfig {
    int folds = 4;
    int repetitions = 2;
    std::uint64_t seed = 0;
    std::vector<double> c_grid;       // empty: default grid
    std::vector<int> depth_grid = {1, 2, 3, 4, 5, 6};
    int n_trees = 500;
    int inner_folds = 5;
    int inner_repeats = 6;
    bool svm = true;
    bool forest = true;
    unsigned jobs = 0;  // 0: hardware concurrency

    void validate() const;
};

struct PredictionRecord {
    std::string subject_id;
    std::string task_id;
    std::string model_id;
    int fold_id = 0;
    double probability = 0.0;
    int label = 0;
};

/// Plan over the labelled subjects of a feature table, sorted by id.
FoldPlan plan_for_rows(std::span<const FeatureRow> rows, const ExperimentConfig& cfg);

/// Runs every (fold, task, model) job of the handcrafted approach.
/// Throws InvariantError("leakage") if any scored subject was also trained on.
std::vector<PredictionRecord> run_handcrafted(std::span<const FeatureRow> rows, const FoldPlan& plan,
                                              const ExperimentConfig& cfg);

/// Every record must name a planned subject that is held out in its fold.
void check_leakage(std::span<const PredictionRecord> records, const FoldPlan& plan);

/// Columns subject_id, task_id, fold_id, probability (any order, extra columns
/// ignored). Labels are filled from the plan; the result passes check_leakage.
std::vector<PredictionRecord> read_dl_predictions(std::string_view text, const FoldPlan& plan);

/// subject_id,task_id,model_id,fold_id,label,probability in sorted order.
std::string write_predictions(std::span<const PredictionRecord> records);
std::vector<PredictionRecord> read_predictions(std::string_view text);

/// Sort key (model order, task order, fold, subject).
void sort_predictions(std::vector<PredictionRecord>& records);

struct FoldMetrics {
    int fold_id = 0;
    ConfusionMetrics confusion;
    double auc = 0.0;  // NaN when a fold holds one class only
};

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // population SD
    std::size_t n = 0;
};

struct ReportRow {
    std::string game;   // task id, "Mean" or "Global Voting"
    std::string model;
    std::vector<FoldMetrics> folds;  // empty for the Mean row
    MeanSd accuracy, tpr, tnr, auc;
};

struct ModelComparison {
    std::string model_a;
    std::string model_b;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    TestResult welch;
    TestResult levene;
    bool valid = false;  // false when a sample was degenerate
};

struct ModelReport {
    std::vector<std::string> tasks;
    std::vector<std::string> models;
    std::vector<ReportRow> rows;                 // task rows, Mean, Global Voting
    std::map<std::string, RocBand> roc;          // per model, over fold x task sets
    std::vector<ModelComparison> comparisons;    // unpaired Welch and Levene on pooled AUCs

    const ReportRow* find(std::string_view game, std::string_view model) const;
};

inline constexpr std::string_view kMeanRow = "Mean";
inline constexpr std::string_view kVotingRow = "Global Voting";

/// Pooled per-(fold, task) AUC values of one model, in (task, fold) order.
std::vector<double> pooled_aucs(const ModelReport& report, std::string_view model);

/// Throws InvariantError on metric range or accuracy identity failures.
ModelReport build_report(std::span<const PredictionRecord> records, const FoldPlan& plan);

/// game,model,accuracy,tpr,tnr,auc with entries as percent "mean±sd".
std::string report_csv(const ModelReport& report);
std::string report_json(const ModelReport& report, const FoldPlan& plan);

/// "72±08"
std::string percent_cell(const MeanSd& v);

MeanSd mean_sd(std::span<const double> values);

}  // namespace kinemotion
