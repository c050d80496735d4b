#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kinemotion {

/// Fold index for every item, stratified by binary label (0/1).
/// Each class is shuffled and dealt round-robin; the second class continues
/// where the first stopped so fold totals stay balanced.
/// Throws StratificationError if a class has fewer than k members.
std::vector<int> stratified_fold_assignment(std::span<const int> labels, int k, std::uint64_t seed);

struct TrainTestSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// k * repeats splits in (repeat, fold) order.
std::vector<TrainTestSplit> repeated_stratified_splits(std::span<const int> labels, int k, int repeats,
                                                       std::uint64_t seed);

struct SubjectLabel {
    std::string subject_id;
    int label = 0;
};

/// Subject-level repeated stratified k-fold plan. fold_id = repetition * k + fold.
class FoldPlan {
public:
    FoldPlan() = default;
    FoldPlan(std::vector<SubjectLabel> subjects, int folds, int repetitions, std::uint64_t seed,
             std::vector<std::vector<int>> assignment);

    const std::vector<SubjectLabel>& subjects() const { return subjects_; }
    int folds() const { return folds_; }
    int repetitions() const { return repetitions_; }
    int evaluations() const { return folds_ * repetitions_; }
    std::uint64_t seed() const { return seed_; }

    /// Fold of `subject` within `repetition`.
    int fold_of(int repetition, std::size_t subject) const { return assignment_[repetition][subject]; }
    int fold_id(int repetition, int fold) const { return repetition * folds_ + fold; }

    std::vector<std::size_t> test_subjects(int fold_id) const;
    std::vector<std::size_t> train_subjects(int fold_id) const;
    bool is_test(int fold_id, std::size_t subject) const;

    /// Index of a subject id, or npos.
    std::size_t find(const std::string& subject_id) const;

    /// Throws InvariantError if folds fail to partition or stratify.
    void check() const;

    /// CSV: subject_id,label,repetition,fold,fold_id
    std::string to_csv() const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<SubjectLabel> subjects_;
    int folds_ = 0;
    int repetitions_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::vector<int>> assignment_;  // [repetition][subject] -> fold
};

FoldPlan stratified_repeated_kfold(std::vector<SubjectLabel> subjects, int k, int repetitions, std::uint64_t seed);

}  // namespace kinemotion
