#include "kinemotion/folds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kinemotion/errors.hpp"
#include "kinemotion/rng.hpp"

namespace kinemotion {

std::vector<int> stratified_fold_assignment(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw StratificationError("need at least 2 folds");
    std::vector<int> fold(labels.size(), -1);
    std::size_t next = 0;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) members.push_back(i);
        }
        if (members.size() < static_cast<std::size_t>(k)) {
            throw StratificationError("class " + std::to_string(cls) + " has " + std::to_string(members.size()) +
                                      " members, fewer than " + std::to_string(k) + " folds");
        }
        std::mt19937_64 gen(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
        std::shuffle(members.begin(), members.end(), gen);
        for (auto m : members) {
            fold[m] = static_cast<int>(next % static_cast<std::size_t>(k));
            ++next;
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (fold[i] < 0) throw StratificationError("labels must be 0 or 1");
    }
    return fold;
}

std::vector<TrainTestSplit> repeated_stratified_splits(std::span<const int> labels, int k, int repeats,
                                                       std::uint64_t seed) {
    std::vector<TrainTestSplit> splits;
    splits.reserve(static_cast<std::size_t>(k * repeats));
    for (int r = 0; r < repeats; ++r) {
        auto fold = stratified_fold_assignment(labels, k, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        for (int f = 0; f < k; ++f) {
            TrainTestSplit s;
            for (std::size_t i = 0; i < labels.size(); ++i) (fold[i] == f ? s.test : s.train).push_back(i);
            splits.push_back(std::move(s));
        }
    }
    return splits;
}

FoldPlan::FoldPlan(std::vector<SubjectLabel> subjects, int folds, int repetitions, std::uint64_t seed,
                   std::vector<std::vector<int>> assignment)
    : subjects_(std::move(subjects)),
      folds_(folds),
      repetitions_(repetitions),
      seed_(seed),
      assignment_(std::move(assignment)) {}

std::vector<std::size_t> FoldPlan::test_subjects(int fold_id) const {
    std::vector<std::size_t> out;
    const int r = fold_id / folds_, f = fold_id % folds_;
    for (std::size_t s = 0; s < subjects_.size(); ++s) {
        if (assignment_[r][s] == f) out.push_back(s);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_subjects(int fold_id) const {
    std::vector<std::size_t> out;
    const int r = fold_id / folds_, f = fold_id % folds_;
    for (std::size_t s = 0; s < subjects_.size(); ++s) {
        if (assignment_[r][s] != f) out.push_back(s);
    }
    return out;
}

bool FoldPlan::is_test(int fold_id, std::size_t subject) const {
    return assignment_[fold_id / folds_][subject] == fold_id % folds_;
}

std::size_t FoldPlan::find(const std::string& subject_id) const {
    for (std::size_t s = 0; s < subjects_.size(); ++s) {
        if (subjects_[s].subject_id == subject_id) return s;
    }
    return npos;
}

void FoldPlan::check() const {
    if (static_cast<int>(assignment_.size()) != repetitions_) throw InvariantError("fold-plan", "repetition count");
    std::size_t n_pos = 0;
    for (const auto& s : subjects_) n_pos += s.label == 1;
    const std::size_t n_neg = subjects_.size() - n_pos;
    for (int r = 0; r < repetitions_; ++r) {
        if (assignment_[r].size() != subjects_.size()) throw InvariantError("fold-plan", "assignment size");
        std::vector<std::size_t> pos(static_cast<std::size_t>(folds_)), neg(static_cast<std::size_t>(folds_));
        for (std::size_t s = 0; s < subjects_.size(); ++s) {
            const int f = assignment_[r][s];
            if (f < 0 || f >= folds_) throw InvariantError("fold-plan-partition", "subject without a fold");
            (subjects_[s].label == 1 ? pos : neg)[static_cast<std::size_t>(f)]++;
        }
        for (int f = 0; f < folds_; ++f) {
            const double ideal_pos = static_cast<double>(n_pos) / folds_;
            const double ideal_neg = static_cast<double>(n_neg) / folds_;
            if (std::abs(static_cast<double>(pos[f]) - ideal_pos) > 1.0 ||
                std::abs(static_cast<double>(neg[f]) - ideal_neg) > 1.0) {
                throw InvariantError("fold-plan-stratification", "fold " + std::to_string(f) + " of repetition " +
                                                                     std::to_string(r) + " is unbalanced");
            }
        }
    }
}

std::string FoldPlan::to_csv() const {
    std::string out = "subject_id,label,repetition,fold,fold_id\n";
    for (int r = 0; r < repetitions_; ++r) {
        for (std::size_t s = 0; s < subjects_.size(); ++s) {
            const int f = assignment_[r][s];
            out += subjects_[s].subject_id + ',' + std::to_string(subjects_[s].label) + ',' + std::to_string(r) + ',' +
                   std::to_string(f) + ',' + std::to_string(fold_id(r, f)) + '\n';
        }
    }
    return out;
}

FoldPlan stratified_repeated_kfold(std::vector<SubjectLabel> subjects, int k, int repetitions, std::uint64_t seed) {
    if (repetitions < 1) throw StratificationError("need at least one repetition");
    std::vector<int> labels;
    labels.reserve(subjects.size());
    for (const auto& s : subjects) labels.push_back(s.label);
    std::vector<std::vector<int>> assignment;
    for (int r = 0; r < repetitions; ++r) {
        assignment.push_back(
            stratified_fold_assignment(labels, k, derive_seed(seed, {0x666f6c64ULL, static_cast<std::uint64_t>(r)})));
    }
    FoldPlan plan(std::move(subjects), k, repetitions, seed, std::move(assignment));
    plan.check();
    return plan;
}

}  // namespace kinemotion
