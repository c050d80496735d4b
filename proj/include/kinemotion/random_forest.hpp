#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kinemotion/matrix.hpp"

namespace kinemotion {

struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double positive_fraction = 0.0;  // over the node's bootstrap samples
};

class DecisionTree {
public:
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    /// Positive fraction of the leaf reached, stopping early at depth_limit.
    double leaf_fraction(std::span<const double> x, int depth_limit) const;
    int depth() const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    int max_depth = 1;
    std::uint64_t seed = 0;

    /// Fraction of trees voting positive (leaf fraction above one half).
    double probability(std::span<const double> x) const { return probability(x, max_depth); }

    /// Same forest evaluated as if grown only to depth_limit.
    double probability(std::span<const double> x, int depth_limit) const;
};

/// Bootstrap-bagged Gini trees with floor(sqrt(d)) candidate features per
/// split. Tree k depends only on (seed, k), and each node only on its own
/// path, so a shallower forest is exactly a truncation of a deeper one.
ForestModel train_random_forest(const Matrix& x, std::span<const int> labels, int max_depth, int n_trees,
                                std::uint64_t seed);

double forest_probability(const ForestModel& model, std::span<const double> x);

struct DepthTuningOptions {
    std::vector<int> depth_grid = {1, 2, 3, 4, 5, 6};
    int folds = 5;
    int repeats = 6;
    int n_trees = 500;
    std::uint64_t seed = 0;
};

struct DepthTuning {
    int best_depth = 1;
    std::vector<double> mean_auc;  // aligned with depth_grid
};

/// Repeated stratified CV AUC per depth; argmax, ties to the smaller depth.
DepthTuning tune_depth(const Matrix& x, std::span<const int> labels, const DepthTuningOptions& opts = {});

}  // namespace kinemotion
