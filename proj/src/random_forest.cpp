#include "kinemotion/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kinemotion/errors.hpp"
#include "kinemotion/folds.hpp"
#include "kinemotion/metrics.hpp"
#include "kinemotion/rng.hpp"

namespace kinemotion {

namespace {

double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child impurity
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> labels, int max_depth, std::uint64_t tree_seed)
        : x_(x), labels_(labels), max_depth_(max_depth), seed_(tree_seed) {
        const std::size_t d = x.cols();
        max_features_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
        features_.resize(d);
    }

    DecisionTree build(std::vector<std::size_t> samples) {
        DecisionTree tree;
        tree.nodes.emplace_back();
        grow(tree, 0, samples, 0, 1);
        return tree;
    }

private:
    void grow(DecisionTree& tree, int node, std::vector<std::size_t>& samples, int depth, std::uint64_t path) {
        std::size_t pos = 0;
        for (auto s : samples) pos += labels_[s] == 1;
        tree.nodes[node].positive_fraction = static_cast<double>(pos) / static_cast<double>(samples.size());
        if (depth >= max_depth_ || pos == 0 || pos == samples.size()) return;

        const Split split = best_split(samples, pos, path);
        if (split.feature < 0) return;

        std::vector<std::size_t> left, right;
        for (auto s : samples) (x_(s, split.feature) <= split.threshold ? left : right).push_back(s);
        samples.clear();
        samples.shrink_to_fit();

        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const int r = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node].feature = split.feature;
        tree.nodes[node].threshold = split.threshold;
        tree.nodes[node].left = l;
        tree.nodes[node].right = r;
        grow(tree, l, left, depth + 1, 2 * path);
        grow(tree, r, right, depth + 1, 2 * path + 1);
    }

    // Candidate features are drawn in random order until max_features
    // non-constant ones have been examined.
    Split best_split(const std::vector<std::size_t>& samples, std::size_t pos, std::uint64_t path) {
        std::mt19937_64 gen(derive_seed(seed_, {path}));
        std::iota(features_.begin(), features_.end(), 0);
        const double n = static_cast<double>(samples.size());
        const double total_pos = static_cast<double>(pos);

        Split best;
        double best_impurity = std::numeric_limits<double>::infinity();
        std::size_t examined = 0;
        values_.resize(samples.size());
        for (std::size_t k = 0; k < features_.size() && examined < max_features_; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, features_.size() - 1);
            std::swap(features_[k], features_[pick(gen)]);
            const std::size_t f = features_[k];

            for (std::size_t i = 0; i < samples.size(); ++i) values_[i] = {x_(samples[i], f), labels_[samples[i]]};
            std::sort(values_.begin(), values_.end());
            if (values_.front().first == values_.back().first) continue;
            ++examined;

            double left_pos = 0.0;
            for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
                left_pos += values_[i].second;
                if (values_[i].first == values_[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                const double impurity = (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best.feature = static_cast<int>(f);
                    best.threshold = 0.5 * (values_[i].first + values_[i + 1].first);
                    // midpoint may round onto the upper value
                    if (!(best.threshold < values_[i + 1].first)) best.threshold = values_[i].first;
                    best.impurity = impurity;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    std::span<const int> labels_;
    int max_depth_;
    std::uint64_t seed_;
    std::size_t max_features_ = 1;
    std::vector<std::size_t> features_;
    std::vector<std::pair<double, int>> values_;
};

}  // namespace

double DecisionTree::leaf_fraction(std::span<const double> x, int depth_limit) const {
    int node = 0;
    for (int depth = 0; depth < depth_limit && nodes[node].feature >= 0; ++depth) {
        const auto& n = nodes[node];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[node].positive_fraction;
}

int DecisionTree::depth() const {
    std::vector<int> depth(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].feature < 0) continue;
        depth[nodes[i].left] = depth[nodes[i].right] = depth[i] + 1;
        deepest = std::max(deepest, depth[i] + 1);
    }
    return deepest;
}

double ForestModel::probability(std::span<const double> x, int depth_limit) const {
    if (trees.empty()) throw EmptyInputError("forest has no trees");
    std::size_t votes = 0;
    for (const auto& t : trees) votes += t.leaf_fraction(x, depth_limit) > 0.5;
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

ForestModel train_random_forest(const Matrix& x, std::span<const int> labels, int max_depth, int n_trees,
                                std::uint64_t seed) {
    if (labels.size() != x.rows()) throw Error("label count does not match rows");
    if (max_depth < 1 || n_trees < 1) throw ConfigError("forest needs max_depth >= 1 and n_trees >= 1");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find_if(labels.begin(), labels.end(), [](int l) { return l != 1; }) != labels.end();
    if (!has_pos || !has_neg) throw DegenerateError("forest training needs both classes");

    ForestModel model;
    model.max_depth = max_depth;
    model.seed = seed;
    model.trees.reserve(static_cast<std::size_t>(n_trees));
    const std::size_t n = x.rows();
    std::vector<std::size_t> bootstrap(n);
    for (int t = 0; t < n_trees; ++t) {
        const std::uint64_t tree_seed = derive_seed(seed, {static_cast<std::uint64_t>(t)});
        std::mt19937_64 gen(tree_seed);
        std::uniform_int_distribution<std::size_t> draw(0, n - 1);
        for (auto& b : bootstrap) b = draw(gen);
        model.trees.push_back(TreeBuilder(x, labels, max_depth, tree_seed).build(bootstrap));
    }
    return model;
}

double forest_probability(const ForestModel& model, std::span<const double> x) { return model.probability(x); }

DepthTuning tune_depth(const Matrix& x, std::span<const int> labels, const DepthTuningOptions& opts) {
    if (opts.depth_grid.empty()) throw ConfigError("empty depth grid");
    const int deepest = *std::max_element(opts.depth_grid.begin(), opts.depth_grid.end());
    const auto splits = repeated_stratified_splits(labels, opts.folds, opts.repeats, opts.seed);

    DepthTuning result;
    result.mean_auc.assign(opts.depth_grid.size(), 0.0);
    std::vector<double> scores;
    for (std::size_t s = 0; s < splits.size(); ++s) {
        const auto& split = splits[s];
        const auto forest = train_random_forest(x.select_rows(split.train), select(labels, split.train), deepest,
                                                opts.n_trees, derive_seed(opts.seed, {static_cast<std::uint64_t>(s)}));
        const auto test_y = select(labels, split.test);
        scores.resize(split.test.size());
        for (std::size_t g = 0; g < opts.depth_grid.size(); ++g) {
            for (std::size_t r = 0; r < split.test.size(); ++r) {
                scores[r] = forest.probability(x.row(split.test[r]), opts.depth_grid[g]);
            }
            result.mean_auc[g] += roc_auc(scores, test_y);
        }
    }
    for (auto& a : result.mean_auc) a /= static_cast<double>(splits.size());

    std::size_t best = 0;
    for (std::size_t g = 1; g < opts.depth_grid.size(); ++g) {
        const bool better = result.mean_auc[g] > result.mean_auc[best];
        const bool tie_smaller = result.mean_auc[g] == result.mean_auc[best] && opts.depth_grid[g] < opts.depth_grid[best];
        if (better || tie_smaller) best = g;
    }
    result.best_depth = opts.depth_grid[best];
    return result;
}

}  // namespace kinemotion
