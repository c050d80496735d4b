#include "kinemotion/rfecv.hpp"

#include <algorithm>
#include <cmath>

#include "kinemotion/errors.hpp"
#include "kinemotion/folds.hpp"
#include "kinemotion/metrics.hpp"
#include "kinemotion/rng.hpp"

namespace kinemotion {

namespace {

std::size_t weakest(const std::vector<double>& w) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (std::abs(w[i]) < std::abs(w[k])) k = i;
    }
    return k;
}

void require_rows(const Matrix& x, std::span<const int> labels) {
    if (labels.size() != x.rows()) throw Error("label count does not match rows");
    if (x.cols() == 0) throw DegenerateError("no features to select from");
}

}  // namespace

std::vector<double> default_c_grid() {
    std::vector<double> grid;
    for (int e = -6; e <= 7; ++e) grid.push_back(std::ldexp(1.0, e));
    return grid;
}

double LinearSvmPipeline::probability(std::span<const double> raw_row) const {
    std::vector<double> z(raw_row.size());
    scaler.transform_row(raw_row, z);
    return svm_probability(model, z);
}

std::vector<std::size_t> rfe_ranking(const Matrix& x, std::span<const int> labels, double C, const SvmOptions& opts) {
    require_rows(x, labels);
    DualSvmSolver solver(x, labels, C);
    std::vector<std::size_t> order;
    order.reserve(x.cols());
    while (solver.active_features().size() > 1) {
        solver.solve(opts);
        const std::size_t drop = solver.active_features()[weakest(solver.weights())];
        order.push_back(drop);
        solver.remove_feature(drop);
    }
    order.push_back(solver.active_features().front());
    return order;
}

std::vector<double> rfe_cv_scores(const Matrix& x, std::span<const int> labels, double C, int folds,
                                  std::uint64_t seed, const SvmOptions& opts) {
    require_rows(x, labels);
    const std::size_t d = x.cols();
    std::vector<double> sum(d, 0.0);
    const auto splits = repeated_stratified_splits(labels, folds, 1, seed);
    for (const auto& split : splits) {
        const Matrix train_raw = x.select_rows(split.train);
        const auto scaler = Standardizer::fit(train_raw);
        const Matrix train = scaler.transform(train_raw);
        const Matrix test = scaler.transform(x.select_rows(split.test));
        const auto train_y = select(labels, split.train);
        const auto test_y = select(labels, split.test);

        DualSvmSolver solver(train, train_y, C);
        std::vector<double> scores(test.rows());
        while (true) {
            solver.solve(opts);
            const auto model = solver.model();
            for (std::size_t r = 0; r < test.rows(); ++r) scores[r] = model.decision(test.row(r));
            sum[model.selected_features.size() - 1] += roc_auc(scores, test_y);
            if (model.selected_features.size() == 1) break;
            solver.remove_feature(model.selected_features[weakest(model.weights)]);
        }
    }
    for (auto& s : sum) s /= static_cast<double>(splits.size());
    return sum;
}

RfecvResult rfecv_select(const Matrix& x, std::span<const int> labels, const RfecvOptions& opts) {
    require_rows(x, labels);
    if (x.rows() < 10) throw TooShortError("RFECV needs at least 10 rows");
    if (opts.c_grid.empty()) throw ConfigError("empty C grid");

    const auto full_scaler = Standardizer::fit(x);
    const Matrix z = full_scaler.transform(x);
    const std::uint64_t selection_seed = derive_seed(opts.seed, {1});
    const auto tuning_splits =
        repeated_stratified_splits(labels, opts.tuning_folds, opts.tuning_repeats, derive_seed(opts.seed, {2}));

    RfecvResult result;
    for (double C : opts.c_grid) {
        CandidateScore cand;
        cand.C = C;
        const auto scores = rfe_cv_scores(x, labels, C, opts.selection_folds, selection_seed, opts.svm);
        std::size_t best = 0;
        for (std::size_t k = 1; k < scores.size(); ++k) {
            if (scores[k] > scores[best]) best = k;
        }
        cand.feature_count = best + 1;
        cand.selection_auc = scores[best];

        const auto ranking = rfe_ranking(z, labels, C, opts.svm);
        cand.features.assign(ranking.end() - static_cast<std::ptrdiff_t>(cand.feature_count), ranking.end());
        std::sort(cand.features.begin(), cand.features.end());

        double auc_sum = 0.0;
        const Matrix xs = x.select_cols(cand.features);
        for (const auto& split : tuning_splits) {
            const Matrix train_raw = xs.select_rows(split.train);
            const auto scaler = Standardizer::fit(train_raw);
            const auto model = train_linear_svm(scaler.transform(train_raw), select(labels, split.train), C, opts.svm);
            const Matrix test = scaler.transform(xs.select_rows(split.test));
            std::vector<double> s(test.rows());
            for (std::size_t r = 0; r < test.rows(); ++r) s[r] = model.decision(test.row(r));
            auc_sum += roc_auc(s, select(labels, split.test));
        }
        cand.tuning_auc = auc_sum / static_cast<double>(tuning_splits.size());
        result.candidates.push_back(std::move(cand));
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < result.candidates.size(); ++c) {
        if (result.candidates[c].tuning_auc > result.candidates[best].tuning_auc) best = c;
    }
    const auto& chosen = result.candidates[best];
    result.best_C = chosen.C;
    result.selected_features = chosen.features;

    result.pipeline.scaler = full_scaler;
    auto model = train_linear_svm(z.select_cols(chosen.features), labels, chosen.C, opts.svm);
    // map weights back onto full-row column indices
    model.selected_features = chosen.features;
    result.pipeline.model = std::move(model);
    return result;
}

}  // namespace kinemotion
