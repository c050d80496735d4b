#include "kinemotion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kinemotion/errors.hpp"

namespace kinemotion {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw Error("roc_auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // sum of midranks of the positives
    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                rank_sum += midrank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DegenerateError("ROC-AUC is undefined with a single class");
    const double u = rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ConfusionMetrics confusion_metrics(std::span<const double> probabilities, std::span<const int> labels,
                                   double threshold) {
    if (probabilities.empty() || probabilities.size() != labels.size()) {
        throw EmptyInputError("confusion metrics need matching, non-empty inputs");
    }
    ConfusionMetrics m;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const bool predicted = probabilities[i] >= threshold;
        if (labels[i] == 1) {
            (predicted ? m.tp : m.fn)++;
        } else {
            (predicted ? m.fp : m.tn)++;
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(probabilities.size());
    m.tpr = m.positives() ? static_cast<double>(m.tp) / static_cast<double>(m.positives()) : nan;
    m.tnr = m.negatives() ? static_cast<double>(m.tn) / static_cast<double>(m.negatives()) : nan;
    return m;
}

double ensemble_vote(std::span<const std::optional<double>> task_probabilities) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : task_probabilities) {
        if (!p) continue;
        sum += *p;
        ++n;
    }
    if (n == 0) throw EmptyInputError("ensemble vote needs at least one task probability");
    return sum / static_cast<double>(n);
}

double ensemble_vote(std::span<const double> task_probabilities) {
    if (task_probabilities.empty()) throw EmptyInputError("ensemble vote needs at least one task probability");
    return std::accumulate(task_probabilities.begin(), task_probabilities.end(), 0.0) /
           static_cast<double>(task_probabilities.size());
}

double window_vote(std::span<const double> window_probabilities) {
    if (window_probabilities.empty()) throw EmptyInputError("window vote needs at least one window");
    return std::accumulate(window_probabilities.begin(), window_probabilities.end(), 0.0) /
           static_cast<double>(window_probabilities.size());
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += l == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DegenerateError("ROC curve is undefined with a single class");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> curve{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? tp : fp)++;
            ++j;
        }
        curve.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
        i = j;
    }
    return curve;
}

double interpolate_tpr(std::span<const RocPoint> curve, double fpr) {
    double exact = -1.0;
    for (const auto& p : curve) {
        if (p.fpr == fpr) exact = std::max(exact, p.tpr);
    }
    if (exact >= 0.0) return exact;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto& a = curve[i - 1];
        const auto& b = curve[i];
        if (a.fpr < fpr && fpr < b.fpr) return a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr);
    }
    return curve.back().tpr;
}

RocBand mean_roc_curve(std::span<const ScoredSet> folds) {
    if (folds.size() < 2) throw EmptyInputError("mean ROC curve needs at least 2 folds");
    RocBand band;
    band.fpr.resize(kRocGridPoints);
    for (std::size_t g = 0; g < kRocGridPoints; ++g) band.fpr[g] = static_cast<double>(g) / (kRocGridPoints - 1);

    std::vector<std::vector<double>> tprs;
    for (const auto& f : folds) {
        auto curve = roc_curve(f.scores, f.labels);
        std::vector<double> row(kRocGridPoints);
        for (std::size_t g = 0; g < kRocGridPoints; ++g) row[g] = interpolate_tpr(curve, band.fpr[g]);
        tprs.push_back(std::move(row));
    }
    band.mean_tpr.assign(kRocGridPoints, 0.0);
    band.sd_tpr.assign(kRocGridPoints, 0.0);
    const double k = static_cast<double>(tprs.size());
    for (std::size_t g = 0; g < kRocGridPoints; ++g) {
        double mean = 0.0;
        for (const auto& row : tprs) mean += row[g];
        mean /= k;
        double var = 0.0;
        for (const auto& row : tprs) var += (row[g] - mean) * (row[g] - mean);
        band.mean_tpr[g] = mean;
        band.sd_tpr[g] = std::sqrt(var / k);
    }
    return band;
}

}  // namespace kinemotion
