#include "kinemotion/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "kinemotion/errors.hpp"

namespace kinemotion {

namespace {

void require_size(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw EmptyInputError("each sample needs at least 2 values");
}

}  // namespace

double sample_mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    const double m = sample_mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

TestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
    require_size(a, b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    if (va == 0.0 && vb == 0.0) throw DegenerateError("t-test undefined: both samples have zero variance");

    TestResult r;
    r.statistic = (sample_mean(a) - sample_mean(b)) / std::sqrt(va + vb);
    r.df1 = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    boost::math::students_t dist(r.df1);
    r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))));
    return r;
}

TestResult levene_test(std::span<const double> a, std::span<const double> b) {
    require_size(a, b);
    const std::span<const double> groups[2] = {a, b};
    std::vector<double> dev[2];
    double group_mean[2] = {0.0, 0.0};
    double grand = 0.0;
    std::size_t total = 0;
    for (int g = 0; g < 2; ++g) {
        const double m = sample_mean(groups[g]);
        for (double v : groups[g]) dev[g].push_back(std::abs(v - m));
        group_mean[g] = sample_mean(dev[g]);
        grand += std::accumulate(dev[g].begin(), dev[g].end(), 0.0);
        total += dev[g].size();
    }
    grand /= static_cast<double>(total);

    double between = 0.0, within = 0.0;
    for (int g = 0; g < 2; ++g) {
        between += static_cast<double>(dev[g].size()) * (group_mean[g] - grand) * (group_mean[g] - grand);
        for (double z : dev[g]) within += (z - group_mean[g]) * (z - group_mean[g]);
    }
    if (within == 0.0) throw DegenerateError("Levene test undefined: absolute deviations have zero spread");

    TestResult r;
    r.df1 = 1.0;
    r.df2 = static_cast<double>(total) - 2.0;
    r.statistic = (r.df2 / r.df1) * between / within;
    boost::math::fisher_f dist(r.df1, r.df2);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace kinemotion
