#pragma once

#include <span>

namespace kinemotion {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double df1 = 0.0;  // t: Welch-Satterthwaite df; Levene: k - 1
    double df2 = 0.0;  // Levene: N - k; unused for t
};

/// Unpaired two-sided t-test with unequal variances.
/// Throws DegenerateError if both samples have zero variance.
TestResult welch_ttest(std::span<const double> a, std::span<const double> b);

/// Two-group Levene test on absolute deviations from the group means,
/// p-value from the F(1, N - 2) upper tail.
TestResult levene_test(std::span<const double> a, std::span<const double> b);

double sample_mean(std::span<const double> x);
/// Unbiased (n - 1) variance.
double sample_variance(std::span<const double> x);

}  // namespace kinemotion
