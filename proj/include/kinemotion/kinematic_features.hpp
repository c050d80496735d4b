#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kinemotion/skeleton_io.hpp"

namespace kinemotion {

enum class Series : std::uint8_t { Displacement = 0, Speed, AccelerationMagnitude, TangentialAcceleration };
enum class Statistic : std::uint8_t { Mean = 0, Variance, Max, Min };

inline constexpr std::size_t kSeriesCount = 4;
inline constexpr std::size_t kStatisticCount = 4;
inline constexpr std::size_t kJointFeatureCount = kSeriesCount * kStatisticCount;
inline constexpr std::size_t kFeatureCount = kGroupCount * kJointFeatureCount;  // 160

/// Per-joint kinematic series from forward differences.
/// displacement and speed have N-1 samples, the two accelerations N-2.
struct JointSeries {
    std::vector<double> displacement;            // m per frame
    std::vector<double> speed;                   // m/s
    std::vector<double> acceleration_magnitude;  // m/s^2
    std::vector<double> tangential_acceleration; // m/s^2, signed

    const std::vector<double>& get(Series s) const;
};

struct KinematicSeries {
    double rate = 10.0;
    std::array<JointSeries, kJointCount> joints;
};

/// Throws TooShortError for fewer than 3 frames.
KinematicSeries derive_series(const SkeletonSequence& seq);

/// Population mean, population variance, max, min.
using Summary = std::array<double, kStatisticCount>;

/// Throws EmptyInputError on an empty series.
Summary summarize(std::span<const double> series);

/// Index = series * 4 + statistic.
using JointFeatures = std::array<double, kJointFeatureCount>;
using PerJointFeatures = std::array<JointFeatures, kJointCount>;

PerJointFeatures summarize(const KinematicSeries& series);

/// 160 values ordered group-major, then series, then statistic.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const FeatureVector&) const = default;
};

constexpr std::size_t feature_index(BodyGroup g, Series s, Statistic st) {
    return static_cast<std::size_t>(g) * kJointFeatureCount + static_cast<std::size_t>(s) * kStatisticCount +
           static_cast<std::size_t>(st);
}

/// e.g. "head.speed.mean"
std::string feature_name(std::size_t index);

FeatureVector aggregate_groups(const PerJointFeatures& per_joint);

/// derive_series -> summarize -> aggregate_groups
FeatureVector extract_features(const SkeletonSequence& seq);

struct FeatureRow {
    std::string subject_id;
    std::string task_id;
    std::optional<Label> label;
    FeatureVector features;
};

/// Header `subject_id,task_id,label,f000..f159`, one row per subject and task.
std::string write_feature_table(std::span<const FeatureRow> rows);

/// Throws ParseError naming the line on malformed rows.
std::vector<FeatureRow> read_feature_table(std::string_view text);

}  // namespace kinemotion
