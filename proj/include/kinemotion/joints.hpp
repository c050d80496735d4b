#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace kinemotion {

inline constexpr std::size_t kJointCount = 32;

// Azure Kinect DK body-tracking joint enumeration.
enum class Joint : std::uint8_t {
    Pelvis = 0,
    SpineNavel,
    SpineChest,
    Neck,
    ClavicleLeft,
    ShoulderLeft,
    ElbowLeft,
    WristLeft,
    HandLeft,
    HandTipLeft,
    ThumbLeft,
    ClavicleRight,
    ShoulderRight,
    ElbowRight,
    WristRight,
    HandRight,
    HandTipRight,
    ThumbRight,
    HipLeft,
    KneeLeft,
    AnkleLeft,
    FootLeft,
    HipRight,
    KneeRight,
    AnkleRight,
    FootRight,
    Head,
    Nose,
    EyeLeft,
    EarLeft,
    EyeRight,
    EarRight,
};

constexpr std::size_t index(Joint j) noexcept { return static_cast<std::size_t>(j); }

std::string_view joint_name(std::size_t joint);

using Point3 = std::array<double, 3>;
using Pose = std::array<Point3, kJointCount>;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

inline bool has_missing(const Point3& p) noexcept {
    return is_missing(p[0]) || is_missing(p[1]) || is_missing(p[2]);
}

/// Body groups used for feature aggregation, in feature order.
enum class BodyGroup : std::uint8_t {
    Head = 0,
    Body,
    ArmLeft,
    ArmRight,
    HandLeft,
    HandRight,
    LegLeft,
    LegRight,
    FootLeft,
    FootRight,
};

inline constexpr std::size_t kGroupCount = 10;

std::string_view group_name(BodyGroup g);

/// Member joints of a group. Every joint belongs to exactly one group.
std::span<const Joint> group_members(BodyGroup g);

BodyGroup group_of(Joint j);

/// The twelve virtual-task abbreviations of the study protocol.
inline constexpr std::array<std::string_view, 12> kTaskIds = {
    "EF", "I2", "PEAP", "T2A1", "T2A2", "T2A3", "T2A4", "T2A5", "T2B1", "T2B2", "T2B3", "T2B4",
};

bool is_known_task(std::string_view task_id);

/// Position of a task in canonical report order; unknown tasks sort last.
std::size_t task_order(std::string_view task_id);

}  // namespace kinemotion
