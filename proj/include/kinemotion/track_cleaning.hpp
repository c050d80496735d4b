#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinemotion/skeleton_io.hpp"

namespace kinemotion {

struct CleaningConfig {
    double window_seconds = 10.0;
    double window_hop_seconds = 10.0;
    double max_jump_meters = 0.30;
    double target_rate = 10.0;

    /// Throws ConfigError unless all values are positive and hop <= window.
    void validate() const;
};

struct TrackSample {
    double timestamp = 0.0;
    std::int64_t body_id = 0;
    Pose joints{};
};

/// Samples of the participant's body only, strictly increasing in time.
struct RawBodyTrack {
    std::string subject_id;
    std::string task_id;
    std::vector<TrackSample> samples;
};

/// Mean of the non-missing joint positions; nullopt if every joint is missing.
std::optional<Point3> centroid(const Pose& pose);

/// Keeps the modal body of each time window, then drops samples whose
/// centroid jumps max_jump_meters or more from the last kept sample.
RawBodyTrack select_participant(const RawTrackingLog& log, const CleaningConfig& cfg);

/// Linear interpolation of every coordinate onto a target_rate grid starting
/// at the first sample. Gaps are bridged and edges extended with the nearest value.
SkeletonSequence resample_uniform(const RawBodyTrack& track, const CleaningConfig& cfg);

/// Number of grid points resample_uniform produces for a span [t0, t_last].
std::size_t resampled_frame_count(double t0, double t_last, double rate);

/// Views a uniform sequence as a track with timestamps t0 + k / rate.
RawBodyTrack as_track(const SkeletonSequence& seq, double t0 = 0.0);

}  // namespace kinemotion
