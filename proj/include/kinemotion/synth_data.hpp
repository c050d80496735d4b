#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kinemotion/skeleton_io.hpp"

namespace kinemotion {

struct CohortSpec {
    int n_per_class = 40;
    std::vector<std::string> tasks = {"T2A1", "T2A3", "T2B1"};
    double duration_seconds = 60.0;
    std::array<double, 2> class_speed_means = {0.30, 0.45};  // negative, positive; m/s
    double class_speed_sd = 0.05;
    double distractor_rate = 0.20;   // fraction of timestamps with an extra body
    double dropout_rate = 0.05;      // fraction of missing joint coordinates
    double timestamp_jitter = 0.005; // seconds, uniform +/-
    double sample_rate = 30.0;       // tracker rate before resampling
    double coordinate_step = 1e-5;   // written coordinates are rounded to this; 0 keeps full precision
    std::uint64_t seed = 1;

    void validate() const;
};

/// Smooth band-limited motion: a standing template plus, per axis, three
/// random-phase sinusoids shared by the whole body and three per joint,
/// scaled so the mean joint speed hits a target.
class MotionModel {
public:
    struct Wave {
        double amplitude = 0.0;
        double omega = 0.0;  // rad/s
        double phase = 0.0;
    };

    MotionModel() = default;
    MotionModel(std::uint64_t seed, double target_mean_speed, double duration);

    Pose at(double t) const;
    /// Mean over joints and time of the analytic speed.
    double mean_speed(double duration) const;
    double scale() const { return scale_; }

private:
    Point3 velocity(std::size_t joint, double t) const;

    Pose base_{};
    std::array<std::array<Wave, 3>, 3> shared_{};                          // [axis][k]
    std::array<std::array<std::array<Wave, 3>, 3>, kJointCount> local_{};  // [joint][axis][k]
    double scale_ = 1.0;
};

struct SyntheticLog {
    std::string subject_id;
    std::string task_id;
    Label label = Label::Negative;
    double subject_speed = 0.0;
    std::int64_t planted_body = 0;
    MotionModel motion;
    RawTrackingLog log;
};

struct Cohort {
    std::vector<SyntheticLog> logs;  // subject-major, tasks in CohortSpec order

    /// subject_id,task_id,label,mean_speed,planted_body_id
    std::string ground_truth_csv() const;
    /// subject_id,label
    std::string labels_csv() const;
};

/// Standing reference pose used as the motion template (y up, z away from the sensor).
Pose template_pose();

Cohort generate_cohort(const CohortSpec& spec);

/// Subject ids are S001, S002, ...; the first n_per_class are negative.
std::string synthetic_subject_id(int index);

}  // namespace kinemotion
