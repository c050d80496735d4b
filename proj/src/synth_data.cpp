#include "kinemotion/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "kinemotion/errors.hpp"
#include "kinemotion/rng.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

void CohortSpec::validate() const {
    if (n_per_class < 1) throw ConfigError("n_per_class must be positive");
    if (tasks.empty()) throw ConfigError("cohort needs at least one task");
    if (!(duration_seconds > 0.0)) throw ConfigError("duration must be positive");
    auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
    if (!rate_ok(distractor_rate) || !rate_ok(dropout_rate)) throw ConfigError("rates must lie in [0, 1)");
    if (!(sample_rate > 0.0)) throw ConfigError("sample rate must be positive");
    if (timestamp_jitter < 0.0 || timestamp_jitter >= 0.5 / sample_rate) {
        throw ConfigError("timestamp jitter must be below half the sample period");
    }
    if (coordinate_step < 0.0) throw ConfigError("coordinate step must be non-negative");
    if (class_speed_sd < 0.0 || class_speed_means[0] <= 0.0 || class_speed_means[1] <= 0.0) {
        throw ConfigError("speed means must be positive and sd non-negative");
    }
}

Pose template_pose() {
    using J = Joint;
    Pose p{};
    auto set = [&](J j, double x, double y, double z) { p[index(j)] = {x, y, 2.5 + z}; };
    set(J::Pelvis, 0.0, 0.60, 0.0);
    set(J::SpineNavel, 0.0, 0.72, 0.0);
    set(J::SpineChest, 0.0, 0.85, 0.0);
    set(J::Neck, 0.0, 0.98, 0.0);
    set(J::Head, 0.0, 1.10, 0.0);
    set(J::Nose, 0.0, 1.08, -0.08);
    for (int side = -1; side <= 1; side += 2) {
        const bool left = side < 0;
        const double s = side;
        set(left ? J::ClavicleLeft : J::ClavicleRight, 0.04 * s, 0.95, 0.0);
        set(left ? J::ShoulderLeft : J::ShoulderRight, 0.13 * s, 0.93, 0.0);
        set(left ? J::ElbowLeft : J::ElbowRight, 0.17 * s, 0.75, 0.0);
        set(left ? J::WristLeft : J::WristRight, 0.19 * s, 0.58, -0.02);
        set(left ? J::HandLeft : J::HandRight, 0.19 * s, 0.53, -0.03);
        set(left ? J::HandTipLeft : J::HandTipRight, 0.19 * s, 0.47, -0.03);
        set(left ? J::ThumbLeft : J::ThumbRight, 0.16 * s, 0.52, -0.05);
        set(left ? J::HipLeft : J::HipRight, 0.07 * s, 0.58, 0.0);
        set(left ? J::KneeLeft : J::KneeRight, 0.08 * s, 0.33, -0.01);
        set(left ? J::AnkleLeft : J::AnkleRight, 0.08 * s, 0.07, 0.0);
        set(left ? J::FootLeft : J::FootRight, 0.08 * s, 0.02, -0.08);
        set(left ? J::EyeLeft : J::EyeRight, 0.03 * s, 1.12, -0.06);
        set(left ? J::EarLeft : J::EarRight, 0.06 * s, 1.10, 0.0);
    }
    return p;
}

MotionModel::MotionModel(std::uint64_t seed, double target_mean_speed, double duration) : base_(template_pose()) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> freq(0.15, 1.2);   // Hz
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    const double axis_weight[3] = {1.0, 0.5, 0.8};  // less vertical motion
    for (int a = 0; a < 3; ++a) {
        for (auto& w : shared_[a]) w = {1.5 * axis_weight[a] * amp(gen), 2.0 * std::numbers::pi * freq(gen), phase(gen)};
    }
    for (auto& joint : local_) {
        for (int a = 0; a < 3; ++a) {
            for (auto& w : joint[a]) w = {axis_weight[a] * amp(gen), 2.0 * std::numbers::pi * freq(gen), phase(gen)};
        }
    }
    scale_ = 1.0;
    const double unit = mean_speed(duration);
    scale_ = target_mean_speed / unit;
}

Pose MotionModel::at(double t) const {
    Pose p = base_;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        for (int a = 0; a < 3; ++a) {
            double offset = 0.0;
            for (const auto& w : shared_[a]) offset += w.amplitude * std::sin(w.omega * t + w.phase);
            for (const auto& w : local_[j][a]) offset += w.amplitude * std::sin(w.omega * t + w.phase);
            p[j][a] += scale_ * offset;
        }
    }
    return p;
}

Point3 MotionModel::velocity(std::size_t joint, double t) const {
    Point3 v{};
    for (int a = 0; a < 3; ++a) {
        double d = 0.0;
        for (const auto& w : shared_[a]) d += w.amplitude * w.omega * std::cos(w.omega * t + w.phase);
        for (const auto& w : local_[joint][a]) d += w.amplitude * w.omega * std::cos(w.omega * t + w.phase);
        v[a] = scale_ * d;
    }
    return v;
}

double MotionModel::mean_speed(double duration) const {
    constexpr double step = 0.05;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / step));
    double sum = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = std::min(duration, static_cast<double>(k) * step);
        for (std::size_t j = 0; j < kJointCount; ++j) {
            const auto v = velocity(j, t);
            sum += std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
    }
    return sum / static_cast<double>((steps + 1) * kJointCount);
}

namespace {

double quantize(double v, double step) {
    const double inv = 1.0 / step;
    const double whole = std::round(inv);
    if (std::abs(inv - whole) < 1e-9 * whole) return std::round(v * whole) / whole;
    return std::round(v / step) * step;
}

void quantize_pose(Pose& pose, double step) {
    if (step <= 0.0) return;
    for (auto& p : pose) {
        for (auto& c : p) c = quantize(c, step);
    }
}

}  // namespace

std::string synthetic_subject_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%03d", index + 1);
    return buf;
}

Cohort generate_cohort(const CohortSpec& spec) {
    spec.validate();
    Cohort cohort;
    const int n_subjects = 2 * spec.n_per_class;
    for (int s = 0; s < n_subjects; ++s) {
        const Label label = s < spec.n_per_class ? Label::Negative : Label::Positive;
        std::mt19937_64 subject_gen(derive_seed(spec.seed, {static_cast<std::uint64_t>(s)}));
        std::normal_distribution<double> speed_dist(spec.class_speed_means[static_cast<std::size_t>(label)],
                                                    spec.class_speed_sd);
        const double subject_speed = std::max(0.02, speed_dist(subject_gen));

        for (const auto& task : spec.tasks) {
            const std::uint64_t log_seed =
                derive_seed(spec.seed, {static_cast<std::uint64_t>(s), hash_string(task)});
            std::mt19937_64 gen(log_seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);

            SyntheticLog out;
            out.subject_id = synthetic_subject_id(s);
            out.task_id = task;
            out.label = label;
            out.subject_speed = subject_speed;
            out.motion = MotionModel(mix64(log_seed), subject_speed, spec.duration_seconds);
            out.log.source_id = out.subject_id + "_" + task;

            // three distinct small body ids
            std::array<std::int64_t, 3> ids{};
            for (std::size_t i = 0; i < ids.size(); ++i) {
                std::int64_t id;
                do {
                    id = 1 + static_cast<std::int64_t>(unit(gen) * 9.0);
                } while (std::find(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(i), id) !=
                         ids.begin() + static_cast<std::ptrdiff_t>(i));
                ids[i] = id;
            }
            out.planted_body = ids[0];
            const std::int64_t researcher = ids[1];
            const std::int64_t decoy = ids[2];
            Pose researcher_pose = template_pose();
            for (auto& p : researcher_pose) {
                p[0] += 1.2;
                p[2] += 0.4;
            }

            const auto n_samples = static_cast<std::size_t>(std::floor(spec.duration_seconds * spec.sample_rate)) + 1;
            for (std::size_t i = 0; i < n_samples; ++i) {
                double t = static_cast<double>(i) / spec.sample_rate;
                if (spec.timestamp_jitter > 0.0) t += (2.0 * unit(gen) - 1.0) * spec.timestamp_jitter;
                t = std::max(0.0, t);
                if (spec.coordinate_step > 0.0) t = quantize(t, 1e-6);

                RawEntry planted{t, out.planted_body, out.motion.at(t)};
                quantize_pose(planted.joints, spec.coordinate_step);
                for (auto& p : planted.joints) {
                    if (spec.dropout_rate > 0.0 && unit(gen) < spec.dropout_rate) p = {kMissing, kMissing, kMissing};
                }
                out.log.entries.push_back(planted);

                if (spec.distractor_rate > 0.0 && unit(gen) < spec.distractor_rate) {
                    RawEntry extra{t, researcher, researcher_pose};
                    if (unit(gen) < 0.2) {
                        // a decoy that lands somewhere new every time it appears
                        extra.body_id = decoy;
                        const double dx = -2.0 + 4.0 * unit(gen), dz = -1.0 + 2.0 * unit(gen);
                        extra.joints = template_pose();
                        for (auto& p : extra.joints) {
                            p[0] += dx;
                            p[2] += dz;
                        }
                    } else {
                        for (auto& p : extra.joints) {
                            for (auto& c : p) c += 0.002 * (unit(gen) - 0.5);
                        }
                    }
                    quantize_pose(extra.joints, spec.coordinate_step);
                    out.log.entries.push_back(extra);
                }
            }
            cohort.logs.push_back(std::move(out));
        }
    }
    return cohort;
}

std::string Cohort::ground_truth_csv() const {
    std::string out = "subject_id,task_id,label,mean_speed,planted_body_id\n";
    for (const auto& l : logs) {
        out += l.subject_id + ',' + l.task_id + ',' + std::string(label_name(l.label)) + ',' +
               format_double(l.subject_speed) + ',' + std::to_string(l.planted_body) + '\n';
    }
    return out;
}

std::string Cohort::labels_csv() const {
    std::string out = "subject_id,label\n";
    std::string last;
    for (const auto& l : logs) {
        if (l.subject_id == last) continue;
        last = l.subject_id;
        out += l.subject_id + ',' + std::string(label_name(l.label)) + '\n';
    }
    return out;
}

}  // namespace kinemotion
