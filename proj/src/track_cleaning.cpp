#include "kinemotion/track_cleaning.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kinemotion/errors.hpp"

namespace kinemotion {

namespace {

// Grid times closer than this to a sample are treated as hitting the sample.
constexpr double kTimeSnap = 1e-9;

double distance(const Point3& a, const Point3& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

void CleaningConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(window_seconds) || !positive(window_hop_seconds) || !positive(max_jump_meters) ||
        !positive(target_rate)) {
        throw ConfigError("cleaning parameters must be strictly positive");
    }
    if (window_hop_seconds > window_seconds) throw ConfigError("window_hop_seconds must not exceed window_seconds");
}

std::optional<Point3> centroid(const Pose& pose) {
    Point3 sum{0.0, 0.0, 0.0};
    int n = 0;
    for (const auto& p : pose) {
        if (has_missing(p)) continue;
        sum[0] += p[0];
        sum[1] += p[1];
        sum[2] += p[2];
        ++n;
    }
    if (n == 0) return std::nullopt;
    return Point3{sum[0] / n, sum[1] / n, sum[2] / n};
}

RawBodyTrack select_participant(const RawTrackingLog& log, const CleaningConfig& cfg) {
    cfg.validate();
    if (log.entries.empty()) throw EmptyInputError("tracking log '" + log.source_id + "' is empty");

    const auto& entries = log.entries;
    const double t0 = entries.front().timestamp;
    const double hop = cfg.window_hop_seconds;
    const double width = cfg.window_seconds;
    auto window_of = [&](double t) { return static_cast<std::int64_t>(std::floor((t - t0) / hop)); };
    const std::int64_t n_windows = window_of(entries.back().timestamp) + 1;

    // Each entry is governed by the latest window starting at or before it; that
    // window's vote counts every entry inside [start, start + width).
    std::vector<std::optional<std::int64_t>> chosen(static_cast<std::size_t>(n_windows));
    std::optional<std::int64_t> previous;
    std::size_t lo = 0;
    for (std::int64_t w = 0; w < n_windows; ++w) {
        const double start = t0 + static_cast<double>(w) * hop;
        const double end = start + width;
        while (lo < entries.size() && entries[lo].timestamp < start) ++lo;
        std::map<std::int64_t, std::size_t> counts;
        for (std::size_t i = lo; i < entries.size() && entries[i].timestamp < end; ++i) ++counts[entries[i].body_id];
        if (counts.empty()) continue;
        std::size_t best = 0;
        for (const auto& [id, c] : counts) best = std::max(best, c);
        std::optional<std::int64_t> pick;
        if (previous && counts.count(*previous) && counts[*previous] == best) {
            pick = previous;
        } else {
            for (const auto& [id, c] : counts) {
                if (c == best) {
                    pick = id;  // map order: lowest id among the tied
                    break;
                }
            }
        }
        chosen[static_cast<std::size_t>(w)] = pick;
        previous = pick;
    }

    RawBodyTrack track;
    track.subject_id = log.source_id;
    std::optional<Point3> last_centroid;
    for (const auto& e : entries) {
        const auto& pick = chosen[static_cast<std::size_t>(window_of(e.timestamp))];
        if (!pick || e.body_id != *pick) continue;
        auto c = centroid(e.joints);
        if (!c) continue;
        if (!track.samples.empty() && !(e.timestamp > track.samples.back().timestamp)) continue;
        if (last_centroid && distance(*c, *last_centroid) >= cfg.max_jump_meters) continue;
        track.samples.push_back({e.timestamp, e.body_id, e.joints});
        last_centroid = c;
    }
    if (track.samples.empty()) throw EmptyInputError("no body retained from '" + log.source_id + "'");
    return track;
}

std::size_t resampled_frame_count(double t0, double t_last, double rate) {
    double steps = (t_last - t0) * rate;
    return static_cast<std::size_t>(std::floor(steps + kTimeSnap * std::max(1.0, steps))) + 1;
}

SkeletonSequence resample_uniform(const RawBodyTrack& track, const CleaningConfig& cfg) {
    cfg.validate();
    const auto& s = track.samples;
    if (s.size() < 2) throw TooShortError("track needs at least 2 samples, has " + std::to_string(s.size()));

    const double t0 = s.front().timestamp;
    const double rate = cfg.target_rate;
    const std::size_t n = resampled_frame_count(t0, s.back().timestamp, rate);

    SkeletonSequence seq;
    seq.subject_id = track.subject_id;
    seq.task_id = track.task_id;
    seq.rate = rate;
    seq.frames.resize(n);

    std::vector<double> times;
    std::vector<double> values;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        for (std::size_t a = 0; a < 3; ++a) {
            times.clear();
            values.clear();
            for (const auto& sample : s) {
                double v = sample.joints[j][a];
                if (is_missing(v)) continue;
                times.push_back(sample.timestamp);
                values.push_back(v);
            }
            if (times.empty()) throw DegenerateError("joint " + std::string(joint_name(j)) + " is missing in every sample");

            std::size_t hi = 0;  // first sample with time >= t
            for (std::size_t k = 0; k < n; ++k) {
                const double t = t0 + static_cast<double>(k) / rate;
                while (hi < times.size() && times[hi] < t - kTimeSnap) ++hi;
                double v;
                if (hi < times.size() && std::abs(times[hi] - t) <= kTimeSnap) {
                    v = values[hi];
                } else if (hi == 0) {
                    v = values.front();
                } else if (hi == times.size()) {
                    v = values.back();
                } else {
                    const double ta = times[hi - 1], tb = times[hi];
                    const double w = (t - ta) / (tb - ta);
                    v = values[hi - 1] + w * (values[hi] - values[hi - 1]);
                }
                seq.frames[k][j][a] = v;
            }
        }
    }
    return seq;
}

RawBodyTrack as_track(const SkeletonSequence& seq, double t0) {
    RawBodyTrack track;
    track.subject_id = seq.subject_id;
    track.task_id = seq.task_id;
    track.samples.reserve(seq.frames.size());
    for (std::size_t k = 0; k < seq.frames.size(); ++k) {
        track.samples.push_back({t0 + static_cast<double>(k) / seq.rate, 0, seq.frames[k]});
    }
    return track;
}

}  // namespace kinemotion
