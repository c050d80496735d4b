#include "kinemotion/kinematic_features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kinemotion/errors.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

namespace {

constexpr std::array<std::string_view, kSeriesCount> kSeriesNames = {"displacement", "speed", "acceleration",
                                                                       "tangential_acceleration"};
constexpr std::array<std::string_view, kStatisticCount> kStatisticNames = {"mean", "variance", "max", "min"};

double norm3(double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); }

}  // namespace

const std::vector<double>& JointSeries::get(Series s) const {
    switch (s) {
        case Series::Displacement: return displacement;
        case Series::Speed: return speed;
        case Series::AccelerationMagnitude: return acceleration_magnitude;
        case Series::TangentialAcceleration: return tangential_acceleration;
    }
    return displacement;
}

KinematicSeries derive_series(const SkeletonSequence& seq) {
    const std::size_t n = seq.frames.size();
    if (n < 3) throw TooShortError("kinematic series need at least 3 frames, have " + std::to_string(n));
    const double rate = seq.rate;

    KinematicSeries out;
    out.rate = rate;
    std::vector<Point3> velocity(n - 1);
    for (std::size_t j = 0; j < kJointCount; ++j) {
        auto& js = out.joints[j];
        js.displacement.resize(n - 1);
        js.speed.resize(n - 1);
        for (std::size_t t = 0; t + 1 < n; ++t) {
            const auto& p0 = seq.frames[t][j];
            const auto& p1 = seq.frames[t + 1][j];
            const double dx = p1[0] - p0[0], dy = p1[1] - p0[1], dz = p1[2] - p0[2];
            js.displacement[t] = norm3(dx, dy, dz);
            js.speed[t] = js.displacement[t] * rate;
            velocity[t] = {dx * rate, dy * rate, dz * rate};
        }
        js.acceleration_magnitude.resize(n - 2);
        js.tangential_acceleration.resize(n - 2);
        for (std::size_t t = 0; t + 2 < n; ++t) {
            const auto& v0 = velocity[t];
            const auto& v1 = velocity[t + 1];
            js.acceleration_magnitude[t] = norm3(v1[0] - v0[0], v1[1] - v0[1], v1[2] - v0[2]) * rate;
            js.tangential_acceleration[t] = (js.speed[t + 1] - js.speed[t]) * rate;
        }
    }
    return out;
}

Summary summarize(std::span<const double> series) {
    if (series.empty()) throw EmptyInputError("cannot summarise an empty series");
    // Welford
    double mean = 0.0, m2 = 0.0;
    double hi = series.front(), lo = series.front();
    std::size_t k = 0;
    for (double x : series) {
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
        hi = std::max(hi, x);
        lo = std::min(lo, x);
    }
    return {mean, m2 / static_cast<double>(k), hi, lo};
}

PerJointFeatures summarize(const KinematicSeries& series) {
    PerJointFeatures out{};
    for (std::size_t j = 0; j < kJointCount; ++j) {
        for (std::size_t s = 0; s < kSeriesCount; ++s) {
            auto summary = summarize(std::span<const double>(series.joints[j].get(static_cast<Series>(s))));
            std::copy(summary.begin(), summary.end(), out[j].begin() + static_cast<std::ptrdiff_t>(s * kStatisticCount));
        }
    }
    return out;
}

std::string feature_name(std::size_t index) {
    const std::size_t g = index / kJointFeatureCount;
    const std::size_t s = (index % kJointFeatureCount) / kStatisticCount;
    const std::size_t st = index % kStatisticCount;
    return std::string(group_name(static_cast<BodyGroup>(g))) + "." + std::string(kSeriesNames[s]) + "." +
           std::string(kStatisticNames[st]);
}

FeatureVector aggregate_groups(const PerJointFeatures& per_joint) {
    FeatureVector fv;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
        auto members = group_members(static_cast<BodyGroup>(g));
        for (std::size_t f = 0; f < kJointFeatureCount; ++f) {
            double sum = 0.0;
            for (Joint j : members) sum += per_joint[index(j)][f];
            fv.values[g * kJointFeatureCount + f] = sum / static_cast<double>(members.size());
        }
    }
    return fv;
}

FeatureVector extract_features(const SkeletonSequence& seq) { return aggregate_groups(summarize(derive_series(seq))); }

std::string write_feature_table(std::span<const FeatureRow> rows) {
    std::string out = "subject_id,task_id,label";
    char name[8];
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        std::snprintf(name, sizeof name, ",f%03zu", i);
        out += name;
    }
    out += '\n';
    for (const auto& row : rows) {
        out += row.subject_id + ',' + row.task_id + ',' + std::string(label_name(row.label));
        for (double v : row.features.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<FeatureRow> read_feature_table(std::string_view text) {
    std::vector<FeatureRow> rows;
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]).rfind("subject_id,task_id,label", 0) != 0) {
        throw ParseError(1, "missing feature table header");
    }
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto line = trim(lines[li]);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != 3 + kFeatureCount) {
            throw ParseError(li + 1, "expected " + std::to_string(3 + kFeatureCount) + " columns");
        }
        FeatureRow row;
        row.subject_id = std::string(cells[0]);
        row.task_id = std::string(cells[1]);
        if (cells[2] != "none") {
            row.label = parse_label(cells[2]);
            if (!row.label) throw ParseError(li + 1, "bad label");
        }
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            auto v = parse_double(cells[3 + i]);
            if (!v || !std::isfinite(*v)) throw ParseError(li + 1, "bad feature value in column f" + std::to_string(i));
            row.features.values[i] = *v;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace kinemotion
