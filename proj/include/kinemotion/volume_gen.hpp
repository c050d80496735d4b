#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinemotion/skeleton_io.hpp"

namespace kinemotion {

struct RenderConfig {
    int width = 64;    // H, horizontal pixels
    int height = 78;   // V, vertical pixels
    double sigma = 0.05;
    double rate = 10.0;
    double window_seconds = 30.0;
    double overlap_seconds = 15.0;
    double jitter_sigma = 0.35;
    int jitter_count = 10;

    void validate() const;
    std::size_t window_frames() const;
    std::size_t hop_frames() const;
};

/// Pixel-to-sensor-coordinate map fixed by a sequence's x/y extent.
/// Column h maps to x_at(h); image row r maps to y_at(height - 1 - r), so row 0 is the top.
struct PixelGrid {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int width = 64;
    int height = 78;

    double x_at(int h) const { return x_min + (static_cast<double>(h) / width) * (x_max - x_min); }
    double y_at(int v) const { return y_min + (static_cast<double>(v) / height) * (y_max - y_min); }
};

/// Extent over all joints and frames. Throws DegenerateError on a flat axis.
PixelGrid make_grid(const SkeletonSequence& seq, const RenderConfig& cfg);

using JointXY = std::array<double, 2>;

struct Frame {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;  // row-major, height x width

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

/// Sum over joints of exp(-0.5 (|p - j| / sigma)^2) / (sigma sqrt(2 pi)).
Frame render_frame(std::span<const JointXY> joints, const PixelGrid& grid, double sigma);

inline constexpr std::string_view kOriginalTag = "original";
std::string jitter_tag(int copy);       // "jitter1".."jitter10"
std::string flip_jitter_tag(int copy);  // "flipjitter1".."flipjitter10"

/// T x V x H single-channel volume.
struct HeatmapVolume {
    std::string subject_id;
    std::string task_id;
    std::optional<Label> label;
    int window_index = -1;  // -1: whole recording
    std::string aug_tag = std::string(kOriginalTag);
    std::size_t frames = 0;
    int height = 0;
    int width = 0;
    std::size_t valid_frames = 0;  // < frames for a zero-padded tail window
    std::vector<float> data;

    bool padded() const { return valid_frames < frames; }
    std::size_t frame_size() const { return static_cast<std::size_t>(height) * width; }
    std::span<const float> frame(std::size_t t) const { return {data.data() + t * frame_size(), frame_size()}; }
    float at(std::size_t t, int row, int col) const {
        return data[t * frame_size() + static_cast<std::size_t>(row) * width + col];
    }
};

/// One frame per sample from the frontal-plane (x, y) joint coordinates.
HeatmapVolume render_sequence(const SkeletonSequence& seq, const RenderConfig& cfg);
HeatmapVolume render_sequence(const SkeletonSequence& seq, const PixelGrid& grid, const RenderConfig& cfg);

struct WindowSpan {
    std::size_t start = 0;
    std::size_t length = 0;  // frames taken from the recording
};

/// Full windows every hop; one zero-padded tail window when frames remain
/// uncovered; a recording shorter than one window yields a single padded window.
std::vector<WindowSpan> plan_windows(std::size_t frames, const RenderConfig& cfg);

std::vector<HeatmapVolume> window_volume(const HeatmapVolume& vol, const RenderConfig& cfg);

/// Per-copy horizontal offsets drawn from N(0, jitter_sigma); deterministic in seed.
std::vector<double> jitter_offsets(const RenderConfig& cfg, std::uint64_t seed);

SkeletonSequence shift_x(const SkeletonSequence& seq, double offset);

/// jitter_count rigidly x-shifted copies of seq.
std::vector<SkeletonSequence> jitter_augment(const SkeletonSequence& seq, const RenderConfig& cfg, std::uint64_t seed);

/// Mirrors each frame left-right.
HeatmapVolume flip_horizontal(const HeatmapVolume& vol);

/// Stream seed for one recording, independent of processing order.
std::uint64_t augmentation_seed(std::uint64_t master_seed, std::string_view subject_id, std::string_view task_id);

/// Renders the original, every jittered copy and every flipped jittered copy
/// on the original's grid, windows them, and hands each window to `sink`.
/// Per window: 1 original + jitter_count jittered + jitter_count flipped.
void for_each_augmented_window(const SkeletonSequence& seq, const RenderConfig& cfg, std::uint64_t master_seed,
                               const std::function<void(HeatmapVolume&&)>& sink);

std::string volume_filename(const HeatmapVolume& vol);  // {subject}_{task}_{window}_{aug}.npy
std::string encode_volume_npy(const HeatmapVolume& vol);

struct ManifestRow {
    std::string filename;
    std::string subject_id;
    std::string task_id;
    int window_index = 0;
    std::string aug_tag;
    std::optional<Label> label;
    bool fold_usable = true;
};

std::string write_manifest(std::span<const ManifestRow> rows);
std::vector<ManifestRow> read_manifest(std::string_view text);

}  // namespace kinemotion
