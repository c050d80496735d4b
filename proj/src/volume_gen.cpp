#include "kinemotion/volume_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kinemotion/errors.hpp"
#include "kinemotion/npy.hpp"
#include "kinemotion/rng.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

void RenderConfig::validate() const {
    if (width < 2 || height < 2) throw ConfigError("render width and height must be at least 2");
    if (!(sigma > 0.0)) throw ConfigError("render sigma must be positive");
    if (!(rate > 0.0)) throw ConfigError("render rate must be positive");
    if (!(window_seconds > 0.0) || !(overlap_seconds >= 0.0) || !(overlap_seconds < window_seconds)) {
        throw ConfigError("render overlap must be smaller than the window");
    }
    if (!(jitter_sigma >= 0.0) || jitter_count < 0) throw ConfigError("bad jitter parameters");
}

std::size_t RenderConfig::window_frames() const {
    return static_cast<std::size_t>(std::llround(window_seconds * rate));
}

std::size_t RenderConfig::hop_frames() const {
    return static_cast<std::size_t>(std::llround((window_seconds - overlap_seconds) * rate));
}

PixelGrid make_grid(const SkeletonSequence& seq, const RenderConfig& cfg) {
    cfg.validate();
    if (seq.frames.empty()) throw EmptyInputError("cannot build a pixel grid for an empty sequence");
    PixelGrid g;
    g.width = cfg.width;
    g.height = cfg.height;
    g.x_min = g.y_min = std::numeric_limits<double>::infinity();
    g.x_max = g.y_max = -std::numeric_limits<double>::infinity();
    for (const auto& pose : seq.frames) {
        for (const auto& p : pose) {
            g.x_min = std::min(g.x_min, p[0]);
            g.x_max = std::max(g.x_max, p[0]);
            g.y_min = std::min(g.y_min, p[1]);
            g.y_max = std::max(g.y_max, p[1]);
        }
    }
    if (!(g.x_max > g.x_min)) throw DegenerateError("degenerate grid: x extent is zero");
    if (!(g.y_max > g.y_min)) throw DegenerateError("degenerate grid: y extent is zero");
    return g;
}

Frame render_frame(std::span<const JointXY> joints, const PixelGrid& grid, double sigma) {
    Frame f;
    f.height = grid.height;
    f.width = grid.width;
    f.pixels.assign(static_cast<std::size_t>(f.height) * f.width, 0.0);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));

    // The 2D Gaussian factorises into a column term and a row term.
    std::vector<double> gx(static_cast<std::size_t>(f.width));
    std::vector<double> gy(static_cast<std::size_t>(f.height));
    for (const auto& j : joints) {
        for (int h = 0; h < f.width; ++h) {
            const double d = (grid.x_at(h) - j[0]) / sigma;
            gx[static_cast<std::size_t>(h)] = std::exp(-0.5 * d * d);
        }
        for (int r = 0; r < f.height; ++r) {
            const double d = (grid.y_at(f.height - 1 - r) - j[1]) / sigma;
            gy[static_cast<std::size_t>(r)] = norm * std::exp(-0.5 * d * d);
        }
        for (int r = 0; r < f.height; ++r) {
            const double wy = gy[static_cast<std::size_t>(r)];
            if (wy == 0.0) continue;
            double* row = f.pixels.data() + static_cast<std::size_t>(r) * f.width;
            for (int h = 0; h < f.width; ++h) row[h] += wy * gx[static_cast<std::size_t>(h)];
        }
    }
    return f;
}

std::string jitter_tag(int copy) { return "jitter" + std::to_string(copy); }
std::string flip_jitter_tag(int copy) { return "flipjitter" + std::to_string(copy); }

HeatmapVolume render_sequence(const SkeletonSequence& seq, const RenderConfig& cfg) {
    return render_sequence(seq, make_grid(seq, cfg), cfg);
}

HeatmapVolume render_sequence(const SkeletonSequence& seq, const PixelGrid& grid, const RenderConfig& cfg) {
    cfg.validate();
    HeatmapVolume vol;
    vol.subject_id = seq.subject_id;
    vol.task_id = seq.task_id;
    vol.label = seq.label;
    vol.frames = vol.valid_frames = seq.frames.size();
    vol.height = grid.height;
    vol.width = grid.width;
    vol.data.resize(vol.frames * vol.frame_size());
    std::array<JointXY, kJointCount> xy{};
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        for (std::size_t j = 0; j < kJointCount; ++j) xy[j] = {seq.frames[t][j][0], seq.frames[t][j][1]};
        auto frame = render_frame(xy, grid, cfg.sigma);
        std::transform(frame.pixels.begin(), frame.pixels.end(),
                       vol.data.begin() + static_cast<std::ptrdiff_t>(t * vol.frame_size()),
                       [](double v) { return static_cast<float>(v); });
    }
    return vol;
}

std::vector<WindowSpan> plan_windows(std::size_t frames, const RenderConfig& cfg) {
    const std::size_t width = cfg.window_frames();
    const std::size_t hop = cfg.hop_frames();
    std::vector<WindowSpan> spans;
    if (frames == 0) return spans;
    if (frames <= width) {
        spans.push_back({0, frames});
        return spans;
    }
    std::size_t start = 0;
    for (; start + width <= frames; start += hop) spans.push_back({start, width});
    const std::size_t covered = spans.back().start + width;
    if (covered < frames) {
        const std::size_t tail = spans.back().start + hop;
        spans.push_back({tail, frames - tail});
    }
    return spans;
}

std::vector<HeatmapVolume> window_volume(const HeatmapVolume& vol, const RenderConfig& cfg) {
    const std::size_t width = cfg.window_frames();
    std::vector<HeatmapVolume> out;
    int index = 0;
    for (const auto& span : plan_windows(vol.valid_frames, cfg)) {
        HeatmapVolume w;
        w.subject_id = vol.subject_id;
        w.task_id = vol.task_id;
        w.label = vol.label;
        w.window_index = index++;
        w.aug_tag = vol.aug_tag;
        w.frames = width;
        w.valid_frames = span.length;
        w.height = vol.height;
        w.width = vol.width;
        w.data.assign(width * vol.frame_size(), 0.0f);
        auto first = vol.data.begin() + static_cast<std::ptrdiff_t>(span.start * vol.frame_size());
        std::copy(first, first + static_cast<std::ptrdiff_t>(span.length * vol.frame_size()), w.data.begin());
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<double> jitter_offsets(const RenderConfig& cfg, std::uint64_t seed) {
    std::vector<double> eps;
    eps.reserve(static_cast<std::size_t>(cfg.jitter_count));
    for (int k = 0; k < cfg.jitter_count; ++k) {
        std::mt19937_64 gen(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
        std::normal_distribution<double> normal(0.0, cfg.jitter_sigma);
        eps.push_back(cfg.jitter_sigma > 0.0 ? normal(gen) : 0.0);
    }
    return eps;
}

SkeletonSequence shift_x(const SkeletonSequence& seq, double offset) {
    SkeletonSequence out = seq;
    for (auto& pose : out.frames) {
        for (auto& p : pose) p[0] += offset;
    }
    return out;
}

std::vector<SkeletonSequence> jitter_augment(const SkeletonSequence& seq, const RenderConfig& cfg, std::uint64_t seed) {
    std::vector<SkeletonSequence> copies;
    for (double eps : jitter_offsets(cfg, seed)) copies.push_back(shift_x(seq, eps));
    return copies;
}

HeatmapVolume flip_horizontal(const HeatmapVolume& vol) {
    HeatmapVolume out = vol;
    const std::size_t rows = vol.frames * static_cast<std::size_t>(vol.height);
    for (std::size_t r = 0; r < rows; ++r) {
        auto* row = out.data.data() + r * vol.width;
        std::reverse(row, row + vol.width);
    }
    return out;
}

std::uint64_t augmentation_seed(std::uint64_t master_seed, std::string_view subject_id, std::string_view task_id) {
    return derive_seed(master_seed, {hash_string(subject_id), hash_string(task_id)});
}

void for_each_augmented_window(const SkeletonSequence& seq, const RenderConfig& cfg, std::uint64_t master_seed,
                               const std::function<void(HeatmapVolume&&)>& sink) {
    const PixelGrid grid = make_grid(seq, cfg);
    for (auto& w : window_volume(render_sequence(seq, grid, cfg), cfg)) sink(std::move(w));

    const auto offsets = jitter_offsets(cfg, augmentation_seed(master_seed, seq.subject_id, seq.task_id));
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        const int copy = static_cast<int>(k) + 1;
        auto vol = render_sequence(shift_x(seq, offsets[k]), grid, cfg);
        vol.aug_tag = jitter_tag(copy);
        for (auto& w : window_volume(vol, cfg)) {
            auto flipped = flip_horizontal(w);
            flipped.aug_tag = flip_jitter_tag(copy);
            sink(std::move(w));
            sink(std::move(flipped));
        }
    }
}

std::string volume_filename(const HeatmapVolume& vol) {
    return vol.subject_id + "_" + vol.task_id + "_" + std::to_string(vol.window_index) + "_" + vol.aug_tag + ".npy";
}

std::string encode_volume_npy(const HeatmapVolume& vol) {
    const std::array<std::size_t, 3> shape = {vol.frames, static_cast<std::size_t>(vol.height),
                                              static_cast<std::size_t>(vol.width)};
    return npy::encode_float32(shape, vol.data);
}

std::string write_manifest(std::span<const ManifestRow> rows) {
    std::string out = "filename,subject_id,task_id,window_index,aug_tag,label,fold_usable\n";
    for (const auto& r : rows) {
        out += r.filename + ',' + r.subject_id + ',' + r.task_id + ',' + std::to_string(r.window_index) + ',' +
               r.aug_tag + ',' + std::string(label_name(r.label)) + ',' + (r.fold_usable ? "1" : "0") + '\n';
    }
    return out;
}

std::vector<ManifestRow> read_manifest(std::string_view text) {
    std::vector<ManifestRow> rows;
    auto lines = split(text, '\n');
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto line = trim(lines[li]);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != 7) throw ParseError(li + 1, "manifest rows have 7 columns");
        ManifestRow r;
        r.filename = std::string(cells[0]);
        r.subject_id = std::string(cells[1]);
        r.task_id = std::string(cells[2]);
        auto w = parse_int(cells[3]);
        if (!w) throw ParseError(li + 1, "bad window index");
        r.window_index = static_cast<int>(*w);
        r.aug_tag = std::string(cells[4]);
        if (cells[5] != "none") r.label = parse_label(cells[5]);
        r.fold_usable = cells[6] == "1";
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace kinemotion
