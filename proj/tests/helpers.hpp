#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "kinemotion/joints.hpp"
#include "kinemotion/skeleton_io.hpp"
#include "kinemotion/text.hpp"

namespace testutil {

using namespace kinemotion;

inline Pose filled_pose(double x, double y, double z) {
    Pose p{};
    for (auto& j : p) j = {x, y, z};
    return p;
}

/// Pose whose joint j sits at base + (j * 0.01, j * 0.02, 0).
inline Pose spread_pose(double x, double y, double z) {
    Pose p{};
    for (std::size_t j = 0; j < kJointCount; ++j) p[j] = {x + 0.01 * j, y + 0.02 * j, z};
    return p;
}

/// Sequence sampled from a pose-valued function of time at `rate`.
inline SkeletonSequence sequence_from(const std::function<Pose(double)>& f, std::size_t frames, double rate = 10.0,
                                      std::string subject = "S1", std::string task = "T2A1") {
    SkeletonSequence s;
    s.subject_id = std::move(subject);
    s.task_id = std::move(task);
    s.rate = rate;
    for (std::size_t i = 0; i < frames; ++i) s.frames.push_back(f(static_cast<double>(i) / rate));
    return s;
}

inline std::string read_text(const std::string& path) {
    return kinemotion::read_file(path);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("kinemotion_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

/// Runs a shell command; returns its exit status and captures stdout+stderr.
inline int run_command(const std::string& command, std::string* output = nullptr) {
    static std::atomic<int> counter{0};
    const auto capture = std::filesystem::temp_directory_path() /
                         ("kinemotion_out_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    const int status = std::system((command + " > '" + capture.string() + "' 2>&1").c_str());
    if (output) *output = kinemotion::read_file(capture);
    std::filesystem::remove(capture);
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

}  // namespace testutil
