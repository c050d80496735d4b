#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinemotion/joints.hpp"

namespace kinemotion {

/// One tracker sample: a single body at a single timestamp.
/// Missing coordinates are NaN; the joint array is never shortened.
struct RawEntry {
    double timestamp = 0.0;
    std::int64_t body_id = 0;
    Pose joints{};
};

struct RawTrackingLog {
    std::string source_id;
    std::vector<RawEntry> entries;  // non-decreasing timestamp

    std::size_t distinct_bodies() const;
};

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

std::string_view label_name(std::optional<Label> label);
std::optional<Label> parse_label(std::string_view text);

/// Uniformly sampled, gap-free trajectory for one subject and task.
struct SkeletonSequence {
    std::string subject_id;
    std::string task_id;
    double rate = 10.0;
    std::vector<Pose> frames;
    std::optional<Label> label;

    double duration() const { return frames.empty() ? 0.0 : static_cast<double>(frames.size()) / rate; }

    bool operator==(const SkeletonSequence&) const = default;
};

struct LineError {
    std::size_t line = 0;
    std::string message;
};

struct LogParseResult {
    RawTrackingLog log;
    std::vector<LineError> errors;
};

/// Parses every line it can and reports the rest; entries + errors always
/// equals the number of non-empty lines.
LogParseResult parse_tracking_log_lenient(std::string_view text, std::string source_id = {});

/// Strict variant: throws ParseError on the first malformed line and
/// EmptyInputError if the text holds no entries.
RawTrackingLog parse_tracking_log(std::string_view text, std::string source_id = {});

std::string format_tracking_log(const RawTrackingLog& log);

inline constexpr std::string_view kSequenceMagic = "KMSEQ";
inline constexpr int kSequenceFormatVersion = 1;

/// Serialises to the versioned text container described in docs/formats.md.
std::string write_sequence(const SkeletonSequence& seq);

/// Throws FormatError on bad magic, unsupported version or damaged body.
SkeletonSequence read_sequence(std::string_view bytes);

}  // namespace kinemotion
