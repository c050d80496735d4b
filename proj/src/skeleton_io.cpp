#include "kinemotion/skeleton_io.hpp"

#include <algorithm>
#include <set>

#include "kinemotion/errors.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

namespace {

constexpr std::size_t kLogFields = 2 + 3 * kJointCount;

RawEntry parse_entry(std::string_view line, std::size_t line_no) {
    auto fields = split_whitespace(line);
    if (fields.size() != kLogFields) {
        throw ParseError(line_no, "expected " + std::to_string(kLogFields) + " fields, found " +
                                      std::to_string(fields.size()));
    }
    RawEntry e;
    auto ts = parse_double(fields[0]);
    if (!ts || !std::isfinite(*ts) || *ts < 0.0) throw ParseError(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
    e.timestamp = *ts;
    auto id = parse_int(fields[1]);
    if (!id) throw ParseError(line_no, "bad body id '" + std::string(fields[1]) + "'");
    e.body_id = *id;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        for (std::size_t a = 0; a < 3; ++a) {
            auto field = fields[2 + 3 * j + a];
            auto v = parse_double(field);
            if (!v || std::isinf(*v)) {
                throw ParseError(line_no, "bad coordinate '" + std::string(field) + "' for joint " +
                                              std::string(joint_name(j)));
            }
            e.joints[j][a] = std::isnan(*v) ? kMissing : *v;
        }
    }
    return e;
}

bool valid_id(std::string_view id) {
    return !id.empty() && std::none_of(id.begin(), id.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    });
}

}  // namespace

std::size_t RawTrackingLog::distinct_bodies() const {
    std::set<std::int64_t> ids;
    for (const auto& e : entries) ids.insert(e.body_id);
    return ids.size();
}

std::string_view label_name(std::optional<Label> label) {
    if (!label) return "none";
    return *label == Label::Positive ? "positive" : "negative";
}

std::optional<Label> parse_label(std::string_view text) {
    text = trim(text);
    if (text == "positive" || text == "1" || text == "ASD") return Label::Positive;
    if (text == "negative" || text == "0" || text == "TD") return Label::Negative;
    return std::nullopt;
}

LogParseResult parse_tracking_log_lenient(std::string_view text, std::string source_id) {
    LogParseResult result;
    result.log.source_id = std::move(source_id);
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            result.log.entries.push_back(parse_entry(line, line_no));
        } catch (const ParseError& err) {
            result.errors.push_back({err.line(), err.what()});
        }
    }
    std::stable_sort(result.log.entries.begin(), result.log.entries.end(),
                     [](const RawEntry& a, const RawEntry& b) { return a.timestamp < b.timestamp; });
    return result;
}

RawTrackingLog parse_tracking_log(std::string_view text, std::string source_id) {
    auto result = parse_tracking_log_lenient(text, std::move(source_id));
    if (!result.errors.empty()) {
        const auto& first = result.errors.front();
        // message already carries the "line N:" prefix
        throw ParseError(first.line, first.message.substr(first.message.find(": ") + 2));
    }
    if (result.log.entries.empty()) throw EmptyInputError("tracking log '" + result.log.source_id + "' is empty");
    return std::move(result.log);
}

std::string format_tracking_log(const RawTrackingLog& log) {
    std::string out;
    out.reserve(log.entries.size() * 900);
    for (const auto& e : log.entries) {
        out += format_double(e.timestamp);
        out += '\t';
        out += std::to_string(e.body_id);
        out += '\t';
        for (std::size_t j = 0; j < kJointCount; ++j) {
            for (std::size_t a = 0; a < 3; ++a) {
                if (j != 0 || a != 0) out += ' ';
                double v = e.joints[j][a];
                out += is_missing(v) ? std::string("nan") : format_double(v);
            }
        }
        out += '\n';
    }
    return out;
}

std::string write_sequence(const SkeletonSequence& seq) {
    if (!valid_id(seq.subject_id) || !valid_id(seq.task_id)) {
        throw FormatError("subject and task ids must be non-empty and free of whitespace");
    }
    if (!(seq.rate > 0.0) || !std::isfinite(seq.rate)) throw FormatError("rate must be positive");
    std::string out;
    out.reserve(64 + seq.frames.size() * 96 * 20);
    out += std::string(kSequenceMagic) + ' ' + std::to_string(kSequenceFormatVersion) + '\n';
    out += "subject " + seq.subject_id + '\n';
    out += "task " + seq.task_id + '\n';
    out += "rate " + format_double(seq.rate) + '\n';
    out += "label " + std::string(label_name(seq.label)) + '\n';
    out += "frames " + std::to_string(seq.frames.size()) + '\n';
    for (const auto& pose : seq.frames) {
        for (std::size_t j = 0; j < kJointCount; ++j) {
            for (std::size_t a = 0; a < 3; ++a) {
                double v = pose[j][a];
                if (!std::isfinite(v)) throw FormatError("sequence frames must not contain missing values");
                if (j != 0 || a != 0) out += ' ';
                out += format_double(v);
            }
        }
        out += '\n';
    }
    return out;
}

SkeletonSequence read_sequence(std::string_view bytes) {
    auto lines = split(bytes, '\n');
    auto header_value = [&](std::size_t i, std::string_view key) -> std::string_view {
        if (i >= lines.size()) throw FormatError("truncated header, missing '" + std::string(key) + "'");
        auto parts = split_whitespace(lines[i]);
        if (parts.size() != 2 || parts[0] != key) {
            throw FormatError("header line " + std::to_string(i + 1) + ": expected '" + std::string(key) + " <value>'");
        }
        return parts[1];
    };

    auto magic = split_whitespace(lines.empty() ? std::string_view{} : lines[0]);
    if (magic.size() != 2 || magic[0] != kSequenceMagic) throw FormatError("unknown header magic");
    auto version = parse_int(magic[1]);
    if (!version || *version != kSequenceFormatVersion) {
        throw FormatError("unsupported sequence format version '" + std::string(magic[1]) + "'");
    }

    SkeletonSequence seq;
    seq.subject_id = std::string(header_value(1, "subject"));
    seq.task_id = std::string(header_value(2, "task"));
    auto rate = parse_double(header_value(3, "rate"));
    if (!rate || !(*rate > 0.0)) throw FormatError("bad rate");
    seq.rate = *rate;
    auto label_text = header_value(4, "label");
    if (label_text != "none") {
        seq.label = parse_label(label_text);
        if (!seq.label) throw FormatError("bad label '" + std::string(label_text) + "'");
    }
    auto count = parse_int(header_value(5, "frames"));
    if (!count || *count < 0) throw FormatError("bad frame count");

    constexpr std::size_t first_frame_line = 6;
    seq.frames.resize(static_cast<std::size_t>(*count));
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        std::size_t li = first_frame_line + f;
        if (li >= lines.size()) throw FormatError("truncated body: expected " + std::to_string(*count) + " frames");
        auto values = split_whitespace(lines[li]);
        if (values.size() != 3 * kJointCount) throw FormatError("frame " + std::to_string(f) + ": wrong value count");
        for (std::size_t k = 0; k < values.size(); ++k) {
            auto v = parse_double(values[k]);
            if (!v || !std::isfinite(*v)) throw FormatError("frame " + std::to_string(f) + ": bad value");
            seq.frames[f][k / 3][k % 3] = *v;
        }
    }
    for (std::size_t li = first_frame_line + seq.frames.size(); li < lines.size(); ++li) {
        if (!trim(lines[li]).empty()) throw FormatError("trailing data after last frame");
    }
    return seq;
}

}  // namespace kinemotion
