#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "helpers.hpp"
#include "kinemotion/errors.hpp"
#include "kinemotion/npy.hpp"
#include "kinemotion/rng.hpp"
#include "kinemotion/skeleton_io.hpp"
#include "kinemotion/text.hpp"

using namespace kinemotion;
using testutil::spread_pose;

namespace {

std::string log_line(double t, int body, const Pose& p) {
    std::string s = format_double(t) + "\t" + std::to_string(body) + "\t";
    for (std::size_t j = 0; j < kJointCount; ++j) {
        for (int a = 0; a < 3; ++a) {
            if (j || a) s += ' ';
            s += std::isnan(p[j][a]) ? std::string("nan") : format_double(p[j][a]);
        }
    }
    return s + "\n";
}

SkeletonSequence golden_sequence() {
    SkeletonSequence s;
    s.subject_id = "S007";
    s.task_id = "T2A3";
    s.label = Label::Positive;
    for (int f = 0; f < 2; ++f) {
        Pose p{};
        for (std::size_t j = 0; j < kJointCount; ++j) {
            const double jd = static_cast<double>(j);
            p[j] = {jd * 0.25, -jd * 0.125 + f, 2 + f * 0.5};
        }
        s.frames.push_back(p);
    }
    return s;
}

}  // namespace

TEST_CASE("joint table and groups") {
    CHECK(kJointCount == 32);
    CHECK(joint_name(0) == "PELVIS");
    CHECK(joint_name(31) == "EAR_RIGHT");
    std::multiset<std::size_t> seen;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
        for (auto j : group_members(static_cast<BodyGroup>(g))) {
            seen.insert(index(j));
            CHECK(group_of(j) == static_cast<BodyGroup>(g));
        }
    }
    CHECK(seen.size() == 32);
    for (std::size_t j = 0; j < 32; ++j) CHECK(seen.count(j) == 1);
    CHECK(group_members(BodyGroup::Head).size() == 6);
    CHECK(group_members(BodyGroup::Body).size() == 6);
    CHECK(group_members(BodyGroup::FootLeft).size() == 1);
    CHECK(group_members(BodyGroup::FootLeft)[0] == Joint::FootLeft);
    CHECK(task_order("EF") == 0);
    CHECK(task_order("T2B4") == 11);
    CHECK(!is_known_task("T9"));
}

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = d(gen);
        CHECK(parse_double(format_double(v)).value() == v);
    }
    CHECK(format_double(10.0) == "10");
    CHECK(std::isnan(parse_double("nan").value()));
    CHECK(!parse_double("1.5x"));
    CHECK(parse_double("+2").value() == 2.0);
    CHECK(parse_int("-7").value() == -7);
    CHECK(!parse_int("7.0"));
}

TEST_CASE("derived seeds are stable and key-sensitive") {
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(hash_string("T2A1") != hash_string("T2A2"));
}

TEST_CASE("parse a single well-formed line") {
    const auto log = parse_tracking_log(log_line(0.0, 1, spread_pose(0, 0, 2)));
    REQUIRE(log.entries.size() == 1);
    CHECK(log.distinct_bodies() == 1);
    CHECK(log.entries[0].timestamp == 0.0);
    CHECK(log.entries[0].body_id == 1);
    CHECK(log.entries[0].joints[5][1] == doctest::Approx(0.1));
}

TEST_CASE("two bodies at the same timestamp") {
    const auto log = parse_tracking_log(log_line(0.5, 1, spread_pose(0, 0, 2)) + log_line(0.5, 2, spread_pose(1, 0, 2)));
    CHECK(log.entries.size() == 2);
    CHECK(log.distinct_bodies() == 2);
}

TEST_CASE("line with 31 joints names its line") {
    std::string text = log_line(0.0, 1, spread_pose(0, 0, 2));
    std::string bad = log_line(0.1, 1, spread_pose(0, 0, 2));
    bad = bad.substr(0, bad.rfind(' '));
    bad = bad.substr(0, bad.rfind(' '));
    bad = bad.substr(0, bad.rfind(' ')) + "\n";
    try {
        parse_tracking_log(text + bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("non-numeric and empty input") {
    std::string line = log_line(0.0, 1, spread_pose(0, 0, 2));
    line.replace(line.find("0.01"), 4, "abcd");
    CHECK_THROWS_AS(parse_tracking_log(line), ParseError);
    CHECK_THROWS_AS(parse_tracking_log(""), EmptyInputError);
    CHECK_THROWS_AS(parse_tracking_log("\n\n"), EmptyInputError);
    CHECK_THROWS_AS(parse_tracking_log("nan\t1\t" + line.substr(line.find('\t', 2) + 1)), ParseError);
}

TEST_CASE("missing coordinates are preserved") {
    Pose p = spread_pose(0, 0, 2);
    p[4] = {kMissing, kMissing, kMissing};
    const auto log = parse_tracking_log(log_line(1.0, 3, p));
    CHECK(has_missing(log.entries[0].joints[4]));
    CHECK(!has_missing(log.entries[0].joints[5]));
}

TEST_CASE("unsorted input is sorted by timestamp") {
    const auto log = parse_tracking_log(log_line(0.3, 1, spread_pose(0, 0, 2)) + log_line(0.1, 1, spread_pose(0, 0, 2)) +
                                        log_line(0.2, 2, spread_pose(0, 0, 2)));
    REQUIRE(log.entries.size() == 3);
    CHECK(log.entries[0].timestamp == 0.1);
    CHECK(log.entries[1].timestamp == 0.2);
    CHECK(log.entries[2].timestamp == 0.3);
}

TEST_CASE("lenient parsing never drops a line silently") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::string text;
        std::size_t non_empty = 0;
        for (int i = 0; i < 30; ++i) {
            const int kind = static_cast<int>(gen() % 5);
            if (kind == 0) {
                text += "garbage line\n";
                ++non_empty;
            } else if (kind == 1) {
                text += "\n";
            } else {
                text += log_line(0.1 * i, 1, spread_pose(0, 0, 2));
                ++non_empty;
            }
        }
        const auto r = parse_tracking_log_lenient(text);
        CHECK(r.log.entries.size() + r.errors.size() == non_empty);
    }
}

TEST_CASE("tracking log formatting round-trips") {
    RawTrackingLog log;
    Pose p = spread_pose(0.123456789, -0.5, 2.25);
    p[7][2] = kMissing;
    log.entries.push_back({0.0, 1, p});
    log.entries.push_back({0.0333, 2, spread_pose(1, 1, 1)});
    const auto back = parse_tracking_log(format_tracking_log(log));
    REQUIRE(back.entries.size() == 2);
    for (std::size_t e = 0; e < 2; ++e) {
        CHECK(back.entries[e].timestamp == log.entries[e].timestamp);
        CHECK(back.entries[e].body_id == log.entries[e].body_id);
        for (std::size_t j = 0; j < kJointCount; ++j) {
            for (int a = 0; a < 3; ++a) {
                const double x = log.entries[e].joints[j][a], y = back.entries[e].joints[j][a];
                CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
            }
        }
    }
}

TEST_CASE("sequence round-trip is exact") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> d(0.0, 1.0);
    SkeletonSequence s;
    s.subject_id = "child-12";
    s.task_id = "PEAP";
    for (int f = 0; f < 2; ++f) {
        Pose p{};
        for (auto& j : p) j = {d(gen), d(gen), d(gen)};
        s.frames.push_back(p);
    }
    const auto back = read_sequence(write_sequence(s));
    CHECK(back == s);
    CHECK(back.rate == 10.0);
    CHECK(!back.label);

    s.label = Label::Negative;
    s.rate = 12.5;
    CHECK(read_sequence(write_sequence(s)) == s);
}

TEST_CASE("sequence writer matches the golden file") {
    const std::string golden = read_file(std::string(KINEMOTION_GOLDEN_DIR) + "/two_frames.kmseq");
    CHECK(write_sequence(golden_sequence()) == golden);
    CHECK(read_sequence(golden) == golden_sequence());
}

TEST_CASE("sequence reader rejects damaged input") {
    const std::string good = write_sequence(golden_sequence());
    auto with = [&](std::string from, std::string to) {
        std::string s = good;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(read_sequence(with("KMSEQ", "KMSEX")), FormatError);
    CHECK_THROWS_AS(read_sequence(with("KMSEQ 1", "KMSEQ 2")), FormatError);
    CHECK_THROWS_AS(read_sequence(with("frames 2", "frames 3")), FormatError);
    CHECK_THROWS_AS(read_sequence(good + "1 2 3\n"), FormatError);
    CHECK_THROWS_AS(read_sequence(with("0 0 2 0.25", "0 nan 2 0.25")), FormatError);
    CHECK_THROWS_AS(read_sequence(""), FormatError);
}

TEST_CASE("labels") {
    CHECK(label_name(Label::Positive) == "positive");
    CHECK(label_name(std::nullopt) == "none");
    CHECK(parse_label("ASD") == Label::Positive);
    CHECK(parse_label("TD") == Label::Negative);
    CHECK(parse_label("1") == Label::Positive);
    CHECK(!parse_label("maybe"));
}

TEST_CASE("npy encode layout") {
    const std::vector<std::size_t> shape = {2, 3, 4};
    std::vector<float> data(24);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(i) * 0.5f;
    const auto bytes = npy::encode_float32(shape, data);
    CHECK(bytes.substr(0, 6) == "\x93NUMPY");
    CHECK(bytes[6] == 1);
    CHECK(bytes[7] == 0);
    const std::size_t header_len = static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
    CHECK((10 + header_len) % 64 == 0);
    const std::string header = bytes.substr(10, header_len);
    CHECK(header.find("'descr': '<f4'") != std::string::npos);
    CHECK(header.find("'fortran_order': False") != std::string::npos);
    CHECK(header.find("'shape': (2, 3, 4)") != std::string::npos);
    CHECK(header.back() == '\n');
    CHECK(bytes.size() == 10 + header_len + 24 * 4);

    const auto back = npy::decode_float32(bytes);
    CHECK(back.shape == shape);
    CHECK(back.data == data);
}

TEST_CASE("npy rejects foreign arrays") {
    const std::vector<std::size_t> shape = {3};
    const std::vector<float> data = {1, 2, 3};
    auto bytes = npy::encode_float32(shape, data);
    auto swapped = bytes;
    swapped.replace(swapped.find("<f4"), 3, "<f8");
    CHECK_THROWS_AS(npy::decode_float32(swapped), FormatError);
    CHECK_THROWS_AS(npy::decode_float32(bytes.substr(0, bytes.size() - 1)), FormatError);
    CHECK_THROWS_AS(npy::decode_float32("not an npy"), FormatError);
}
