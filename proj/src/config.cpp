#include "kinemotion/config.hpp"

#include <cmath>
#include <functional>

#include "kinemotion/errors.hpp"
#include "kinemotion/rfecv.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (cfg.has(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
    }
    return cfg;
}

void KeyValueConfig::set(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must look like key=value: " + std::string(assignment));
    const std::string key(trim(assignment.substr(0, eq)));
    if (key.empty()) throw ConfigError("override has an empty key");
    values_[key] = std::string(trim(assignment.substr(eq + 1)));
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::string cleaned(text);
    for (auto& c : cleaned) {
        if (c == ',') c = ' ';
    }
    for (auto tok : split_whitespace(cleaned)) {
        if (auto caret = tok.find('^'); caret != std::string_view::npos) {
            const auto base = parse_double(tok.substr(0, caret));
            const auto exp = parse_double(tok.substr(caret + 1));
            if (!base || !exp) throw ConfigError("bad number '" + std::string(tok) + "'");
            out.push_back(std::pow(*base, *exp));
        } else {
            const auto v = parse_double(tok);
            if (!v || !std::isfinite(*v)) throw ConfigError("bad number '" + std::string(tok) + "'");
            out.push_back(*v);
        }
    }
    return out;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
    const auto d = parse_double(v);
    if (!d || !std::isfinite(*d)) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return *d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    const auto i = parse_int(v);
    if (!i) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return *i;
}

int to_count(const std::string& key, const std::string& v) {
    const auto i = to_int(key, v);
    if (i < 0 || i > 1'000'000) throw ConfigError(key + ": out of range");
    return static_cast<int>(i);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false");
}

std::vector<std::string> to_words(const std::string& v) {
    std::string cleaned = v;
    for (auto& c : cleaned) {
        if (c == ',') c = ' ';
    }
    std::vector<std::string> out;
    for (auto w : split_whitespace(cleaned)) out.emplace_back(w);
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"workspace", [](RunConfig& c, auto&, auto& v) { c.workspace = v; }},
        {"paths.raw", [](RunConfig& c, auto&, auto& v) { c.raw_dir = v; }},
        {"seed",
         [](RunConfig& c, auto& k, auto& v) {
             const auto s = parse_int(v);
             if (!s || *s < 0) throw ConfigError(k + ": expected a non-negative integer");
             c.seed = static_cast<std::uint64_t>(*s);
         }},
        {"jobs", [](RunConfig& c, auto& k, auto& v) { c.jobs = static_cast<unsigned>(to_count(k, v)); }},

        {"cohort.n_per_class", [](RunConfig& c, auto& k, auto& v) { c.cohort.n_per_class = to_count(k, v); }},
        {"cohort.tasks", [](RunConfig& c, auto&, auto& v) { c.cohort.tasks = to_words(v); }},
        {"cohort.duration", [](RunConfig& c, auto& k, auto& v) { c.cohort.duration_seconds = to_double(k, v); }},
        {"cohort.speed_negative",
         [](RunConfig& c, auto& k, auto& v) { c.cohort.class_speed_means[0] = to_double(k, v); }},
        {"cohort.speed_positive",
         [](RunConfig& c, auto& k, auto& v) { c.cohort.class_speed_means[1] = to_double(k, v); }},
        {"cohort.speed_sd", [](RunConfig& c, auto& k, auto& v) { c.cohort.class_speed_sd = to_double(k, v); }},
        {"cohort.distractor_rate",
         [](RunConfig& c, auto& k, auto& v) { c.cohort.distractor_rate = to_double(k, v); }},
        {"cohort.dropout_rate", [](RunConfig& c, auto& k, auto& v) { c.cohort.dropout_rate = to_double(k, v); }},
        {"cohort.jitter", [](RunConfig& c, auto& k, auto& v) { c.cohort.timestamp_jitter = to_double(k, v); }},
        {"cohort.coordinate_step",
         [](RunConfig& c, auto& k, auto& v) { c.cohort.coordinate_step = to_double(k, v); }},
        {"cohort.sample_rate", [](RunConfig& c, auto& k, auto& v) { c.cohort.sample_rate = to_double(k, v); }},

        {"clean.window", [](RunConfig& c, auto& k, auto& v) { c.cleaning.window_seconds = to_double(k, v); }},
        {"clean.hop", [](RunConfig& c, auto& k, auto& v) { c.cleaning.window_hop_seconds = to_double(k, v); }},
        {"clean.max_jump", [](RunConfig& c, auto& k, auto& v) { c.cleaning.max_jump_meters = to_double(k, v); }},
        {"clean.rate", [](RunConfig& c, auto& k, auto& v) { c.cleaning.target_rate = to_double(k, v); }},

        {"render.width", [](RunConfig& c, auto& k, auto& v) { c.render.width = to_count(k, v); }},
        {"render.height", [](RunConfig& c, auto& k, auto& v) { c.render.height = to_count(k, v); }},
        {"render.sigma", [](RunConfig& c, auto& k, auto& v) { c.render.sigma = to_double(k, v); }},
        {"render.window", [](RunConfig& c, auto& k, auto& v) { c.render.window_seconds = to_double(k, v); }},
        {"render.overlap", [](RunConfig& c, auto& k, auto& v) { c.render.overlap_seconds = to_double(k, v); }},
        {"render.jitter_sigma", [](RunConfig& c, auto& k, auto& v) { c.render.jitter_sigma = to_double(k, v); }},
        {"render.jitter_count", [](RunConfig& c, auto& k, auto& v) { c.render.jitter_count = to_count(k, v); }},

        {"cv.folds", [](RunConfig& c, auto& k, auto& v) { c.experiment.folds = to_count(k, v); }},
        {"cv.repetitions", [](RunConfig& c, auto& k, auto& v) { c.experiment.repetitions = to_count(k, v); }},
        {"cv.inner_folds", [](RunConfig& c, auto& k, auto& v) { c.experiment.inner_folds = to_count(k, v); }},
        {"cv.inner_repeats", [](RunConfig& c, auto& k, auto& v) { c.experiment.inner_repeats = to_count(k, v); }},
        {"svm.enabled", [](RunConfig& c, auto& k, auto& v) { c.experiment.svm = to_bool(k, v); }},
        {"svm.c_grid", [](RunConfig& c, auto&, auto& v) { c.experiment.c_grid = parse_number_list(v); }},
        {"forest.enabled", [](RunConfig& c, auto& k, auto& v) { c.experiment.forest = to_bool(k, v); }},
        {"forest.depth_grid",
         [](RunConfig& c, auto& k, auto& v) {
             c.experiment.depth_grid.clear();
             for (double d : parse_number_list(v)) {
                 if (d != std::floor(d)) throw ConfigError(k + ": depths must be integers");
                 c.experiment.depth_grid.push_back(static_cast<int>(d));
             }
         }},
        {"forest.n_trees", [](RunConfig& c, auto& k, auto& v) { c.experiment.n_trees = to_count(k, v); }},
    };
    return table;
}

}  // namespace

RunConfig run_config_from(const KeyValueConfig& kv, RunConfig base) {
    const auto& table = setters();
    for (const auto& [key, value] : kv.values()) {
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(base, key, value);
    }
    return base;
}

void RunConfig::finalize() {
    cohort.seed = seed;
    experiment.seed = seed;
    experiment.jobs = jobs;
    if (experiment.c_grid.empty()) experiment.c_grid = default_c_grid();
    render.rate = cleaning.target_rate;
    cohort.validate();
    cleaning.validate();
    render.validate();
    experiment.validate();
}

std::string default_config_text() {
    RunConfig d;
    d.finalize();
    std::string grid;
    for (double c : d.experiment.c_grid) grid += (grid.empty() ? "" : ",") + format_double(c);
    std::string depths;
    for (int x : d.experiment.depth_grid) depths += (depths.empty() ? "" : ",") + std::to_string(x);
    std::string tasks;
    for (const auto& t : d.cohort.tasks) tasks += (tasks.empty() ? "" : ",") + t;
    auto line = [](const std::string& k, const std::string& v) { return k + " = " + v + "\n"; };
    std::string out;
    out += line("seed", "0");
    out += line("jobs", "0");
    out += line("cohort.n_per_class", std::to_string(d.cohort.n_per_class));
    out += line("cohort.tasks", tasks);
    out += line("cohort.duration", format_double(d.cohort.duration_seconds));
    out += line("cohort.speed_negative", format_double(d.cohort.class_speed_means[0]));
    out += line("cohort.speed_positive", format_double(d.cohort.class_speed_means[1]));
    out += line("cohort.speed_sd", format_double(d.cohort.class_speed_sd));
    out += line("cohort.distractor_rate", format_double(d.cohort.distractor_rate));
    out += line("cohort.dropout_rate", format_double(d.cohort.dropout_rate));
    out += line("cohort.jitter", format_double(d.cohort.timestamp_jitter));
    out += line("cohort.sample_rate", format_double(d.cohort.sample_rate));
    out += line("cohort.coordinate_step", format_double(d.cohort.coordinate_step));
    out += line("clean.window", format_double(d.cleaning.window_seconds));
    out += line("clean.hop", format_double(d.cleaning.window_hop_seconds));
    out += line("clean.max_jump", format_double(d.cleaning.max_jump_meters));
    out += line("clean.rate", format_double(d.cleaning.target_rate));
    out += line("render.width", std::to_string(d.render.width));
    out += line("render.height", std::to_string(d.render.height));
    out += line("render.sigma", format_double(d.render.sigma));
    out += line("render.window", format_double(d.render.window_seconds));
    out += line("render.overlap", format_double(d.render.overlap_seconds));
    out += line("render.jitter_sigma", format_double(d.render.jitter_sigma));
    out += line("render.jitter_count", std::to_string(d.render.jitter_count));
    out += line("cv.folds", std::to_string(d.experiment.folds));
    out += line("cv.repetitions", std::to_string(d.experiment.repetitions));
    out += line("cv.inner_folds", std::to_string(d.experiment.inner_folds));
    out += line("cv.inner_repeats", std::to_string(d.experiment.inner_repeats));
    out += line("svm.enabled", "true");
    out += line("svm.c_grid", grid);
    out += line("forest.enabled", "true");
    out += line("forest.depth_grid", depths);
    out += line("forest.n_trees", std::to_string(d.experiment.n_trees));
    return out;
}

}  // namespace kinemotion
