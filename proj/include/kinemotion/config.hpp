#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinemotion/experiment.hpp"
#include "kinemotion/synth_data.hpp"
#include "kinemotion/track_cleaning.hpp"
#include "kinemotion/volume_gen.hpp"

namespace kinemotion {

/// Flat `key = value` text; `#` starts a comment. Keys are unique.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text);

    /// Adds or replaces a key; `assignment` is "key=value".
    void set(std::string_view assignment);
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct RunConfig {
    std::filesystem::path workspace = ".";
    std::filesystem::path raw_dir;  // empty: workspace/raw
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    CohortSpec cohort;
    CleaningConfig cleaning;
    RenderConfig render;
    ExperimentConfig experiment;

    std::filesystem::path raw() const { return raw_dir.empty() ? workspace / "raw" : raw_dir; }
    std::filesystem::path clean() const { return workspace / "clean"; }
    std::filesystem::path features() const { return workspace / "features"; }
    std::filesystem::path volumes() const { return workspace / "volumes"; }
    std::filesystem::path reports() const { return workspace / "reports"; }
    std::filesystem::path models() const { return workspace / "models"; }

    /// Pushes seed and jobs into the nested configs and validates everything.
    void finalize();
};

/// Applies known keys; throws ConfigError on unknown keys or bad values.
RunConfig run_config_from(const KeyValueConfig& kv, RunConfig base = {});

/// Every key understood by run_config_from, with its default as text.
std::string default_config_text();

/// Numbers or powers written as `2^k`, separated by commas or spaces.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace kinemotion
