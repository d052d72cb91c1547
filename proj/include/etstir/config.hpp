#pragma once

#include <string>
#include <vector>

#include "etstir/driver.hpp"

namespace etstir {

/// Flat key/value store with source line numbers. Sections in the file
/// become dot-path prefixes, so "[drive]\nv_rms = 25" and an override
/// "drive.v_rms=25" address the same key. Later assignments win.
struct ConfigMap {
    struct Entry {
        std::string key;
        std::string value;
        int line = 0; // 0 = command-line override
    };
    std::vector<Entry> entries;

    void set(const std::string& key, const std::string& value, int line);
    const Entry* find(const std::string& key) const;
};

/// Parses "# comment", "[section]" and "key = value" lines.
/// Throws ConfigError naming the offending line.
ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

/// Applies one "key=value" override on top of the file contents.
void apply_override(ConfigMap& map, const std::string& assignment);

struct RunSpec {
    enum class Mode { single_case, sweep };
    Mode mode = Mode::single_case;
    CaseConfig base;
    SweepAxis axis = SweepAxis::voltage;
    std::vector<double> values; // sweep only
    int workers = 1;
};

/// Validates every key; unknown keys are errors that name the key and its
/// source line. The result passes CaseConfig::validate.
RunSpec build_run_spec(const ConfigMap& map);

} // namespace etstir
