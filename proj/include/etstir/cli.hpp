#pragma once

#include <string>
#include <vector>

#include "etstir/config.hpp"

namespace etstir {

struct Artifact {
    std::string kind; // series_csv | sweep_csv | field_dump | plot_svg | metadata
    std::string path; // absolute or out_dir-relative as written
};

struct RunManifest {
    std::string out_dir;
    std::vector<Artifact> artifacts;
    std::vector<double> wall_seconds_per_case;
};

struct RunOptions {
    std::vector<std::string> overrides; // key=value, applied in order
    std::string out_dir = "out";
    int workers = 0; // 0 = take the config's value
    bool dump_fields = false;
    bool plot = false;
};

/// Loads the config, runs the case or sweep it describes, writes all
/// artifacts plus manifest.txt into out_dir. Throws on any failure that
/// prevents the run (per-row sweep failures are recorded, not thrown).
RunManifest run_from_config(const std::string& config_path,
                            const RunOptions& options);

} // namespace etstir
