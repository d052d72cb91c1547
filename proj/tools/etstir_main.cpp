#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etstir/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"AC-electrothermal stirring / binding-kinetics simulator"};

    std::string config_path;
    etstir::RunOptions opt;
    if (const char* env = std::getenv("ETSTIR_OUT")) opt.out_dir = env;

    app.add_option("--config", config_path, "case or sweep config file")
        ->required();
    app.add_option("--set", opt.overrides,
                   "override a config key, e.g. drive.v_rms=25 (repeatable)");
    app.add_option("--out", opt.out_dir,
                   "output directory (default: $ETSTIR_OUT or ./out)");
    app.add_option("--workers", opt.workers,
                   "sweep worker threads (default: config value)");
    app.add_flag("--dump-fields", opt.dump_fields,
                 "write grid/field dumps for a single case");
    app.add_flag("--plot", opt.plot, "write an SVG coverage chart");

    CLI11_PARSE(app, argc, argv);

    try {
        const etstir::RunManifest man =
            etstir::run_from_config(config_path, opt);
        std::cout << "wrote " << man.artifacts.size() << " artifacts to "
                  << man.out_dir << "\n";
        for (const auto& a : man.artifacts)
            std::cout << "  " << a.kind << " " << a.path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
