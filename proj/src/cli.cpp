#include "etstir/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "etstir/errors.hpp"
#include "etstir/output.hpp"

namespace fs = std::filesystem;

namespace etstir {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void dump_case_fields(RunManifest& man, const std::string& out_dir,
                      const CaseConfig& cfg, const CoupledFields& cf,
                      const Field2D& a_final) {
    const Grid grid = build_grid(cfg.geometry, cfg.nx, cfg.ny);
    auto add = [&](const std::string& name, const Field2D& f) {
        const std::string path = join(out_dir, name + ".txt");
        dump_field(path, name, f);
        man.artifacts.push_back({"field_dump", path});
    };
    const std::string gpath = join(out_dir, "grid.txt");
    dump_grid(gpath, grid);
    man.artifacts.push_back({"field_dump", gpath});
    add("phi", cf.potential.phi);
    add("e_sq", cf.e.e2);
    add("joule", cf.joule);
    add("temperature", cf.temperature);
    add("u", cf.flow.u);
    add("v", cf.flow.v);
    add("p", cf.flow.p);
    add("force_x", cf.force.fx);
    add("force_y", cf.force.fy);
    add("a_final", a_final);
}

std::vector<PlotLine> series_lines(const std::vector<SweepRow>& rows,
                                   SweepAxis axis) {
    // legend ordered by axis value
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a].value < rows[b].value;
    });
    std::vector<PlotLine> lines;
    for (std::size_t k : order) {
        if (!rows[k].result) continue;
        PlotLine line;
        line.label = to_string(axis) + " = " + format_number(rows[k].value);
        for (const auto& s : rows[k].result->series)
            line.points.emplace_back(s.t, s.mean_coverage);
        lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace

RunManifest run_from_config(const std::string& config_path,
                            const RunOptions& options) {
    ConfigMap map = parse_config_file(config_path);
    for (const auto& ov : options.overrides) apply_override(map, ov);
    RunSpec spec = build_run_spec(map);
    if (options.workers > 0) spec.workers = options.workers;

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec || !fs::is_directory(options.out_dir))
        throw ConfigError("cannot create output directory: " + options.out_dir);

    RunManifest man;
    man.out_dir = options.out_dir;

    const std::string meta_path = join(options.out_dir, "metadata.cfg");
    write_metadata(meta_path, spec);
    man.artifacts.push_back({"metadata", meta_path});

    if (spec.mode == RunSpec::Mode::single_case) {
        CoupledFields cf;
        Field2D a_final;
        CaseResult res = options.dump_fields
                             ? run_case(spec.base, &cf, &a_final)
                             : run_case(spec.base);
        man.wall_seconds_per_case.push_back(res.wall_seconds);

        const std::string series_path = join(options.out_dir, "series.csv");
        write_series_csv(series_path, res.series);
        man.artifacts.push_back({"series_csv", series_path});

        if (options.dump_fields)
            dump_case_fields(man, options.out_dir, spec.base, cf, a_final);
        if (options.plot) {
            PlotLine line;
            line.label = "v_rms = " + format_number(spec.base.drive.v_rms);
            for (const auto& s : res.series)
                line.points.emplace_back(s.t, s.mean_coverage);
            const std::string plot_path = join(options.out_dir, "series.svg");
            emit_plot(plot_path, {line}, "time (s)",
                      "mean coverage (mol/m^2)");
            man.artifacts.push_back({"plot_svg", plot_path});
        }
    } else {
        std::vector<SweepRow> rows =
            run_sweep(spec.base, spec.axis, spec.values, spec.workers);

        const std::string sweep_path = join(options.out_dir, "sweep.csv");
        write_sweep_csv(sweep_path, spec.axis, rows);
        man.artifacts.push_back({"sweep_csv", sweep_path});

        for (const auto& row : rows) {
            if (!row.result) continue;
            man.wall_seconds_per_case.push_back(row.result->wall_seconds);
            const std::string name = "series_" + to_string(spec.axis) + "_" +
                                     format_number(row.value) + ".csv";
            const std::string path = join(options.out_dir, name);
            write_series_csv(path, row.result->series);
            man.artifacts.push_back({"series_csv", path});
        }
        if (options.plot) {
            const auto lines = series_lines(rows, spec.axis);
            if (!lines.empty()) {
                const std::string plot_path = join(options.out_dir, "sweep.svg");
                emit_plot(plot_path, lines, "time (s)",
                          "mean coverage (mol/m^2)");
                man.artifacts.push_back({"plot_svg", plot_path});
            }
        }
    }

    const std::string man_path = join(options.out_dir, "manifest.txt");
    {
        std::ofstream out(man_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write file: " + man_path);
        for (const auto& a : man.artifacts) out << a.kind << ' ' << a.path << '\n';
        for (std::size_t k = 0; k < man.wall_seconds_per_case.size(); ++k)
            out << "# case " << k << " wall_seconds "
                << format_number(man.wall_seconds_per_case[k]) << '\n';
    }
    return man;
}

} // namespace etstir
