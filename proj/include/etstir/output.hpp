#pragma once

#include <string>
#include <utility>
#include <vector>

#include "etstir/config.hpp"
#include "etstir/driver.hpp"

namespace etstir {

/// Shortest round-trip decimal form; locale-independent.
std::string format_number(double x);

void write_series_csv(const std::string& path,
                      const std::vector<SamplePoint>& series);

/// First CSV column per sweep axis (voltage_V, electrode_width_m, ...).
std::string sweep_value_column(SweepAxis axis);

/// Sweep table mirroring the per-case headline numbers; failed rows become
/// comment lines carrying the diagnostic.
void write_sweep_csv(const std::string& path, SweepAxis axis,
                     const std::vector<SweepRow>& rows);

/// Re-parseable config echo of a resolved run, with provenance notes for
/// the derived settings as comments.
void write_metadata(const std::string& path, const RunSpec& spec);

void dump_grid(const std::string& path, const Grid& grid);
void dump_field(const std::string& path, const std::string& name,
                const Field2D& field);

struct PlotLine {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG line chart; byte-identical output for identical
/// input. Throws ConfigError when there is nothing to draw.
void emit_plot(const std::string& path, const std::vector<PlotLine>& lines,
               const std::string& x_label, const std::string& y_label);

} // namespace etstir
