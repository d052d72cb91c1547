#include "etstir/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "etstir/errors.hpp"

namespace etstir {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: no newline surprises
    if (!out) throw ConfigError("cannot write file: " + path);
    return out;
}

} // namespace

void write_series_csv(const std::string& path,
                      const std::vector<SamplePoint>& series) {
    auto out = open_for_write(path);
    out << "t_seconds,mean_coverage_mol_per_m2,min_a,max_a\n";
    for (const auto& s : series)
        out << format_number(s.t) << ',' << format_number(s.mean_coverage)
            << ',' << format_number(s.min_a) << ',' << format_number(s.max_a)
            << '\n';
}

std::string sweep_value_column(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::electrode_width: return "electrode_width_m";
        case SweepAxis::gap: return "gap_m";
        case SweepAxis::frequency: return "frequency_Hz";
        case SweepAxis::voltage: return "voltage_V";
    }
    return "?";
}

void write_sweep_csv(const std::string& path, SweepAxis axis,
                     const std::vector<SweepRow>& rows) {
    auto out = open_for_write(path);
    out << sweep_value_column(axis)
        << ",dT_max_K,v_down_max_m_per_s,u_max_m_per_s,t_steady_s\n";
    for (const auto& row : rows) {
        if (!row.result) {
            out << "# " << format_number(row.value)
                << " failed: " << row.error << '\n';
            continue;
        }
        const CaseResult& r = *row.result;
        out << format_number(row.value) << ','
            << format_number(r.temperature_rise_max) << ','
            << format_number(r.v_down_max) << ',' << format_number(r.u_max)
            << ',';
        if (r.t_steady)
            out << format_number(*r.t_steady);
        else
            out << "not_reached";
        out << '\n';
    }
}

void write_metadata(const std::string& path, const RunSpec& spec) {
    auto out = open_for_write(path);
    const CaseConfig& c = spec.base;
    out << "# resolved configuration echo; feed back through --config to rerun\n";
    out << "# v_rms is the rms potential DIFFERENCE across the pair, applied as +/- v_rms/2\n";
    out << "# cp and k_thermal are standard water values at 300 K, not measured inputs\n";
    out << "mode = "
        << (spec.mode == RunSpec::Mode::sweep ? "sweep" : "case") << "\n\n";

    out << "[grid]\n";
    out << "nx = " << c.nx << "\n";
    out << "ny = " << c.ny << "\n\n";

    const Geometry& g = c.geometry;
    out << "[geometry]\n";
    out << "channel_length = " << format_number(g.channel_length) << "\n";
    out << "channel_height = " << format_number(g.channel_height) << "\n";
    out << "electrode_layout = " << to_string(g.electrode_layout) << "\n";
    out << "electrode_width = " << format_number(g.electrode_width) << "\n";
    out << "electrode_gap = " << format_number(g.electrode_gap) << "\n";
    out << "electrode_pair_center_x = "
        << format_number(g.electrode_pair_center_x) << "\n";
    out << "cantilever_mode = " << to_string(g.cantilever_mode) << "\n";
    out << "cantilever_length = " << format_number(g.cantilever_length) << "\n";
    out << "cantilever_thickness = " << format_number(g.cantilever_thickness)
        << "\n";
    out << "cantilever_center_x = " << format_number(g.cantilever_center_x)
        << "\n";
    out << "cantilever_center_y = " << format_number(g.cantilever_center_y)
        << "\n";
    out << "reactive_sides = " << to_string(g.reactive_sides) << "\n\n";

    const FluidProps& p = c.props;
    out << "[props]\n";
    out << "rho = " << format_number(p.rho) << "\n";
    out << "cp = " << format_number(p.cp) << "\n";
    out << "k_thermal = " << format_number(p.k_thermal) << "\n";
    out << "sigma = " << format_number(p.sigma) << "\n";
    out << "eps_rel = " << format_number(p.eps_rel) << "\n";
    out << "eta = " << format_number(p.eta) << "\n";
    out << "alpha_sigma = " << format_number(p.alpha_sigma) << "\n";
    out << "alpha_eps = " << format_number(p.alpha_eps) << "\n";
    out << "diffusivity = " << format_number(p.diffusivity) << "\n";
    out << "t_ref = " << format_number(p.t_ref) << "\n\n";

    const ReactionParams& r = c.reaction;
    out << "[reaction]\n";
    out << "k_a = " << format_number(r.k_a) << "\n";
    out << "k_d = " << format_number(r.k_d) << "\n";
    out << "b0 = " << format_number(r.b0) << "\n";
    out << "a_inlet = " << format_number(r.a_inlet) << "\n\n";

    out << "[drive]\n";
    out << "frequency = " << format_number(c.drive.frequency) << "\n";
    out << "v_rms = " << format_number(c.drive.v_rms) << "\n\n";

    out << "[run]\n";
    out << "inlet_mean = " << format_number(c.inlet_mean) << "\n";
    out << "steady_fraction = " << format_number(c.steady_fraction) << "\n";
    out << "t_max = " << format_number(c.t_max) << "\n";
    out << "dt = " << format_number(c.dt) << "\n";
    out << "sample_dt = " << format_number(c.sample_dt) << "\n";
    out << "thermal_convection = " << (c.thermal_convection ? "true" : "false")
        << "\n";
    out << "isothermal_walls = " << (c.isothermal_walls ? "true" : "false")
        << "\n";
    out << "picard_tol = " << format_number(c.picard_tol) << "\n";
    out << "picard_max = " << c.picard_max << "\n";
    out << "flow_tol = " << format_number(c.flow_tol) << "\n";

    if (spec.mode == RunSpec::Mode::sweep) {
        out << "\n[sweep]\n";
        out << "axis = " << to_string(spec.axis) << "\n";
        out << "values = ";
        for (std::size_t k = 0; k < spec.values.size(); ++k) {
            if (k) out << ',';
            out << format_number(spec.values[k]);
        }
        out << "\n";
        out << "workers = " << spec.workers << "\n";
    }
}

void dump_grid(const std::string& path, const Grid& grid) {
    auto out = open_for_write(path);
    out << "# cell codes, one row per j starting at the bottom wall: "
           "0 fluid, 1 solid\n";
    out << grid.nx << ' ' << grid.ny << ' ' << format_number(grid.dx) << ' '
        << format_number(grid.dy) << '\n';
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i)
            out << (grid.is_fluid(i, j) ? '0' : '1');
        out << '\n';
    }
}

void dump_field(const std::string& path, const std::string& name,
                const Field2D& field) {
    auto out = open_for_write(path);
    out << "# " << name << '\n';
    out << field.nx << ' ' << field.ny << '\n';
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            if (i) out << ' ';
            out << format_number(field(i, j));
        }
        out << '\n';
    }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

// fixed-precision pixel coordinate, deterministic across platforms
std::string px(double x) {
    char buf[32];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

} // namespace

void emit_plot(const std::string& path, const std::vector<PlotLine>& lines,
               const std::string& x_label, const std::string& y_label) {
    bool any = false;
    for (const auto& l : lines) any = any || !l.points.empty();
    if (!any) throw ConfigError("plot has no data");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& l : lines)
        for (const auto& [x, y] : l.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + (ymin == 0.0 ? 1.0 : std::abs(ymin));

    const double width = 860, height = 540;
    const double ml = 90, mr = 180, mt = 30, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) {
        return mt + ph - (y - ymin) / (ymax - ymin) * ph;
    };

    auto out = open_for_write(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g font-family=\"monospace\" font-size=\"12\">\n";

    // frame and ticks
    out << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\""
        << px(pw) << "\" height=\"" << px(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int nticks = 5;
    for (int k = 0; k <= nticks; ++k) {
        const double fx = xmin + (xmax - xmin) * k / nticks;
        const double fy = ymin + (ymax - ymin) * k / nticks;
        const double gx = sx(fx), gy = sy(fy);
        out << "<line x1=\"" << px(gx) << "\" y1=\"" << px(mt + ph)
            << "\" x2=\"" << px(gx) << "\" y2=\"" << px(mt + ph + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(gx) << "\" y=\"" << px(mt + ph + 20)
            << "\" text-anchor=\"middle\">" << format_number(fx) << "</text>\n";
        out << "<line x1=\"" << px(ml - 5) << "\" y1=\"" << px(gy)
            << "\" x2=\"" << px(ml) << "\" y2=\"" << px(gy)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(ml - 8) << "\" y=\"" << px(gy + 4)
            << "\" text-anchor=\"end\">" << format_number(fy) << "</text>\n";
    }
    out << "<text x=\"" << px(ml + pw / 2) << "\" y=\"" << px(height - 15)
        << "\" text-anchor=\"middle\">" << svg_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << px(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << px(mt + ph / 2) << ")\">" << svg_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].points.empty()) continue;
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t n = 0; n < lines[k].points.size(); ++n) {
            if (n) out << ' ';
            out << px(sx(lines[k].points[n].first)) << ','
                << px(sy(lines[k].points[n].second));
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << px(ml + pw + 12) << "\" y1=\"" << px(ly - 4)
            << "\" x2=\"" << px(ml + pw + 34) << "\" y2=\"" << px(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << px(ml + pw + 40) << "\" y=\"" << px(ly)
            << "\">" << svg_escape(lines[k].label) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

} // namespace etstir
