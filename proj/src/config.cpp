#include "etstir/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "etstir/errors.hpp"

namespace etstir {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string where(const ConfigMap::Entry& e) {
    return e.line > 0 ? "line " + std::to_string(e.line) : "command-line override";
}

double parse_double(const ConfigMap::Entry& e) {
    const std::string& v = e.value;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + e.key + "' (" + where(e) +
                          "): expected a number, got '" + v + "'");
    return x;
}

int parse_int(const ConfigMap::Entry& e) {
    const std::string& v = e.value;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + e.key + "' (" + where(e) +
                          "): expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool parse_bool(const ConfigMap::Entry& e) {
    const std::string& v = e.value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("key '" + e.key + "' (" + where(e) +
                      "): expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const ConfigMap::Entry& e) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("key '" + e.key + "' (" + where(e) +
                              "): empty list element");
        char* end = nullptr;
        const double x = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError("key '" + e.key + "' (" + where(e) +
                              "): bad list element '" + item + "'");
        out.push_back(x);
    }
    if (out.empty())
        throw ConfigError("key '" + e.key + "' (" + where(e) + "): empty list");
    return out;
}

} // namespace

void ConfigMap::set(const std::string& key, const std::string& value, int line) {
    for (auto& e : entries)
        if (e.key == key) {
            e.value = value;
            e.line = line;
            return;
        }
    entries.push_back({key, value, line});
}

const ConfigMap::Entry* ConfigMap::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": empty value for '" + key + "'");
        map.set(section.empty() ? key : section + "." + key, value, lineno);
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must be key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (value.empty())
        throw ConfigError("override '" + key + "' has an empty value");
    map.set(key, value, 0);
}

RunSpec build_run_spec(const ConfigMap& map) {
    // copy into a working set; whatever is left unconsumed is unknown
    std::map<std::string, ConfigMap::Entry> pending;
    for (const auto& e : map.entries) pending[e.key] = e;

    auto take = [&](const std::string& key) -> std::optional<ConfigMap::Entry> {
        auto it = pending.find(key);
        if (it == pending.end()) return std::nullopt;
        ConfigMap::Entry e = it->second;
        pending.erase(it);
        return e;
    };

    RunSpec spec;
    if (const auto e = take("mode")) {
        if (e->value == "case")
            spec.mode = RunSpec::Mode::single_case;
        else if (e->value == "sweep")
            spec.mode = RunSpec::Mode::sweep;
        else
            throw ConfigError("key 'mode' (" + where(*e) +
                              "): expected case or sweep, got '" + e->value + "'");
    }

    CaseConfig& c = spec.base;
    if (const auto e = take("grid.nx")) c.nx = parse_int(*e);
    if (const auto e = take("grid.ny")) c.ny = parse_int(*e);

    Geometry& g = c.geometry;
    if (const auto e = take("geometry.channel_length")) g.channel_length = parse_double(*e);
    if (const auto e = take("geometry.channel_height")) g.channel_height = parse_double(*e);
    if (const auto e = take("geometry.electrode_layout")) {
        try {
            g.electrode_layout = electrode_layout_from_string(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError("key '" + e->key + "' (" + where(*e) + "): " +
                              err.what());
        }
    }
    if (const auto e = take("geometry.electrode_width")) g.electrode_width = parse_double(*e);
    if (const auto e = take("geometry.electrode_gap")) g.electrode_gap = parse_double(*e);
    if (const auto e = take("geometry.electrode_pair_center_x"))
        g.electrode_pair_center_x = parse_double(*e);
    if (const auto e = take("geometry.cantilever_mode")) {
        try {
            g.cantilever_mode = cantilever_mode_from_string(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError("key '" + e->key + "' (" + where(*e) + "): " +
                              err.what());
        }
    }
    if (const auto e = take("geometry.cantilever_length")) g.cantilever_length = parse_double(*e);
    if (const auto e = take("geometry.cantilever_thickness"))
        g.cantilever_thickness = parse_double(*e);
    if (const auto e = take("geometry.cantilever_center_x"))
        g.cantilever_center_x = parse_double(*e);
    if (const auto e = take("geometry.cantilever_center_y"))
        g.cantilever_center_y = parse_double(*e);
    if (const auto e = take("geometry.reactive_sides")) {
        try {
            g.reactive_sides = reactive_sides_from_string(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError("key '" + e->key + "' (" + where(*e) + "): " +
                              err.what());
        }
    }

    FluidProps& p = c.props;
    if (const auto e = take("props.rho")) p.rho = parse_double(*e);
    if (const auto e = take("props.cp")) p.cp = parse_double(*e);
    if (const auto e = take("props.k_thermal")) p.k_thermal = parse_double(*e);
    if (const auto e = take("props.sigma")) p.sigma = parse_double(*e);
    if (const auto e = take("props.eps_rel")) p.eps_rel = parse_double(*e);
    if (const auto e = take("props.eta")) p.eta = parse_double(*e);
    if (const auto e = take("props.alpha_sigma")) p.alpha_sigma = parse_double(*e);
    if (const auto e = take("props.alpha_eps")) p.alpha_eps = parse_double(*e);
    if (const auto e = take("props.diffusivity")) p.diffusivity = parse_double(*e);
    if (const auto e = take("props.t_ref")) p.t_ref = parse_double(*e);

    ReactionParams& r = c.reaction;
    const auto ka_si = take("reaction.k_a");
    const auto ka_molar = take("reaction.k_a_M");
    if (ka_si && ka_molar)
        throw ConfigError("reaction.k_a and reaction.k_a_M both set (" +
                          where(*ka_molar) + "); pick one");
    if (ka_si) r.k_a = parse_double(*ka_si);
    if (ka_molar) r.k_a = parse_double(*ka_molar) * 1e-3; // 1/(M s) -> m^3/(mol s)
    if (const auto e = take("reaction.k_d")) r.k_d = parse_double(*e);
    if (const auto e = take("reaction.b0")) r.b0 = parse_double(*e);
    const auto a_si = take("reaction.a_inlet");
    const auto a_molar = take("reaction.a_inlet_M");
    if (a_si && a_molar)
        throw ConfigError("reaction.a_inlet and reaction.a_inlet_M both set (" +
                          where(*a_molar) + "); pick one");
    if (a_si) r.a_inlet = parse_double(*a_si);
    if (a_molar) r.a_inlet = parse_double(*a_molar) * 1e3; // M -> mol/m^3

    if (const auto e = take("drive.frequency")) c.drive.frequency = parse_double(*e);
    if (const auto e = take("drive.v_rms")) c.drive.v_rms = parse_double(*e);

    if (const auto e = take("run.inlet_mean")) c.inlet_mean = parse_double(*e);
    if (const auto e = take("run.steady_fraction")) c.steady_fraction = parse_double(*e);
    if (const auto e = take("run.t_max")) c.t_max = parse_double(*e);
    if (const auto e = take("run.dt")) c.dt = parse_double(*e);
    if (const auto e = take("run.sample_dt")) c.sample_dt = parse_double(*e);
    if (const auto e = take("run.thermal_convection")) c.thermal_convection = parse_bool(*e);
    if (const auto e = take("run.isothermal_walls")) c.isothermal_walls = parse_bool(*e);
    if (const auto e = take("run.picard_tol")) c.picard_tol = parse_double(*e);
    if (const auto e = take("run.picard_max")) c.picard_max = parse_int(*e);
    if (const auto e = take("run.flow_tol")) c.flow_tol = parse_double(*e);

    if (const auto e = take("sweep.axis")) {
        try {
            spec.axis = sweep_axis_from_string(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError("key '" + e->key + "' (" + where(*e) + "): " +
                              err.what());
        }
    }
    if (const auto e = take("sweep.values")) spec.values = parse_list(*e);
    if (const auto e = take("sweep.workers")) spec.workers = parse_int(*e);

    if (!pending.empty()) {
        const auto& e = pending.begin()->second;
        throw ConfigError("unknown key '" + e.key + "' (" + where(e) + ")");
    }
    if (spec.mode == RunSpec::Mode::sweep && spec.values.empty())
        throw ConfigError("sweep mode needs sweep.values");
    if (spec.workers < 1) throw ConfigError("sweep.workers must be >= 1");
    c.validate();
    return spec;
}

} // namespace etstir
