#include "etstir/geometry.hpp"

#include "etstir/errors.hpp"

namespace etstir {

void Geometry::validate() const {
    if (channel_length <= 0.0 || channel_height <= 0.0)
        throw GeometryError("channel dimensions must be positive");

    if (electrode_layout == ElectrodeLayout::coplanar_bottom) {
        if (electrode_width <= 0.0 || electrode_gap <= 0.0)
            throw GeometryError("electrode width and gap must be positive");
        if (electrode_a_min() < 0.0 || electrode_b_max() > channel_length)
            throw GeometryError("electrode pair does not fit inside the channel");
    }

    if (cantilever_length < 0.0 || cantilever_thickness < 0.0)
        throw GeometryError("cantilever dimensions must be nonnegative");

    // zero length (or thickness, in suspended mode) means "no reaction
    // surface"; placement is only constrained when the feature exists
    if (cantilever_mode == CantileverMode::suspended) {
        if (has_cantilever_obstacle() &&
            (cantilever_x_min() <= 0.0 || cantilever_x_max() >= channel_length ||
             cantilever_y_min() <= 0.0 || cantilever_y_max() >= channel_height))
            throw GeometryError("suspended cantilever must lie strictly inside the channel");
    } else {
        if (cantilever_length > 0.0 &&
            (cantilever_x_min() < 0.0 || cantilever_x_max() > channel_length))
            throw GeometryError("top-wall reaction segment must lie within the channel");
    }
}

std::string to_string(CantileverMode m) {
    return m == CantileverMode::suspended ? "suspended" : "top_wall_segment";
}

std::string to_string(ReactiveSides s) {
    switch (s) {
        case ReactiveSides::bottom: return "bottom";
        case ReactiveSides::top: return "top";
        default: return "both";
    }
}

std::string to_string(ElectrodeLayout l) {
    return l == ElectrodeLayout::coplanar_bottom ? "coplanar_bottom"
                                                 : "parallel_plate";
}

CantileverMode cantilever_mode_from_string(const std::string& s) {
    if (s == "suspended") return CantileverMode::suspended;
    if (s == "top_wall_segment") return CantileverMode::top_wall_segment;
    throw ConfigError("unknown cantilever mode '" + s + "'");
}

ReactiveSides reactive_sides_from_string(const std::string& s) {
    if (s == "bottom") return ReactiveSides::bottom;
    if (s == "top") return ReactiveSides::top;
    if (s == "both") return ReactiveSides::both;
    throw ConfigError("unknown reactive sides '" + s + "'");
}

ElectrodeLayout electrode_layout_from_string(const std::string& s) {
    if (s == "coplanar_bottom") return ElectrodeLayout::coplanar_bottom;
    if (s == "parallel_plate") return ElectrodeLayout::parallel_plate;
    throw ConfigError("unknown electrode layout '" + s + "'");
}

} // namespace etstir
