#pragma once

#include <string>

namespace etstir {

enum class CantileverMode { suspended, top_wall_segment };
enum class ReactiveSides { bottom, top, both };

/// Electrode arrangement. The coplanar pair on the bottom wall is the
/// production layout; the parallel-plate variant (whole bottom wall at
/// +V/2, whole top wall at -V/2) exists for analytic checks.
enum class ElectrodeLayout { coplanar_bottom, parallel_plate };

/// Channel with a coplanar electrode pair on the bottom wall and a
/// rectangular cantilever whose reacting surface binds the analyte.
/// All lengths in meters.
struct Geometry {
    double channel_length = 500e-6;
    double channel_height = 100e-6;

    ElectrodeLayout electrode_layout = ElectrodeLayout::coplanar_bottom;
    double electrode_width = 60e-6;
    double electrode_gap = 15e-6;
    double electrode_pair_center_x = 250e-6;

    CantileverMode cantilever_mode = CantileverMode::suspended;
    double cantilever_length = 40e-6;
    double cantilever_thickness = 4e-6;
    double cantilever_center_x = 250e-6;
    double cantilever_center_y = 20e-6;
    ReactiveSides reactive_sides = ReactiveSides::bottom;

    // electrode extents on the bottom wall; A left of the gap, B right
    double electrode_a_min() const {
        return electrode_pair_center_x - 0.5 * electrode_gap - electrode_width;
    }
    double electrode_a_max() const {
        return electrode_pair_center_x - 0.5 * electrode_gap;
    }
    double electrode_b_min() const {
        return electrode_pair_center_x + 0.5 * electrode_gap;
    }
    double electrode_b_max() const {
        return electrode_pair_center_x + 0.5 * electrode_gap + electrode_width;
    }

    double cantilever_x_min() const {
        return cantilever_center_x - 0.5 * cantilever_length;
    }
    double cantilever_x_max() const {
        return cantilever_center_x + 0.5 * cantilever_length;
    }
    double cantilever_y_min() const {
        return cantilever_center_y - 0.5 * cantilever_thickness;
    }
    double cantilever_y_max() const {
        return cantilever_center_y + 0.5 * cantilever_thickness;
    }

    bool has_cantilever_obstacle() const {
        return cantilever_mode == CantileverMode::suspended &&
               cantilever_length > 0.0 && cantilever_thickness > 0.0;
    }

    /// Throws GeometryError on an inconsistent layout.
    void validate() const;
};

std::string to_string(CantileverMode m);
std::string to_string(ReactiveSides s);
std::string to_string(ElectrodeLayout l);
CantileverMode cantilever_mode_from_string(const std::string& s);
ReactiveSides reactive_sides_from_string(const std::string& s);
ElectrodeLayout electrode_layout_from_string(const std::string& s);

} // namespace etstir
