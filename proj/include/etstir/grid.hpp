#pragma once

#include <cstdint>
#include <vector>

#include "etstir/geometry.hpp"

namespace etstir {

enum class CellKind : std::uint8_t { fluid, solid_obstacle };

/// Classification of a boundary face (domain edge or fluid/solid face).
enum class FaceKind : std::uint8_t {
    interior,
    inlet,
    outlet,
    wall,
    electrode_a,
    electrode_b,
    reactive
};

enum class Side : std::uint8_t { west, east, south, north };

/// One face of the reacting surface: the fluid cell it borders, which
/// side of that cell the face sits on, and its length per unit depth.
struct ReactiveFace {
    int i = 0;
    int j = 0;
    Side side = Side::north;
    double length = 0.0;
};

/// Uniform structured discretization of a Geometry, with per-cell kinds,
/// boundary-face classification and the enumerated reacting surface.
/// Immutable after build_grid; shareable across sweep workers.
struct Grid {
    Geometry geom;
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    std::vector<CellKind> kind;                // nx*ny, row-major in i
    std::vector<FaceKind> bottom_face;         // nx entries, domain bottom
    std::vector<FaceKind> top_face;            // nx entries, domain top
    std::vector<ReactiveFace> reactive_faces;
    int n_fluid = 0;

    std::size_t cidx(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }
    bool in_range(int i, int j) const {
        return i >= 0 && i < nx && j >= 0 && j < ny;
    }
    bool is_fluid(int i, int j) const {
        return in_range(i, j) && kind[cidx(i, j)] == CellKind::fluid;
    }
    bool is_solid(int i, int j) const {
        return in_range(i, j) && kind[cidx(i, j)] == CellKind::solid_obstacle;
    }

    double xc(int i) const { return (i + 0.5) * dx; }
    double yc(int j) const { return (j + 0.5) * dy; }

    double reactive_length() const {
        double s = 0.0;
        for (const auto& f : reactive_faces) s += f.length;
        return s;
    }
};

/// Rasterizes the geometry onto an nx-by-ny uniform grid (stair-step
/// obstacle, no cut cells). Throws ResolutionError if a feature spans
/// fewer than 2 cells and GeometryError for inconsistent layouts.
Grid build_grid(const Geometry& geometry, int nx, int ny);

} // namespace etstir
