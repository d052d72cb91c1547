#include "etstir/grid.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "etstir/errors.hpp"

namespace etstir {

namespace {

void check_feature_resolution(const std::string& name, double extent,
                              double spacing) {
    if (extent < 2.0 * spacing)
        throw ResolutionError(name + " spans fewer than 2 cells (" +
                              std::to_string(extent) + " m at spacing " +
                              std::to_string(spacing) + " m)");
}

// flood fill over fluid cells, 4-connected
void check_connectivity(const Grid& g) {
    std::vector<std::uint8_t> seen(g.kind.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int j = 0; j < g.ny; ++j)
        if (g.is_fluid(0, j)) {
            stack.emplace_back(0, j);
            seen[g.cidx(0, j)] = 1;
        }
    if (stack.empty()) throw GeometryError("no fluid cells on the inlet");
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        const int di[4] = {-1, 1, 0, 0};
        const int dj[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (g.is_fluid(ii, jj) && !seen[g.cidx(ii, jj)]) {
                seen[g.cidx(ii, jj)] = 1;
                stack.emplace_back(ii, jj);
            }
        }
    }
    bool outlet_reached = false;
    for (int j = 0; j < g.ny; ++j)
        if (g.is_fluid(g.nx - 1, j) && seen[g.cidx(g.nx - 1, j)])
            outlet_reached = true;
    if (!outlet_reached)
        throw GeometryError("fluid region does not connect inlet to outlet");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.is_fluid(i, j) && !seen[g.cidx(i, j)])
                throw GeometryError("fluid region is not simply connected");
}

} // namespace

Grid build_grid(const Geometry& geometry, int nx, int ny) {
    geometry.validate();
    if (nx < 2 || ny < 2) throw ResolutionError("grid must be at least 2x2");

    Grid g;
    g.geom = geometry;
    g.nx = nx;
    g.ny = ny;
    g.dx = geometry.channel_length / nx;
    g.dy = geometry.channel_height / ny;
    g.kind.assign(static_cast<std::size_t>(nx) * ny, CellKind::fluid);
    g.bottom_face.assign(nx, FaceKind::wall);
    g.top_face.assign(nx, FaceKind::wall);

    if (geometry.electrode_layout == ElectrodeLayout::coplanar_bottom) {
        check_feature_resolution("electrode gap", geometry.electrode_gap, g.dx);
        check_feature_resolution("electrode width", geometry.electrode_width, g.dx);
        for (int i = 0; i < nx; ++i) {
            const double x = g.xc(i);
            if (x >= geometry.electrode_a_min() && x < geometry.electrode_a_max())
                g.bottom_face[i] = FaceKind::electrode_a;
            else if (x >= geometry.electrode_b_min() && x < geometry.electrode_b_max())
                g.bottom_face[i] = FaceKind::electrode_b;
        }
    } else {
        for (int i = 0; i < nx; ++i) {
            g.bottom_face[i] = FaceKind::electrode_a;
            g.top_face[i] = FaceKind::electrode_b;
        }
    }

    if (geometry.has_cantilever_obstacle()) {
        check_feature_resolution("cantilever thickness",
                                 geometry.cantilever_thickness, g.dy);
        check_feature_resolution("cantilever length",
                                 geometry.cantilever_length, g.dx);
        // clearance below/above must also be meshable
        check_feature_resolution("clearance under cantilever",
                                 geometry.cantilever_y_min(), g.dy);
        check_feature_resolution("clearance above cantilever",
                                 geometry.channel_height - geometry.cantilever_y_max(),
                                 g.dy);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double x = g.xc(i), y = g.yc(j);
                if (x > geometry.cantilever_x_min() && x < geometry.cantilever_x_max() &&
                    y > geometry.cantilever_y_min() && y < geometry.cantilever_y_max())
                    g.kind[g.cidx(i, j)] = CellKind::solid_obstacle;
            }

        const bool react_bottom = geometry.reactive_sides == ReactiveSides::bottom ||
                                  geometry.reactive_sides == ReactiveSides::both;
        const bool react_top = geometry.reactive_sides == ReactiveSides::top ||
                               geometry.reactive_sides == ReactiveSides::both;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (!g.is_solid(i, j)) continue;
                if (react_bottom && g.is_fluid(i, j - 1))
                    g.reactive_faces.push_back({i, j - 1, Side::north, g.dx});
                if (react_top && g.is_fluid(i, j + 1))
                    g.reactive_faces.push_back({i, j + 1, Side::south, g.dx});
            }
    } else if (geometry.cantilever_mode == CantileverMode::top_wall_segment &&
               geometry.cantilever_length > 0.0) {
        check_feature_resolution("reaction segment length",
                                 geometry.cantilever_length, g.dx);
        for (int i = 0; i < nx; ++i) {
            const double x = g.xc(i);
            if (x >= geometry.cantilever_x_min() && x < geometry.cantilever_x_max()) {
                g.top_face[i] = FaceKind::reactive;
                g.reactive_faces.push_back({i, ny - 1, Side::north, g.dx});
            }
        }
    }

    g.n_fluid = 0;
    for (auto k : g.kind)
        if (k == CellKind::fluid) ++g.n_fluid;

    check_connectivity(g);
    return g;
}

} // namespace etstir
