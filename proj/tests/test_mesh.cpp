#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "etstir/errors.hpp"
#include "etstir/grid.hpp"

using namespace etstir;

namespace {

// parallel-plate layout skips the electrode feature checks, so it meshes
// at any resolution; zero cantilever length means no reaction surface
Geometry empty_channel() {
    Geometry g;
    g.electrode_layout = ElectrodeLayout::parallel_plate;
    g.cantilever_length = 0.0;
    return g;
}

int count_kind(const Grid& g, CellKind k) {
    int n = 0;
    for (auto c : g.kind)
        if (c == k) ++n;
    return n;
}

double face_length(const Grid& g, const std::vector<FaceKind>& faces, FaceKind k) {
    int n = 0;
    for (auto f : faces)
        if (f == k) ++n;
    return n * g.dx;
}

} // namespace

TEST_CASE("empty channel meshes to all-fluid cells with no reaction surface") {
    const Grid g = build_grid(empty_channel(), 4, 4);
    CHECK(g.nx == 4);
    CHECK(g.ny == 4);
    CHECK(g.n_fluid == 16);
    CHECK(count_kind(g, CellKind::fluid) == 16);
    CHECK(g.reactive_faces.empty());
    CHECK(g.reactive_length() == 0.0);
}

TEST_CASE("cell areas tile the channel exactly") {
    const Geometry geom; // defaults: coplanar electrodes + suspended cantilever
    const Grid g = build_grid(geom, 256, 96);
    const int n_solid = count_kind(g, CellKind::solid_obstacle);
    CHECK(g.n_fluid + n_solid == g.nx * g.ny);
    const double area = (g.n_fluid + n_solid) * g.dx * g.dy;
    CHECK(area == doctest::Approx(geom.channel_length * geom.channel_height)
                      .epsilon(1e-12));
}

TEST_CASE("electrode faces sit on the bottom wall at the configured span") {
    const Geometry geom;
    const Grid g = build_grid(geom, 256, 96);

    // total face length per electrode = width +- dx
    CHECK(std::abs(face_length(g, g.bottom_face, FaceKind::electrode_a) -
                   geom.electrode_width) <= g.dx);
    CHECK(std::abs(face_length(g, g.bottom_face, FaceKind::electrode_b) -
                   geom.electrode_width) <= g.dx);
    for (auto f : g.top_face) CHECK(f == FaceKind::wall);

    // electrode A spans [cx - gap/2 - width, cx - gap/2] within +-dx
    double a_lo = 1e300, a_hi = -1e300;
    for (int i = 0; i < g.nx; ++i) {
        if (g.bottom_face[i] != FaceKind::electrode_a) continue;
        a_lo = std::min(a_lo, g.xc(i) - 0.5 * g.dx);
        a_hi = std::max(a_hi, g.xc(i) + 0.5 * g.dx);
    }
    CHECK(std::abs(a_lo - geom.electrode_a_min()) <= g.dx);
    CHECK(std::abs(a_hi - geom.electrode_a_max()) <= g.dx);

    // A strictly left of B with the gap between them
    int last_a = -1, first_b = g.nx;
    for (int i = 0; i < g.nx; ++i) {
        if (g.bottom_face[i] == FaceKind::electrode_a) last_a = i;
        if (g.bottom_face[i] == FaceKind::electrode_b && i < first_b) first_b = i;
    }
    CHECK(last_a < first_b);
    CHECK(std::abs((first_b - last_a - 1) * g.dx - geom.electrode_gap) <= 2 * g.dx);
}

TEST_CASE("suspended cantilever rasterizes to the expected solid-cell count") {
    const Geometry geom;
    const Grid g = build_grid(geom, 256, 96);
    const int n_solid = count_kind(g, CellKind::solid_obstacle);
    const int per_row = static_cast<int>(std::round(geom.cantilever_length / g.dx));
    const int per_col = static_cast<int>(std::round(geom.cantilever_thickness / g.dy));
    CHECK(std::abs(n_solid - per_row * per_col) <= per_row + per_col + 1);
}

TEST_CASE("reactive faces border exactly one fluid cell on the reacting side") {
    Geometry geom;
    const Grid g = build_grid(geom, 256, 96);
    CHECK(!g.reactive_faces.empty());
    CHECK(std::abs(g.reactive_length() - geom.cantilever_length) <= g.dx);
    for (const auto& rf : g.reactive_faces) {
        CHECK(rf.side == Side::north); // bottom side of the obstacle
        CHECK(g.is_fluid(rf.i, rf.j));
        CHECK(g.is_solid(rf.i, rf.j + 1));
        CHECK(rf.length == g.dx);
    }

    geom.reactive_sides = ReactiveSides::both;
    const Grid g2 = build_grid(geom, 256, 96);
    CHECK(std::abs(g2.reactive_length() - 2.0 * geom.cantilever_length) <=
          2.0 * g2.dx);

    geom.reactive_sides = ReactiveSides::top;
    const Grid g3 = build_grid(geom, 256, 96);
    for (const auto& rf : g3.reactive_faces) {
        CHECK(rf.side == Side::south); // top side of the obstacle
        CHECK(g3.is_fluid(rf.i, rf.j));
        CHECK(g3.is_solid(rf.i, rf.j - 1));
    }
}

TEST_CASE("top-wall reaction segment marks top faces instead of an obstacle") {
    Geometry geom;
    geom.cantilever_mode = CantileverMode::top_wall_segment;
    const Grid g = build_grid(geom, 256, 96);
    CHECK(count_kind(g, CellKind::solid_obstacle) == 0);
    CHECK(!g.reactive_faces.empty());
    CHECK(std::abs(g.reactive_length() - geom.cantilever_length) <= g.dx);
    int marked = 0;
    for (auto f : g.top_face)
        if (f == FaceKind::reactive) ++marked;
    CHECK(marked == static_cast<int>(g.reactive_faces.size()));
    for (const auto& rf : g.reactive_faces) {
        CHECK(rf.j == g.ny - 1);
        CHECK(rf.side == Side::north);
    }
}

TEST_CASE("refinement keeps interior electrode faces covered") {
    const Geometry geom;
    const Grid coarse = build_grid(geom, 128, 64);
    const Grid fine = build_grid(geom, 256, 128);
    for (int i = 1; i + 1 < coarse.nx; ++i) {
        const FaceKind k = coarse.bottom_face[i];
        if (k != FaceKind::electrode_a && k != FaceKind::electrode_b) continue;
        // faces at a classification edge may shift by one fine cell
        if (coarse.bottom_face[i - 1] != k || coarse.bottom_face[i + 1] != k)
            continue;
        CHECK(fine.bottom_face[2 * i] == k);
        CHECK(fine.bottom_face[2 * i + 1] == k);
    }
}

TEST_CASE("grid construction is deterministic") {
    const Geometry geom;
    const Grid a = build_grid(geom, 256, 96);
    const Grid b = build_grid(geom, 256, 96);
    CHECK(a.kind == b.kind);
    CHECK(a.bottom_face == b.bottom_face);
    CHECK(a.reactive_faces.size() == b.reactive_faces.size());
}

TEST_CASE("under-resolved features are rejected") {
    const Geometry geom;
    CHECK_THROWS_AS(build_grid(geom, 1, 8), ResolutionError);
    // dx = 15.6 um cannot resolve the 15 um gap with 2 cells
    CHECK_THROWS_AS(build_grid(geom, 32, 96), ResolutionError);
    // dy = 4.2 um cannot resolve the 4 um cantilever
    CHECK_THROWS_AS(build_grid(geom, 256, 24), ResolutionError);

    Geometry low = geom;
    low.cantilever_center_y = 3e-6; // 1 um clearance under, < 2 dy
    CHECK_THROWS_AS(build_grid(low, 256, 96), ResolutionError);
}

TEST_CASE("inconsistent layouts are rejected") {
    Geometry outside;
    outside.cantilever_center_y = 1e-6; // bottom edge below the wall
    CHECK_THROWS_AS(build_grid(outside, 256, 96), GeometryError);

    Geometry off_channel;
    off_channel.electrode_pair_center_x = 30e-6; // electrode A hangs out left
    CHECK_THROWS_AS(build_grid(off_channel, 256, 96), GeometryError);

    Geometry negative;
    negative.cantilever_length = -1e-6;
    CHECK_THROWS_AS(negative.validate(), GeometryError);

    Geometry flat;
    flat.channel_height = 0.0;
    CHECK_THROWS_AS(flat.validate(), GeometryError);
}

TEST_CASE("enum names round-trip") {
    for (auto m : {CantileverMode::suspended, CantileverMode::top_wall_segment})
        CHECK(cantilever_mode_from_string(to_string(m)) == m);
    for (auto s : {ReactiveSides::bottom, ReactiveSides::top, ReactiveSides::both})
        CHECK(reactive_sides_from_string(to_string(s)) == s);
    for (auto l : {ElectrodeLayout::coplanar_bottom, ElectrodeLayout::parallel_plate})
        CHECK(electrode_layout_from_string(to_string(l)) == l);
    CHECK_THROWS_AS(cantilever_mode_from_string("sideways"), ConfigError);
    CHECK_THROWS_AS(reactive_sides_from_string("none"), ConfigError);
    CHECK_THROWS_AS(electrode_layout_from_string("triple"), ConfigError);
}
