#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "etstir/errors.hpp"
#include "etstir/grid.hpp"
#include "etstir/transport.hpp"

using namespace etstir;

namespace {

// oversized cantilever so the reaction surface resolves on a cheap grid
Grid rig_grid() {
    Geometry g;
    g.electrode_layout = ElectrodeLayout::parallel_plate;
    g.cantilever_length = 100e-6;
    g.cantilever_thickness = 20e-6;
    g.cantilever_center_y = 30e-6;
    return build_grid(g, 48, 24);
}

Grid sealed_1d_grid() {
    Geometry g;
    g.electrode_layout = ElectrodeLayout::parallel_plate;
    g.cantilever_length = 0.0;
    return build_grid(g, 64, 4);
}

double bulk_mass(const Grid& g, const Field2D& a) {
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.is_fluid(i, j)) m += a(i, j) * g.dx * g.dy;
    return m;
}

} // namespace

TEST_CASE("nothing happens in an empty system") {
    const Grid g = rig_grid();
    const FluidProps props;
    ReactionParams reaction;
    reaction.a_inlet = 0.0;
    const Field2D a0(g.nx, g.ny, 0.0);
    const std::vector<double> ab(g.reactive_faces.size(), 0.0);

    std::vector<double> flux;
    const Field2D a = advance_concentration(g, nullptr, a0, ab, reaction, props,
                                            0.5, {}, &flux);
    CHECK(a.max_abs() == 0.0);
    for (double f : flux) CHECK(f == 0.0);
}

TEST_CASE("pure diffusion leaves a uniform field unchanged") {
    const Grid g = rig_grid();
    const FluidProps props;
    ReactionParams reaction;
    reaction.k_a = 0.0;
    reaction.k_d = 0.0;
    const double c = 7e-6;

    SUBCASE("open ends with a matching feed") {
        reaction.a_inlet = c;
        const Field2D a0(g.nx, g.ny, c);
        const std::vector<double> ab(g.reactive_faces.size(), 0.0);
        const Field2D a =
            advance_concentration(g, nullptr, a0, ab, reaction, props, 0.5);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.is_fluid(i, j))
                    CHECK(a(i, j) == doctest::Approx(c).epsilon(1e-12));
    }
    SUBCASE("sealed box") {
        reaction.a_inlet = 0.0;
        TransportOptions opts;
        opts.seal_ends = true;
        const Field2D a0(g.nx, g.ny, c);
        const std::vector<double> ab(g.reactive_faces.size(), 0.0);
        const Field2D a =
            advance_concentration(g, nullptr, a0, ab, reaction, props, 0.5, opts);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.is_fluid(i, j))
                    CHECK(a(i, j) == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("sealed step profile spreads like the analytic error function") {
    const Grid g = sealed_1d_grid();
    const FluidProps props; // D = 1e-10 m^2/s
    ReactionParams reaction;
    reaction.a_inlet = 0.0; // sealed: no feed anywhere
    TransportOptions opts;
    opts.seal_ends = true;

    const double a0 = 1e-5;
    const double x_mid = 0.5 * g.geom.channel_length;
    Field2D a(g.nx, g.ny, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.xc(i) < x_mid) a(i, j) = a0;

    const double mass0 = bulk_mass(g, a);
    const double dt = 0.05;
    const int steps = 100; // t = 5 s
    const std::vector<double> ab; // no reactive faces on this grid
    double mass_drift = 0.0;
    for (int s = 0; s < steps; ++s) {
        a = advance_concentration(g, nullptr, a, ab, reaction, props, dt, opts);
        mass_drift = std::max(mass_drift, std::abs(bulk_mass(g, a) - mass0));
    }
    CHECK(mass_drift <= 1e-10 * mass0);

    // infinite-domain solution; the walls are ~11 sigma away at t = 5 s
    const double t_end = steps * dt;
    const double denom = 2.0 * std::sqrt(props.diffusivity * t_end);
    for (int i = 0; i < g.nx; ++i) {
        const double exact = 0.5 * a0 * std::erfc((g.xc(i) - x_mid) / denom);
        CHECK(std::abs(a(i, 1) - exact) <= 0.02 * a0);
    }
}

TEST_CASE("surface update follows the Langmuir closed forms") {
    ReactionParams reaction; // production constants

    SUBCASE("no analyte, no coverage") {
        const SurfaceUpdate upd =
            advance_surface({0.0, 0.0}, {0.0, 0.0}, reaction, 0.5);
        CHECK(upd.ab[0] == 0.0);
        CHECK(upd.ab[1] == 0.0);
        CHECK(upd.clamped == 0);
    }

    SUBCASE("irreversible binding saturates monotonically") {
        ReactionParams irr = reaction;
        irr.k_d = 0.0;
        const double a = irr.a_inlet;           // k_a * a = 0.026 1/s
        const double t_sat = 5.0 / (irr.k_a * a); // ~192 s
        const double dt = 0.2;
        std::vector<double> ab = {0.0};
        double prev = 0.0;
        for (double t = 0.0; t < t_sat - 1e-9; t += dt) {
            ab = advance_surface(ab, {a}, irr, dt).ab;
            CHECK(ab[0] >= prev - 1e-12);
            CHECK(ab[0] <= irr.b0);
            prev = ab[0];
        }
        CHECK(ab[0] >= 0.993 * irr.b0);
    }

    SUBCASE("production constants track the analytic transient within 1%") {
        // ab_eq = 2.1667e-8 mol/m^2, rate 0.036 1/s
        CHECK(reaction.ab_eq() == doctest::Approx(2.1667e-8).epsilon(5e-4));
        CHECK(reaction.wellmixed_rate() == doctest::Approx(0.036).epsilon(1e-9));

        const double dt = 0.5;
        std::vector<double> ab = {0.0};
        double t = 0.0;
        for (double t_check : {10.0, 30.0, 60.0, 128.0}) {
            while (t < t_check - 1e-9) {
                ab = advance_surface(ab, {reaction.a_inlet}, reaction, dt).ab;
                t += dt;
            }
            CHECK(ab[0] ==
                  doctest::Approx(wellmixed_coverage(reaction, t)).epsilon(0.01));
        }
    }

    SUBCASE("out-of-range input is clamped and counted") {
        const SurfaceUpdate upd =
            advance_surface({2.0 * reaction.b0}, {0.0}, reaction, 0.5);
        CHECK(upd.ab[0] == reaction.b0);
        CHECK(upd.clamped == 1);
    }
}

TEST_CASE("well-mixed oracle hits its landmarks") {
    const ReactionParams reaction;
    CHECK(wellmixed_coverage(reaction, 0.0) == 0.0);
    CHECK(wellmixed_coverage(reaction, 127.9) ==
          doctest::Approx(0.99 * reaction.ab_eq()).epsilon(1e-4));
    CHECK(wellmixed_coverage(reaction, 1e9) ==
          doctest::Approx(reaction.ab_eq()).epsilon(1e-12));
}

TEST_CASE("mean coverage is the length-weighted face average") {
    Grid g;
    g.reactive_faces = {{0, 0, Side::north, 1.0}, {1, 0, Side::north, 3.0}};
    const ReactionParams reaction;
    CHECK(mean_coverage(g, {reaction.b0, reaction.b0}) ==
          doctest::Approx(reaction.b0));
    CHECK(mean_coverage(g, {0.0, reaction.b0}) ==
          doctest::Approx(0.75 * reaction.b0));

    Grid empty;
    CHECK_THROWS_AS(mean_coverage(empty, {}), GeometryError);
    CHECK_THROWS_AS(mean_coverage(g, {1.0}), SolverError);
}

TEST_CASE("association run conserves species and stays below the oracle") {
    const Grid g = rig_grid();
    const FluidProps props;
    const ReactionParams reaction;

    Field2D a(g.nx, g.ny, reaction.a_inlet);
    std::vector<double> ab(g.reactive_faces.size(), 0.0);
    double prev_cov = 0.0;
    double t = 0.0;
    for (int s = 0; s < 10; ++s) {
        const TransportStepResult step =
            transport_step(g, nullptr, a, ab, reaction, props, 0.5);
        t += 0.5;
        CHECK(step.audit.imbalance_rel <= 1e-3);
        CHECK(step.clamped == 0);
        CHECK(step.sweeps >= 1);

        const double cov = mean_coverage(g, step.ab);
        CHECK(cov >= prev_cov - 1e-12);
        // transport limitation can only slow binding down
        CHECK(cov <= wellmixed_coverage(reaction, t) * (1.0 + 1e-9));
        prev_cov = cov;

        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.is_fluid(i, j)) {
                    CHECK(step.a(i, j) >= -1e-9);
                    CHECK(step.a(i, j) <= reaction.a_inlet + 1e-9);
                }
        a = step.a;
        ab = step.ab;
    }
    CHECK(prev_cov > 0.0);
}

TEST_CASE("invalid inputs are rejected") {
    const Grid g = rig_grid();
    const FluidProps props;
    const ReactionParams reaction;
    const Field2D a0(g.nx, g.ny, reaction.a_inlet);
    const std::vector<double> ab(g.reactive_faces.size(), 0.0);

    CHECK_THROWS_AS(
        advance_concentration(g, nullptr, a0, ab, reaction, props, 0.0),
        SolverError);
    CHECK_THROWS_AS(
        advance_concentration(g, nullptr, a0, {}, reaction, props, 0.5),
        SolverError);
    const Field2D wrong(4, 4, 0.0);
    CHECK_THROWS_AS(
        advance_concentration(g, nullptr, wrong, ab, reaction, props, 0.5),
        SolverError);
    CHECK_THROWS_AS(advance_surface({0.0}, {0.0, 0.0}, reaction, 0.5),
                    SolverError);
}

TEST_CASE("a negative excursion trips the monotonicity guard") {
    const Grid g = sealed_1d_grid();
    const FluidProps props;
    ReactionParams reaction;
    reaction.a_inlet = 0.0;
    TransportOptions opts;
    opts.seal_ends = true;

    Field2D bad(g.nx, g.ny, 0.0);
    bad(10, 1) = -1e-3;
    CHECK_THROWS_WITH_AS(
        advance_concentration(g, nullptr, bad, {}, reaction, props, 0.5, opts),
        "concentration violates the maximum principle", SolverError);
}
