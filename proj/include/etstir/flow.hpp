#pragma once

#include "etstir/etforce.hpp"
#include "etstir/field.hpp"
#include "etstir/grid.hpp"
#include "etstir/props.hpp"

namespace etstir {

/// Staggered (MAC) velocity/pressure state: u on x-faces (nx+1, ny),
/// v on y-faces (nx, ny+1), p cell-centered (nx, ny). No-slip faces
/// carry exact zeros.
struct FlowField {
    Field2D u; // m/s
    Field2D v; // m/s
    Field2D p; // Pa

    double u_max_abs() const { return std::max(u.max_abs(), v.max_abs()); }
    /// largest downward speed, max over y-faces of (-v)
    double v_down_max() const { return std::max(0.0, -v.min()); }
};

struct FlowSolveInfo {
    int outer_iterations = 0;
    double momentum_residual = 0.0;
    double max_divergence = 0.0;   // 1/s, after the final continuity pass
    double inlet_flux = 0.0;       // m^2/s per unit depth
    double outlet_flux = 0.0;
};

/// Steady incompressible flow under the electrothermal body force.
/// SIMPLE pressure-correction iteration on the staggered grid,
/// first-order upwind convection, central diffusion, under-relaxation
/// 0.7 (momentum) / 0.3 (pressure). Inlet: fully developed parabolic
/// profile with the given mean; outlet: zero-gradient velocity with
/// fixed reference pressure; no-slip on walls, electrodes and obstacle.
/// Throws SolverError with the residual history on non-convergence.
FlowField solve_flow(const Grid& grid, const BodyForceField& force,
                     double inlet_mean, const FluidProps& props,
                     double tol = 1e-5, FlowSolveInfo* info = nullptr,
                     const FlowField* initial_guess = nullptr);

/// Poiseuille inlet profile evaluated at a y-face-center height.
double inlet_profile(double y, double channel_height, double mean);

/// Largest |divergence| over fluid cells, 1/s.
double max_divergence(const Grid& grid, const FlowField& flow);

} // namespace etstir
