#pragma once

#include "etstir/electrostatics.hpp"
#include "etstir/field.hpp"
#include "etstir/grid.hpp"
#include "etstir/props.hpp"

namespace etstir {

struct FlowField;

/// Joule heating source q = sigma * |E|^2 per cell, W/m^3.
Field2D joule_heating(const EField& e, const Grid& grid,
                      const FluidProps& props);

struct ThermalOptions {
    /// false: non-electrode walls adiabatic (default); true: held at t_ref.
    bool isothermal_walls = false;
};

struct ThermalBalance {
    double source_w = 0.0;          // integrated Joule power per unit depth, W/m
    double boundary_outflow_w = 0.0; // net conductive+advective outflow, W/m
    double relative_imbalance = 0.0;
};

/// Steady energy balance rho*cp*(V . grad T) = k lap T + q, upwind
/// advection, central diffusion. Electrodes and inlet are held at
/// props.t_ref, the outlet is zero-gradient, remaining walls and the
/// obstacle are adiabatic (or isothermal via options). Pass flow =
/// nullptr for pure conduction. Throws SolverError on non-convergence.
Field2D solve_temperature(const Grid& grid, const Field2D& q,
                          const FlowField* flow, const FluidProps& props,
                          double tol = 1e-8,
                          const ThermalOptions& options = {},
                          ThermalBalance* balance = nullptr);

} // namespace etstir
