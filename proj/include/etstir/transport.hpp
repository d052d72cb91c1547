#pragma once

#include <vector>

#include "etstir/field.hpp"
#include "etstir/flow.hpp"
#include "etstir/grid.hpp"
#include "etstir/props.hpp"

namespace etstir {

struct TransportOptions {
    // treat the inlet/outlet columns as impermeable walls; used by the
    // closed-box diffusion checks, meaningless with a nonzero flow
    bool seal_ends = false;
};

struct SurfaceUpdate {
    std::vector<double> ab; // bound complex per reactive face, mol/m^2
    int clamped = 0;        // faces pushed back into [0, b0]
};

struct TransportAudit {
    double bulk_change = 0.0;    // mol per unit depth
    double surface_change = 0.0; // mol per unit depth
    double boundary_net = 0.0;   // net inflow over the step, mol per unit depth
    double imbalance_rel = 0.0;  // |Δbulk + Δsurf - net| / inventory scale
};

struct TransportStepResult {
    Field2D a;              // bulk concentration at the new time level
    std::vector<double> ab; // surface coverage at the new time level
    int sweeps = 0;         // bulk/surface fixed-point sweeps taken
    int clamped = 0;
    TransportAudit audit;
};

// One backward-Euler advance of the bulk concentration with the surface
// coverage frozen at `ab`. Reactive faces impose
//   -D da/dn = k_a * a_cell * (b0 - ab) - k_d * ab
// on the adjacent cell. Pass flow = nullptr for pure diffusion. When
// face_flux is given it receives that right-hand side per reactive face,
// evaluated at the new time level, mol/(m^2 s). `guess` seeds the linear
// solve (default: a_old); the result is the same up to solver tolerance.
Field2D advance_concentration(const Grid& grid, const FlowField* flow,
                              const Field2D& a_old,
                              const std::vector<double>& ab,
                              const ReactionParams& reaction,
                              const FluidProps& props, double dt,
                              const TransportOptions& opts = {},
                              std::vector<double>* face_flux = nullptr,
                              const Field2D* guess = nullptr);

// Closed-form backward-Euler update of the Langmuir surface ODE
//   d(ab)/dt = k_a * a * (b0 - ab) - k_d * ab
// with the bulk concentration a frozen at the new time level.
SurfaceUpdate advance_surface(const std::vector<double>& ab_old,
                              const std::vector<double>& a_face,
                              const ReactionParams& reaction, double dt);

// Coupled bulk + surface step: sweeps the two updates to a fixed point so the
// species budget closes, and audits it. `guess` seeds the first bulk solve;
// later sweeps start from the freshest solution.
TransportStepResult transport_step(const Grid& grid, const FlowField* flow,
                                   const Field2D& a_old,
                                   const std::vector<double>& ab_old,
                                   const ReactionParams& reaction,
                                   const FluidProps& props, double dt,
                                   const TransportOptions& opts = {},
                                   const Field2D* guess = nullptr);

// Length-weighted mean coverage over the reactive faces.
double mean_coverage(const Grid& grid, const std::vector<double>& ab);

// Coverage of a surface exposed to a uniform bulk at the inlet concentration:
//   ab(t) = ab_eq * (1 - exp(-(k_a*a + k_d) t))
double wellmixed_coverage(const ReactionParams& reaction, double t);

} // namespace etstir
