#pragma once

#include "etstir/electrostatics.hpp"
#include "etstir/field.hpp"
#include "etstir/grid.hpp"
#include "etstir/props.hpp"

namespace etstir {

/// Time-averaged electrothermal body force, N/m^3, on the staggered
/// velocity faces: fx on x-faces (nx+1, ny), fy on y-faces (nx, ny+1).
struct BodyForceField {
    Field2D fx;
    Field2D fy;

    double max_abs() const { return std::max(fx.max_abs(), fy.max_abs()); }
};

/// Charge relaxation time tau = eps/sigma, seconds.
double charge_relaxation_time(const FluidProps& props);

/// Time-averaged electrothermal force from the rms field and the
/// temperature gradient:
///   F = -(eps/2) * [ (alpha_sigma - alpha_eps) (gradT . E) E / (1 + (omega tau)^2)
///                    + (|E|^2 / 2) alpha_eps gradT ]
/// The first (Coulomb) term dominates for omega*tau << 1, the second
/// (dielectric) term for omega*tau >> 1, with opposite signs.
/// Evaluated per velocity face; zero on faces touching boundaries or
/// the obstacle. Throws SolverError on mismatched shapes.
BodyForceField compute_et_force(const EField& e, const Field2D& temperature,
                                const Grid& grid, const FluidProps& props,
                                const DriveSpec& drive);

} // namespace etstir
