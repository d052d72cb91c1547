#pragma once

#include "etstir/field.hpp"
#include "etstir/grid.hpp"

namespace etstir {

/// rms electrostatic potential, volts, plus the electrode boundary data
/// that produced it (needed for one-sided gradients at electrode faces).
struct PotentialField {
    Field2D phi;
    double v_rms = 0.0;

    double phi_electrode_a() const { return 0.5 * v_rms; }
    double phi_electrode_b() const { return -0.5 * v_rms; }
};

/// Face-centered rms electric field, V/m. ex on x-faces (nx+1, ny),
/// ey on y-faces (nx, ny+1), plus the cell-assembled |E|^2 used by the
/// Joule source. Faces on insulating boundaries and inside the obstacle
/// carry zero normal field by construction.
struct EField {
    Field2D ex;
    Field2D ey;
    Field2D e2; // cell-centered |E|^2, V^2/m^2
};

/// Solves Laplace's equation for the rms potential. Electrode A is held
/// at +v_rms/2, electrode B at -v_rms/2; every other boundary and all
/// obstacle faces are insulating (zero normal gradient). Converges the
/// 5-point system to relative residual tol (cap 50000 iterations);
/// throws SolverError otherwise.
PotentialField solve_potential(const Grid& grid, double v_rms,
                               double tol = 1e-8);

/// E = -grad(phi) on faces, exact discrete gradient (one-sided at
/// electrode faces); |E|^2 per cell by averaging the squared face
/// components on each axis.
EField electric_field(const PotentialField& pot, const Grid& grid);

} // namespace etstir
