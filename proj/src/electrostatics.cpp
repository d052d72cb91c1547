#include "etstir/electrostatics.hpp"

#include "etstir/errors.hpp"
#include "etstir/linsolve.hpp"

namespace etstir {

namespace {

bool is_electrode(FaceKind f) {
    return f == FaceKind::electrode_a || f == FaceKind::electrode_b;
}

double electrode_phi(const PotentialField& pot, FaceKind f) {
    return f == FaceKind::electrode_a ? pot.phi_electrode_a()
                                      : pot.phi_electrode_b();
}

} // namespace

PotentialField solve_potential(const Grid& grid, double v_rms, double tol) {
    if (tol <= 0.0 || tol > 1e-4)
        throw SolverError("potential tolerance must be in (0, 1e-4]");

    const int nx = grid.nx, ny = grid.ny;
    const double ax = 1.0 / (grid.dx * grid.dx);
    const double ay = 1.0 / (grid.dy * grid.dy);

    StencilSystem sys(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = sys.idx(i, j);
            if (!grid.is_fluid(i, j)) continue; // phi pinned to 0 in the obstacle
            sys.active[k] = 1;
            double d = 0.0, b = 0.0;
            // fluid neighbor couples; anything else insulates except an
            // electrode face, which enters as a half-cell Dirichlet ghost
            if (grid.is_fluid(i - 1, j)) {
                sys.west[k] = -ax;
                d += ax;
            }
            if (grid.is_fluid(i + 1, j)) {
                sys.east[k] = -ax;
                d += ax;
            }
            if (grid.is_fluid(i, j - 1)) {
                sys.south[k] = -ay;
                d += ay;
            } else if (j == 0 && is_electrode(grid.bottom_face[i])) {
                const double phi_b = grid.bottom_face[i] == FaceKind::electrode_a
                                         ? 0.5 * v_rms
                                         : -0.5 * v_rms;
                d += 2.0 * ay;
                b += 2.0 * ay * phi_b;
            }
            if (grid.is_fluid(i, j + 1)) {
                sys.north[k] = -ay;
                d += ay;
            } else if (j == ny - 1 && is_electrode(grid.top_face[i])) {
                const double phi_b = grid.top_face[i] == FaceKind::electrode_a
                                         ? 0.5 * v_rms
                                         : -0.5 * v_rms;
                d += 2.0 * ay;
                b += 2.0 * ay * phi_b;
            }
            sys.diag[k] = d;
            sys.rhs[k] = b;
        }
    }

    std::vector<double> x(sys.diag.size(), 0.0);
    solve_cg(sys, x, tol, 50000);

    PotentialField pot;
    pot.v_rms = v_rms;
    pot.phi = Field2D(nx, ny, 0.0);
    pot.phi.v = std::move(x);
    return pot;
}

EField electric_field(const PotentialField& pot, const Grid& grid) {
    const Field2D& phi = pot.phi;
    if (phi.nx != grid.nx || phi.ny != grid.ny)
        throw SolverError("potential field does not match grid shape");

    const int nx = grid.nx, ny = grid.ny;
    EField e;
    e.ex = Field2D(nx + 1, ny, 0.0);
    e.ey = Field2D(nx, ny + 1, 0.0);
    e.e2 = Field2D(nx, ny, 0.0);

    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            if (grid.is_fluid(i - 1, j) && grid.is_fluid(i, j))
                e.ex(i, j) = -(phi(i, j) - phi(i - 1, j)) / grid.dx;

    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (grid.is_fluid(i, j - 1) && grid.is_fluid(i, j))
                e.ey(i, j) = -(phi(i, j) - phi(i, j - 1)) / grid.dy;

    // one-sided gradient over the half cell next to an electrode
    for (int i = 0; i < nx; ++i) {
        if (is_electrode(grid.bottom_face[i]) && grid.is_fluid(i, 0)) {
            const double phi_b = electrode_phi(pot, grid.bottom_face[i]);
            e.ey(i, 0) = -(phi(i, 0) - phi_b) / (0.5 * grid.dy);
        }
        if (is_electrode(grid.top_face[i]) && grid.is_fluid(i, ny - 1)) {
            const double phi_b = electrode_phi(pot, grid.top_face[i]);
            e.ey(i, ny) = -(phi_b - phi(i, ny - 1)) / (0.5 * grid.dy);
        }
    }

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!grid.is_fluid(i, j)) continue;
            const double ex2 = 0.5 * (e.ex(i, j) * e.ex(i, j) +
                                      e.ex(i + 1, j) * e.ex(i + 1, j));
            const double ey2 = 0.5 * (e.ey(i, j) * e.ey(i, j) +
                                      e.ey(i, j + 1) * e.ey(i, j + 1));
            e.e2(i, j) = ex2 + ey2;
        }
    return e;
}

} // namespace etstir
