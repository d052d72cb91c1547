#include "etstir/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "etstir/errors.hpp"
#include "etstir/flow.hpp"
#include "etstir/linsolve.hpp"

namespace etstir {

namespace {

bool is_electrode(FaceKind f) {
    return f == FaceKind::electrode_a || f == FaceKind::electrode_b;
}

} // namespace

Field2D joule_heating(const EField& e, const Grid& grid,
                      const FluidProps& props) {
    Field2D q(grid.nx, grid.ny, 0.0);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.is_fluid(i, j))
                q(i, j) = props.sigma * e.e2(i, j);
    return q;
}

Field2D solve_temperature(const Grid& grid, const Field2D& q,
                          const FlowField* flow, const FluidProps& props,
                          double tol, const ThermalOptions& options,
                          ThermalBalance* balance) {
    const int nx = grid.nx, ny = grid.ny;
    const double dx = grid.dx, dy = grid.dy;
    const double k = props.k_thermal;
    const double rcp = props.rho * props.cp;
    const double t_ref = props.t_ref;

    // mass flux (times cp) through a face per unit depth, W/(m K)
    auto mx = [&](int i, int j) {
        return flow ? rcp * flow->u(i, j) * dy : 0.0;
    };
    auto my = [&](int i, int j) {
        return flow ? rcp * flow->v(i, j) * dx : 0.0;
    };

    StencilSystem sys(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t idx = sys.idx(i, j);
            if (!grid.is_fluid(i, j)) {
                sys.rhs[idx] = t_ref; // obstacle cells pinned, not solved
                continue;
            }
            sys.active[idx] = 1;
            double d = 0.0;
            double b = q(i, j) * dx * dy;

            // west face
            if (grid.is_fluid(i - 1, j)) {
                const double m = -mx(i, j); // outward through west face
                const double dif = k * dy / dx;
                d += std::max(m, 0.0) + dif;
                sys.west[idx] = std::min(m, 0.0) - dif;
            } else if (i == 0) {
                // inlet held at t_ref: half-cell conduction + advective inflow
                const double m = mx(0, j);
                const double dif = 2.0 * k * dy / dx;
                d += dif + std::max(-m, 0.0);
                b += dif * t_ref + std::max(m, 0.0) * t_ref;
            }
            // east face
            if (grid.is_fluid(i + 1, j)) {
                const double m = mx(i + 1, j);
                const double dif = k * dy / dx;
                d += std::max(m, 0.0) + dif;
                sys.east[idx] = -std::max(-m, 0.0) - dif;
            } else if (i == nx - 1) {
                // outlet zero-gradient: advected enthalpy leaves at T_cell
                d += mx(nx, j);
            }
            // south face
            if (grid.is_fluid(i, j - 1)) {
                const double m = -my(i, j);
                const double dif = k * dx / dy;
                d += std::max(m, 0.0) + dif;
                sys.south[idx] = std::min(m, 0.0) - dif;
            } else if (j == 0 &&
                       (is_electrode(grid.bottom_face[i]) || options.isothermal_walls)) {
                const double dif = 2.0 * k * dx / dy;
                d += dif;
                b += dif * t_ref;
            }
            // north face
            if (grid.is_fluid(i, j + 1)) {
                const double m = my(i, j + 1);
                const double dif = k * dx / dy;
                d += std::max(m, 0.0) + dif;
                sys.north[idx] = -std::max(-m, 0.0) - dif;
            } else if (j == ny - 1 &&
                       (is_electrode(grid.top_face[i]) || options.isothermal_walls)) {
                const double dif = 2.0 * k * dx / dy;
                d += dif;
                b += dif * t_ref;
            }
            // remaining closed faces (walls, obstacle) are adiabatic

            sys.diag[idx] = d;
            sys.rhs[idx] = b;
        }
    }

    std::vector<double> x(sys.diag.size(), t_ref);
    try {
        solve_bicgstab(sys, x, tol, 20000);
    } catch (const SolverError& err) {
        throw SolverError(std::string("temperature solve failed: ") + err.what(),
                          err.final_residual);
    }

    Field2D t(nx, ny, t_ref);
    t.v = std::move(x);

    if (balance) {
        // audit in theta = T - t_ref so advective in/out do not cancel
        // catastrophically against the 300 K baseline
        double source = 0.0, outflow = 0.0, scale = 0.0;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                if (!grid.is_fluid(i, j)) continue;
                source += q(i, j) * dx * dy;
                const double th = t(i, j) - t_ref;
                if (i == 0) {
                    const double m = mx(0, j);
                    outflow += 2.0 * k * dy / dx * th;  // conduction out
                    outflow += std::max(-m, 0.0) * th;  // backflow out
                }
                if (i == nx - 1) outflow += mx(nx, j) * th;
                if (j == 0 && (is_electrode(grid.bottom_face[i]) ||
                               options.isothermal_walls))
                    outflow += 2.0 * k * dx / dy * th;
                if (j == ny - 1 && (is_electrode(grid.top_face[i]) ||
                                    options.isothermal_walls))
                    outflow += 2.0 * k * dx / dy * th;
            }
        }
        scale = std::max({std::abs(source), std::abs(outflow), 1e-300});
        balance->source_w = source;
        balance->boundary_outflow_w = outflow;
        balance->relative_imbalance = std::abs(source - outflow) / scale;
    }
    return t;
}

} // namespace etstir
