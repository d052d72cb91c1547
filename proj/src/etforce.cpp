#include "etstir/etforce.hpp"

#include "etstir/errors.hpp"

namespace etstir {

double charge_relaxation_time(const FluidProps& props) {
    return props.eps() / props.sigma;
}

BodyForceField compute_et_force(const EField& e, const Field2D& temperature,
                                const Grid& grid, const FluidProps& props,
                                const DriveSpec& drive) {
    const int nx = grid.nx, ny = grid.ny;
    if (temperature.nx != nx || temperature.ny != ny || e.ex.nx != nx + 1 ||
        e.ey.ny != ny + 1)
        throw SolverError("field shapes do not match grid");

    const double tau = charge_relaxation_time(props);
    const double wt = drive.omega() * tau;
    const double coulomb_factor = 1.0 / (1.0 + wt * wt);
    const double d_alpha = props.alpha_sigma - props.alpha_eps; // 0.024/K for water
    const double half_eps = 0.5 * props.eps();

    BodyForceField f;
    f.fx = Field2D(nx + 1, ny, 0.0);
    f.fy = Field2D(nx, ny + 1, 0.0);

    const Field2D& t = temperature;

    // x-faces: dT/dx native, Ey and dT/dy from the four surrounding y-faces
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            if (!grid.is_fluid(i - 1, j) || !grid.is_fluid(i, j)) continue;
            const double ex = e.ex(i, j);
            const double ey = 0.25 * (e.ey(i - 1, j) + e.ey(i - 1, j + 1) +
                                      e.ey(i, j) + e.ey(i, j + 1));
            const double dtdx = (t(i, j) - t(i - 1, j)) / grid.dx;
            double dtdy = 0.0;
            {
                // central dT/dy in the two adjacent columns, averaged;
                // one-sided next to walls/obstacle
                double s = 0.0;
                int n = 0;
                for (int ci : {i - 1, i}) {
                    const double tc = t(ci, j);
                    const bool up = grid.is_fluid(ci, j + 1);
                    const bool dn = grid.is_fluid(ci, j - 1);
                    if (up && dn)
                        s += (t(ci, j + 1) - t(ci, j - 1)) / (2.0 * grid.dy);
                    else if (up)
                        s += (t(ci, j + 1) - tc) / grid.dy;
                    else if (dn)
                        s += (tc - t(ci, j - 1)) / grid.dy;
                    ++n;
                }
                dtdy = s / n;
            }
            const double e2 = ex * ex + ey * ey;
            const double gradt_dot_e = dtdx * ex + dtdy * ey;
            f.fx(i, j) = -half_eps * (d_alpha * gradt_dot_e * ex * coulomb_factor +
                                      0.5 * e2 * props.alpha_eps * dtdx);
        }
    }

    // y-faces: dT/dy native, Ex and dT/dx from the surrounding x-faces
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!grid.is_fluid(i, j - 1) || !grid.is_fluid(i, j)) continue;
            const double ey = e.ey(i, j);
            const double ex = 0.25 * (e.ex(i, j - 1) + e.ex(i + 1, j - 1) +
                                      e.ex(i, j) + e.ex(i + 1, j));
            const double dtdy = (t(i, j) - t(i, j - 1)) / grid.dy;
            double dtdx = 0.0;
            {
                double s = 0.0;
                int n = 0;
                for (int cj : {j - 1, j}) {
                    const double tc = t(i, cj);
                    const bool rt = grid.is_fluid(i + 1, cj);
                    const bool lt = grid.is_fluid(i - 1, cj);
                    if (rt && lt)
                        s += (t(i + 1, cj) - t(i - 1, cj)) / (2.0 * grid.dx);
                    else if (rt)
                        s += (t(i + 1, cj) - tc) / grid.dx;
                    else if (lt)
                        s += (tc - t(i - 1, cj)) / grid.dx;
                    ++n;
                }
                dtdx = s / n;
            }
            const double e2 = ex * ex + ey * ey;
            const double gradt_dot_e = dtdx * ex + dtdy * ey;
            f.fy(i, j) = -half_eps * (d_alpha * gradt_dot_e * ey * coulomb_factor +
                                      0.5 * e2 * props.alpha_eps * dtdy);
        }
    }

    return f;
}

} // namespace etstir
