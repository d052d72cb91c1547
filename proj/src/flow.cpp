#include "etstir/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "etstir/errors.hpp"
#include "etstir/linsolve.hpp"

namespace etstir {

double inlet_profile(double y, double channel_height, double mean) {
    const double s = y / channel_height;
    return 6.0 * mean * s * (1.0 - s);
}

double max_divergence(const Grid& grid, const FlowField& flow) {
    double m = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (!grid.is_fluid(i, j)) continue;
            const double div =
                (flow.u(i + 1, j) - flow.u(i, j)) / grid.dx +
                (flow.v(i, j + 1) - flow.v(i, j)) / grid.dy;
            m = std::max(m, std::abs(div));
        }
    return m;
}

namespace {

constexpr double kAlphaU = 0.7; // momentum under-relaxation
constexpr double kAlphaP = 0.3; // pressure under-relaxation
constexpr int kMaxOuter = 6000;

struct Masks {
    // u faces: (nx+1) x ny. 0 = fixed (inlet/no-slip), 1 = unknown, 2 = outlet
    std::vector<std::uint8_t> u;
    // v faces: nx x (ny+1). 0 = fixed, 1 = unknown
    std::vector<std::uint8_t> v;
};

Masks build_masks(const Grid& g) {
    Masks m;
    m.u.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0);
    m.v.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            if (g.is_fluid(i - 1, j) && g.is_fluid(i, j))
                m.u[static_cast<std::size_t>(j) * (g.nx + 1) + i] = 1;
    for (int j = 0; j < g.ny; ++j)
        if (g.is_fluid(g.nx - 1, j))
            m.u[static_cast<std::size_t>(j) * (g.nx + 1) + g.nx] = 2;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.is_fluid(i, j - 1) && g.is_fluid(i, j))
                m.v[static_cast<std::size_t>(j) * g.nx + i] = 1;
    return m;
}

} // namespace

FlowField solve_flow(const Grid& grid, const BodyForceField& force,
                     double inlet_mean, const FluidProps& props, double tol,
                     FlowSolveInfo* info, const FlowField* initial_guess) {
    const int nx = grid.nx, ny = grid.ny;
    if (force.fx.nx != nx + 1 || force.fy.ny != ny + 1)
        throw SolverError("body force shape does not match grid");
    if (inlet_mean < 0.0) throw SolverError("inlet mean must be non-negative");

    const double dx = grid.dx, dy = grid.dy;
    const double rho = props.rho, eta = props.eta;
    const Masks mask = build_masks(grid);
    auto um = [&](int i, int j) {
        return mask.u[static_cast<std::size_t>(j) * (nx + 1) + i];
    };
    auto vm = [&](int i, int j) {
        return mask.v[static_cast<std::size_t>(j) * nx + i];
    };

    FlowField f;
    if (initial_guess && initial_guess->u.nx == nx + 1 &&
        initial_guess->v.ny == ny + 1) {
        f = *initial_guess;
    } else {
        f.u = Field2D(nx + 1, ny, 0.0);
        f.v = Field2D(nx, ny + 1, 0.0);
        f.p = Field2D(nx, ny, 0.0);
        for (int j = 0; j < ny; ++j) {
            const double uin =
                inlet_profile(grid.yc(j), grid.geom.channel_height, inlet_mean);
            for (int i = 0; i <= nx; ++i)
                if (um(i, j) != 0 || i == 0) f.u(i, j) = uin;
        }
    }
    // inlet profile is a hard boundary condition
    for (int j = 0; j < ny; ++j)
        f.u(0, j) =
            inlet_profile(grid.yc(j), grid.geom.channel_height, inlet_mean);

    const double diff_x_u = eta * dy / dx, diff_y_u = eta * dx / dy;
    StencilSystem su(nx + 1, ny), sv(nx, ny + 1), sp(nx, ny);
    std::vector<double> ap_u(su.diag.size(), 0.0), ap_v(sv.diag.size(), 0.0);
    std::vector<double> xu, xv, xp;
    std::ostringstream history;

    auto assemble_u = [&]() {
        std::fill(su.west.begin(), su.west.end(), 0.0);
        std::fill(su.east.begin(), su.east.end(), 0.0);
        std::fill(su.south.begin(), su.south.end(), 0.0);
        std::fill(su.north.begin(), su.north.end(), 0.0);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i <= nx; ++i) {
                const std::size_t k = su.idx(i, j);
                if (um(i, j) != 1) {
                    su.active[k] = 0;
                    su.diag[k] = 1.0;
                    su.rhs[k] = f.u(i, j); // pinned: inlet / no-slip / outlet copy
                    continue;
                }
                su.active[k] = 1;
                double d = 0.0;
                double b = (f.p(i - 1, j) - f.p(i, j)) * dy +
                           force.fx(i, j) * dx * dy;
                // east
                {
                    const double me = rho * 0.5 * (f.u(i, j) + f.u(i + 1, j)) * dy;
                    if (um(i + 1, j) == 2) {
                        d += me; // zero-gradient outlet, advected at cell value
                    } else if (um(i + 1, j) == 1) {
                        d += std::max(me, 0.0) + diff_x_u;
                        su.east[k] = std::min(me, 0.0) - diff_x_u;
                    } else {
                        d += std::max(me, 0.0) + diff_x_u; // zero neighbor
                    }
                }
                // west
                {
                    const double mw = rho * 0.5 * (f.u(i - 1, j) + f.u(i, j)) * dy;
                    if (um(i - 1, j) == 1) {
                        d += std::max(-mw, 0.0) + diff_x_u;
                        su.west[k] = -std::max(mw, 0.0) - diff_x_u;
                    } else {
                        // inlet Dirichlet or no-slip zero, full spacing
                        d += std::max(-mw, 0.0) + diff_x_u;
                        b += (std::max(mw, 0.0) + diff_x_u) * f.u(i - 1, j);
                    }
                }
                // north
                {
                    const double mn =
                        rho * 0.5 * (f.v(i - 1, j + 1) + f.v(i, j + 1)) * dx;
                    if (j == ny - 1) {
                        d += 2.0 * diff_y_u; // half-cell wall shear
                    } else if (um(i, j + 1) == 1) {
                        d += std::max(mn, 0.0) + diff_y_u;
                        su.north[k] = std::min(mn, 0.0) - diff_y_u;
                    } else {
                        d += std::max(mn, 0.0) + diff_y_u; // obstacle face, u=0
                    }
                }
                // south
                {
                    const double ms = rho * 0.5 * (f.v(i - 1, j) + f.v(i, j)) * dx;
                    if (j == 0) {
                        d += 2.0 * diff_y_u;
                    } else if (um(i, j - 1) == 1) {
                        d += std::max(-ms, 0.0) + diff_y_u;
                        su.south[k] = -std::max(ms, 0.0) - diff_y_u;
                    } else {
                        d += std::max(-ms, 0.0) + diff_y_u;
                    }
                }
                // implicit under-relaxation
                const double dr = d / kAlphaU;
                su.diag[k] = dr;
                su.rhs[k] = b + (1.0 - kAlphaU) * dr * f.u(i, j);
                ap_u[k] = dr;
            }
        }
    };

    const double diff_x_v = eta * dy / dx, diff_y_v = eta * dx / dy;
    auto assemble_v = [&]() {
        std::fill(sv.west.begin(), sv.west.end(), 0.0);
        std::fill(sv.east.begin(), sv.east.end(), 0.0);
        std::fill(sv.south.begin(), sv.south.end(), 0.0);
        std::fill(sv.north.begin(), sv.north.end(), 0.0);
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = sv.idx(i, j);
                if (vm(i, j) != 1) {
                    sv.active[k] = 0;
                    sv.diag[k] = 1.0;
                    sv.rhs[k] = f.v(i, j);
                    continue;
                }
                sv.active[k] = 1;
                double d = 0.0;
                double b = (f.p(i, j - 1) - f.p(i, j)) * dx +
                           force.fy(i, j) * dx * dy;
                // east
                {
                    const double me =
                        rho * 0.5 * (f.u(i + 1, j - 1) + f.u(i + 1, j)) * dy;
                    if (i == nx - 1) {
                        d += me; // outlet, zero-gradient
                    } else if (vm(i + 1, j) == 1) {
                        d += std::max(me, 0.0) + diff_x_v;
                        sv.east[k] = std::min(me, 0.0) - diff_x_v;
                    } else {
                        d += std::max(me, 0.0) + diff_x_v;
                    }
                }
                // west
                {
                    const double mw = rho * 0.5 * (f.u(i, j - 1) + f.u(i, j)) * dy;
                    if (i == 0) {
                        d += std::max(-mw, 0.0) + 2.0 * diff_x_v; // inlet, v=0
                    } else if (vm(i - 1, j) == 1) {
                        d += std::max(-mw, 0.0) + diff_x_v;
                        sv.west[k] = -std::max(mw, 0.0) - diff_x_v;
                    } else {
                        d += std::max(-mw, 0.0) + diff_x_v;
                    }
                }
                // north
                {
                    const double mn = rho * 0.5 * (f.v(i, j) + f.v(i, j + 1)) * dx;
                    if (vm(i, j + 1) == 1) {
                        d += std::max(mn, 0.0) + diff_y_v;
                        sv.north[k] = std::min(mn, 0.0) - diff_y_v;
                    } else {
                        d += std::max(mn, 0.0) + diff_y_v; // wall/obstacle, v=0
                    }
                }
                // south
                {
                    const double ms = rho * 0.5 * (f.v(i, j - 1) + f.v(i, j)) * dx;
                    if (vm(i, j - 1) == 1) {
                        d += std::max(-ms, 0.0) + diff_y_v;
                        sv.south[k] = -std::max(ms, 0.0) - diff_y_v;
                    } else {
                        d += std::max(-ms, 0.0) + diff_y_v;
                    }
                }
                const double dr = d / kAlphaU;
                sv.diag[k] = dr;
                sv.rhs[k] = b + (1.0 - kAlphaU) * dr * f.v(i, j);
                ap_v[k] = dr;
            }
        }
    };

    auto outlet_mass_fix = [&]() {
        double qin = 0.0, qout = 0.0;
        int n_out = 0;
        for (int j = 0; j < ny; ++j) {
            qin += f.u(0, j) * dy;
            if (um(nx, j) == 2) {
                f.u(nx, j) = f.u(nx - 1, j);
                qout += f.u(nx, j) * dy;
                ++n_out;
            }
        }
        if (n_out > 0) {
            const double corr = (qin - qout) / (n_out * dy);
            for (int j = 0; j < ny; ++j)
                if (um(nx, j) == 2) f.u(nx, j) += corr;
        }
    };

    auto solve_pressure_correction = [&](double cg_tol, int cg_cap) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = sp.idx(i, j);
                sp.west[k] = sp.east[k] = sp.south[k] = sp.north[k] = 0.0;
                if (!grid.is_fluid(i, j)) {
                    sp.active[k] = 0;
                    sp.diag[k] = 1.0;
                    sp.rhs[k] = 0.0;
                    continue;
                }
                sp.active[k] = 1;
                double d = 0.0;
                if (um(i, j) == 1) {
                    const double c = rho * dy * dy / ap_u[su.idx(i, j)];
                    d += c;
                    sp.west[k] = -c;
                }
                if (um(i + 1, j) == 1) {
                    const double c = rho * dy * dy / ap_u[su.idx(i + 1, j)];
                    d += c;
                    sp.east[k] = -c;
                } else if (um(i + 1, j) == 2) {
                    // outlet reference pressure: ghost p' = 0 one face away,
                    // coupled through the neighbouring interior u coefficient
                    const double apn = um(i, j) == 1 ? ap_u[su.idx(i, j)]
                                                     : ap_u[su.idx(i + 1, j)];
                    if (apn > 0.0) d += rho * dy * dy / apn;
                }
                if (vm(i, j) == 1) {
                    const double c = rho * dx * dx / ap_v[sv.idx(i, j)];
                    d += c;
                    sp.south[k] = -c;
                }
                if (vm(i, j + 1) == 1) {
                    const double c = rho * dx * dx / ap_v[sv.idx(i, j + 1)];
                    d += c;
                    sp.north[k] = -c;
                }
                const double imb = rho * ((f.u(i + 1, j) - f.u(i, j)) * dy +
                                          (f.v(i, j + 1) - f.v(i, j)) * dx);
                sp.diag[k] = d;
                sp.rhs[k] = -imb;
            }
        }
        xp.assign(sp.diag.size(), 0.0);
        solve_cg(sp, xp, cg_tol, cg_cap);
    };

    auto apply_correction = [&]() {
        for (int j = 0; j < ny; ++j)
            for (int i = 1; i <= nx; ++i) {
                if (um(i, j) == 1) {
                    const double pw = xp[sp.idx(i - 1, j)];
                    const double pe = xp[sp.idx(i, j)];
                    f.u(i, j) += dy / ap_u[su.idx(i, j)] * (pw - pe);
                } else if (um(i, j) == 2) {
                    const double apn =
                        um(i - 1, j) == 1 ? ap_u[su.idx(i - 1, j)] : ap_u[su.idx(i, j)];
                    if (apn > 0.0) f.u(i, j) += dy / apn * xp[sp.idx(i - 1, j)];
                }
            }
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (vm(i, j) == 1) {
                    const double ps = xp[sp.idx(i, j - 1)];
                    const double pn = xp[sp.idx(i, j)];
                    f.v(i, j) += dx / ap_v[sv.idx(i, j)] * (ps - pn);
                }
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (grid.is_fluid(i, j)) f.p(i, j) += kAlphaP * xp[sp.idx(i, j)];
    };

    // residual of the un-relaxed momentum equations at the current state;
    // returned un-normalized so both components share one scale (a
    // per-component scale stalls on the near-quiescent component)
    struct ResidualParts {
        double r = 0.0;
        double scale = 0.0;
    };
    auto momentum_residual = [&](const StencilSystem& s,
                                 const std::vector<double>& ap,
                                 const Field2D& vel) {
        ResidualParts out;
        for (std::size_t k = 0; k < s.diag.size(); ++k) {
            if (!s.active[k]) continue;
            const double a = ap[k] * kAlphaU; // un-relaxed central coefficient
            double lhs = a * vel.v[k];
            if (s.west[k] != 0.0) lhs += s.west[k] * vel.v[k - 1];
            if (s.east[k] != 0.0) lhs += s.east[k] * vel.v[k + 1];
            if (s.south[k] != 0.0) lhs += s.south[k] * vel.v[k - s.nx];
            if (s.north[k] != 0.0) lhs += s.north[k] * vel.v[k + s.nx];
            const double b = s.rhs[k] - (1.0 - kAlphaU) * ap[k] * vel.v[k];
            out.r += std::abs(lhs - b);
            out.scale += std::abs(a * vel.v[k]) + std::abs(b);
        }
        return out;
    };

    double mom_res = 0.0;
    int outer = 0;
    bool converged = false;
    // tight tolerance, small cap: the sweep must always make progress (a
    // loose relative tolerance can accept the stalled iterate unchanged);
    // hitting the cap is harmless, the outer loop keeps correcting
    auto relax_momentum = [](const StencilSystem& s, std::vector<double>& x) {
        try {
            solve_bicgstab(s, x, 1e-10, 8);
        } catch (const SolverError&) {
        }
    };

    for (outer = 1; outer <= kMaxOuter; ++outer) {
        assemble_u();
        xu = f.u.v;
        relax_momentum(su, xu);
        f.u.v = xu;

        assemble_v();
        xv = f.v.v;
        relax_momentum(sv, xv);
        f.v.v = xv;

        outlet_mass_fix();
        solve_pressure_correction(1e-2, 2000);
        apply_correction();

        // evaluate convergence on freshly assembled (lagged-free) residuals
        assemble_u();
        const ResidualParts pu = momentum_residual(su, ap_u, f.u);
        assemble_v();
        const ResidualParts pv = momentum_residual(sv, ap_v, f.v);
        const double mom_scale = pu.scale + pv.scale;
        mom_res = mom_scale > 0.0 ? (pu.r + pv.r) / mom_scale : 0.0;

        const double vel_scale =
            std::max({f.u.max_abs(), f.v.max_abs(), inlet_mean});
        const double div_scale =
            vel_scale > 0.0 ? vel_scale / std::min(dx, dy) : 1.0;
        const double div_rel = max_divergence(grid, f) / div_scale;

        if (outer % 50 == 0 || outer == 1)
            history << "iter " << outer << " mom " << mom_res << " div "
                    << div_rel << "\n";

        if (mom_res <= tol && div_rel <= 1e3 * tol) {
            converged = true;
            break;
        }
        if (vel_scale == 0.0) {
            converged = true; // quiescent exactly
            break;
        }
    }
    if (!converged)
        throw SolverError("flow solve did not converge within " +
                              std::to_string(kMaxOuter) +
                              " iterations; residual history:\n" + history.str(),
                          mom_res);

    // final continuity pass: tight pressure solve drives the per-cell
    // divergence to solver precision
    assemble_u();
    assemble_v();
    outlet_mass_fix();
    solve_pressure_correction(1e-12, 40000);
    apply_correction();

    if (info) {
        assemble_u();
        const ResidualParts pu = momentum_residual(su, ap_u, f.u);
        assemble_v();
        const ResidualParts pv = momentum_residual(sv, ap_v, f.v);
        const double mom_scale = pu.scale + pv.scale;
        info->outer_iterations = outer;
        info->momentum_residual =
            mom_scale > 0.0 ? (pu.r + pv.r) / mom_scale : 0.0;
        info->max_divergence = max_divergence(grid, f);
        double qin = 0.0, qout = 0.0;
        for (int j = 0; j < ny; ++j) {
            qin += f.u(0, j) * dy;
            qout += f.u(nx, j) * dy;
        }
        info->inlet_flux = qin;
        info->outlet_flux = qout;
    }
    return f;
}

} // namespace etstir
