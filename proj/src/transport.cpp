#include "etstir/transport.hpp"

#include <algorithm>
#include <cmath>

#include "etstir/errors.hpp"
#include "etstir/linsolve.hpp"

namespace etstir {

namespace {

// total bulk species per unit depth
double bulk_inventory(const Grid& grid, const Field2D& a) {
    double s = 0.0;
    const double vol = grid.dx * grid.dy;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.is_fluid(i, j)) s += a(i, j) * vol;
    return s;
}

double surface_inventory(const Grid& grid, const std::vector<double>& ab) {
    double s = 0.0;
    for (std::size_t f = 0; f < grid.reactive_faces.size(); ++f)
        s += ab[f] * grid.reactive_faces[f].length;
    return s;
}

} // namespace

Field2D advance_concentration(const Grid& grid, const FlowField* flow,
                              const Field2D& a_old,
                              const std::vector<double>& ab,
                              const ReactionParams& reaction,
                              const FluidProps& props, double dt,
                              const TransportOptions& opts,
                              std::vector<double>* face_flux,
                              const Field2D* guess) {
    const int nx = grid.nx, ny = grid.ny;
    if (a_old.nx != nx || a_old.ny != ny)
        throw SolverError("concentration field shape does not match grid");
    if (guess && (guess->nx != nx || guess->ny != ny))
        throw SolverError("initial-guess field shape does not match grid");
    if (ab.size() != grid.reactive_faces.size())
        throw SolverError("coverage vector does not match reactive face count");
    if (!(dt > 0.0)) throw SolverError("time step must be positive");

    const double dx = grid.dx, dy = grid.dy;
    const double dif = props.diffusivity;
    const double dif_x = dif * dy / dx, dif_y = dif * dx / dy;
    const double vol_dt = dx * dy / dt;

    auto mx = [&](int i, int j) { return flow ? flow->u(i, j) * dy : 0.0; };
    auto my = [&](int i, int j) { return flow ? flow->v(i, j) * dx : 0.0; };

    StencilSystem sys(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = sys.idx(i, j);
            sys.west[k] = sys.east[k] = sys.south[k] = sys.north[k] = 0.0;
            if (!grid.is_fluid(i, j)) {
                sys.active[k] = 0;
                sys.diag[k] = 1.0;
                sys.rhs[k] = 0.0;
                continue;
            }
            sys.active[k] = 1;
            double d = vol_dt;
            double b = vol_dt * a_old(i, j);
            // east
            if (i + 1 < nx && grid.is_fluid(i + 1, j)) {
                const double m = mx(i + 1, j);
                d += std::max(m, 0.0) + dif_x;
                sys.east[k] = std::min(m, 0.0) - dif_x;
            } else if (i + 1 == nx && !opts.seal_ends) {
                d += mx(nx, j); // outlet: advected out at the cell value
            }
            // west
            if (i > 0 && grid.is_fluid(i - 1, j)) {
                const double m = mx(i, j);
                d += std::max(-m, 0.0) + dif_x;
                sys.west[k] = -std::max(m, 0.0) - dif_x;
            } else if (i == 0 && !opts.seal_ends) {
                // inlet held at the feed concentration
                const double m = mx(0, j);
                d += std::max(-m, 0.0) + 2.0 * dif_x;
                b += (std::max(m, 0.0) + 2.0 * dif_x) * reaction.a_inlet;
            }
            // north
            if (j + 1 < ny && grid.is_fluid(i, j + 1)) {
                const double m = my(i, j + 1);
                d += std::max(m, 0.0) + dif_y;
                sys.north[k] = std::min(m, 0.0) - dif_y;
            }
            // south
            if (j > 0 && grid.is_fluid(i, j - 1)) {
                const double m = my(i, j);
                d += std::max(-m, 0.0) + dif_y;
                sys.south[k] = -std::max(m, 0.0) - dif_y;
            }
            // solid and wall faces are impermeable; reactive faces follow
            sys.diag[k] = d;
            sys.rhs[k] = b;
        }
    }
    for (std::size_t f = 0; f < grid.reactive_faces.size(); ++f) {
        const ReactiveFace& rf = grid.reactive_faces[f];
        const std::size_t k = sys.idx(rf.i, rf.j);
        const double free_sites = std::max(reaction.b0 - ab[f], 0.0);
        sys.diag[k] += reaction.k_a * free_sites * rf.length;
        sys.rhs[k] += reaction.k_d * ab[f] * rf.length;
    }

    std::vector<double> x = guess ? guess->v : a_old.v;
    try {
        solve_bicgstab(sys, x, 1e-9, 30000);
    } catch (const SolverError& e) {
        throw SolverError(std::string("concentration solve failed: ") + e.what(),
                          e.final_residual);
    }

    Field2D a(nx, ny, 0.0);
    a.v = std::move(x);

    // discrete maximum principle: no interior source can push the bulk
    // outside the range spanned by the old field and the feed
    double lo = 0.0, hi = opts.seal_ends ? 0.0 : reaction.a_inlet;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (grid.is_fluid(i, j)) hi = std::max(hi, a_old(i, j));
    // desorption can locally exceed the feed only if coverage overshot its
    // equilibrium; allow rounding-level slack
    const double slack = 1e-6 * std::max(hi, reaction.a_inlet) + 1e-300;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (grid.is_fluid(i, j)) {
                if (!std::isfinite(a(i, j)) || a(i, j) < lo - slack ||
                    a(i, j) > hi + slack)
                    throw SolverError(
                        "concentration violates the maximum principle");
            }
    if (face_flux) {
        face_flux->resize(grid.reactive_faces.size());
        for (std::size_t f = 0; f < grid.reactive_faces.size(); ++f) {
            const ReactiveFace& rf = grid.reactive_faces[f];
            const double free_sites = std::max(reaction.b0 - ab[f], 0.0);
            (*face_flux)[f] = reaction.k_a * a(rf.i, rf.j) * free_sites -
                              reaction.k_d * ab[f];
        }
    }
    return a;
}

SurfaceUpdate advance_surface(const std::vector<double>& ab_old,
                              const std::vector<double>& a_face,
                              const ReactionParams& reaction, double dt) {
    if (a_face.size() != ab_old.size())
        throw SolverError("surface update: mismatched face counts");
    SurfaceUpdate out;
    out.ab.resize(ab_old.size());
    for (std::size_t f = 0; f < ab_old.size(); ++f) {
        const double a = a_face[f];
        const double num = ab_old[f] + dt * reaction.k_a * a * reaction.b0;
        const double den = 1.0 + dt * (reaction.k_a * a + reaction.k_d);
        double ab = num / den;
        if (ab < 0.0 || ab > reaction.b0) {
            ab = std::clamp(ab, 0.0, reaction.b0);
            ++out.clamped;
        }
        out.ab[f] = ab;
    }
    return out;
}

TransportStepResult transport_step(const Grid& grid, const FlowField* flow,
                                   const Field2D& a_old,
                                   const std::vector<double>& ab_old,
                                   const ReactionParams& reaction,
                                   const FluidProps& props, double dt,
                                   const TransportOptions& opts,
                                   const Field2D* guess) {
    constexpr int kMaxSweeps = 12;

    TransportStepResult out;
    std::vector<double> ab_frozen = ab_old;
    std::vector<double> a_face(ab_old.size(), 0.0);
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        // consecutive sweeps move only the surface terms, so the previous
        // sweep's bulk field is an excellent seed for the next solve
        out.a = advance_concentration(grid, flow, a_old, ab_frozen, reaction,
                                      props, dt, opts, nullptr,
                                      sweep == 1 ? guess : &out.a);
        for (std::size_t f = 0; f < grid.reactive_faces.size(); ++f)
            a_face[f] = out.a(grid.reactive_faces[f].i, grid.reactive_faces[f].j);
        SurfaceUpdate upd = advance_surface(ab_old, a_face, reaction, dt);
        out.sweeps = sweep;
        out.clamped = upd.clamped;
        double delta = 0.0;
        for (std::size_t f = 0; f < upd.ab.size(); ++f)
            delta = std::max(delta, std::abs(upd.ab[f] - ab_frozen[f]));
        ab_frozen = std::move(upd.ab);
        if (delta <= 1e-9 * reaction.b0 || grid.reactive_faces.empty()) break;
    }
    out.ab = ab_frozen;

    // species budget over the step, boundary fluxes at the new time level
    double net_in = 0.0;
    if (!opts.seal_ends) {
        const double dif_x = props.diffusivity * grid.dy / grid.dx;
        for (int j = 0; j < grid.ny; ++j) {
            const double m_in = flow ? flow->u(0, j) * grid.dy : 0.0;
            net_in += std::max(m_in, 0.0) * reaction.a_inlet -
                      std::max(-m_in, 0.0) * out.a(0, j);
            net_in += 2.0 * dif_x * (reaction.a_inlet - out.a(0, j));
            const double m_out = flow ? flow->u(grid.nx, j) * grid.dy : 0.0;
            net_in -= m_out * out.a(grid.nx - 1, j);
        }
    }
    // gross reactive throughput, only used to scale the imbalance
    double gross = 0.0;
    for (std::size_t f = 0; f < grid.reactive_faces.size(); ++f) {
        const ReactiveFace& rf = grid.reactive_faces[f];
        const double free_sites = std::max(reaction.b0 - out.ab[f], 0.0);
        const double flux = reaction.k_a * out.a(rf.i, rf.j) * free_sites -
                            reaction.k_d * out.ab[f];
        gross += std::abs(flux) * rf.length;
    }

    out.audit.bulk_change = bulk_inventory(grid, out.a) -
                            bulk_inventory(grid, a_old);
    out.audit.surface_change =
        surface_inventory(grid, out.ab) - surface_inventory(grid, ab_old);
    out.audit.boundary_net = net_in * dt;
    const double residual = out.audit.bulk_change + out.audit.surface_change -
                            out.audit.boundary_net;
    const double scale =
        std::max({bulk_inventory(grid, out.a), std::abs(net_in) * dt,
                  gross * dt, reaction.a_inlet * grid.dx * grid.dy});
    out.audit.imbalance_rel = scale > 0.0 ? std::abs(residual) / scale : 0.0;
    return out;
}

double mean_coverage(const Grid& grid, const std::vector<double>& ab) {
    if (grid.reactive_faces.empty())
        throw GeometryError("grid has no reactive faces");
    if (ab.size() != grid.reactive_faces.size())
        throw SolverError("coverage vector does not match reactive face count");
    double s = 0.0, len = 0.0;
    for (std::size_t f = 0; f < ab.size(); ++f) {
        s += ab[f] * grid.reactive_faces[f].length;
        len += grid.reactive_faces[f].length;
    }
    return s / len;
}

double wellmixed_coverage(const ReactionParams& reaction, double t) {
    const double rate = reaction.wellmixed_rate();
    return reaction.ab_eq() * (1.0 - std::exp(-rate * t));
}

} // namespace etstir
