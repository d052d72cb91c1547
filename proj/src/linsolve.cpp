#include "etstir/linsolve.hpp"

#include <cmath>
#include <string>

#include "etstir/errors.hpp"

namespace etstir {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Zero-fill incomplete LU of the 5-point stencil, M = (D+L) D^-1 (D+U)
/// with L/U the strict triangles of A and pivots from the no-fill
/// recurrence. For symmetric systems this is incomplete Cholesky. Exact
/// on 1-D (tridiagonal) systems. Inactive rows pass through untouched.
struct Ilu0 {
    const StencilSystem* sys = nullptr;
    std::vector<double> d; // pivots

    void build(const StencilSystem& s) {
        sys = &s;
        const std::size_t n = s.diag.size();
        d.assign(n, 1.0);
        for (int j = 0; j < s.ny; ++j)
            for (int i = 0; i < s.nx; ++i) {
                const std::size_t k = s.idx(i, j);
                if (!s.active[k]) continue;
                double t = s.diag[k];
                if (s.west[k] != 0.0 && s.active[k - 1])
                    t -= s.west[k] * s.east[k - 1] / d[k - 1];
                if (s.south[k] != 0.0 && s.active[k - s.nx])
                    t -= s.south[k] * s.north[k - s.nx] / d[k - s.nx];
                // M-matrix pivots stay positive; fall back to the diagonal
                // if irregular coefficients break that
                d[k] = std::abs(t) > 1e-300 ? t : s.diag[k];
            }
    }

    /// z = M^-1 r (forward then backward sweep; tmp is scratch).
    void apply(const std::vector<double>& r, std::vector<double>& z,
               std::vector<double>& tmp) const {
        const StencilSystem& s = *sys;
        tmp.assign(r.size(), 0.0);
        for (int j = 0; j < s.ny; ++j)
            for (int i = 0; i < s.nx; ++i) {
                const std::size_t k = s.idx(i, j);
                if (!s.active[k]) continue;
                double t = r[k];
                if (s.west[k] != 0.0 && s.active[k - 1])
                    t -= s.west[k] * tmp[k - 1];
                if (s.south[k] != 0.0 && s.active[k - s.nx])
                    t -= s.south[k] * tmp[k - s.nx];
                tmp[k] = t / d[k];
            }
        z.assign(r.size(), 0.0);
        for (int j = s.ny - 1; j >= 0; --j)
            for (int i = s.nx - 1; i >= 0; --i) {
                const std::size_t k = s.idx(i, j);
                if (!s.active[k]) continue;
                double t = 0.0;
                if (s.east[k] != 0.0 && s.active[k + 1])
                    t += s.east[k] * z[k + 1];
                if (s.north[k] != 0.0 && s.active[k + s.nx])
                    t += s.north[k] * z[k + s.nx];
                z[k] = tmp[k] - t / d[k];
            }
    }
};

} // namespace

void StencilSystem::apply(const std::vector<double>& x,
                          std::vector<double>& y) const {
    y.assign(x.size(), 0.0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = idx(i, j);
            if (!active[k]) {
                y[k] = x[k];
                continue;
            }
            double s = diag[k] * x[k];
            if (west[k] != 0.0) s += west[k] * x[k - 1];
            if (east[k] != 0.0) s += east[k] * x[k + 1];
            if (south[k] != 0.0) s += south[k] * x[k - nx];
            if (north[k] != 0.0) s += north[k] * x[k + nx];
            y[k] = s;
        }
    }
}

double StencilSystem::residual(const std::vector<double>& x,
                               std::vector<double>& r) const {
    r.assign(x.size(), 0.0);
    double s2 = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = idx(i, j);
            if (!active[k]) continue;
            double s = rhs[k] - diag[k] * x[k];
            if (west[k] != 0.0) s -= west[k] * x[k - 1];
            if (east[k] != 0.0) s -= east[k] * x[k + 1];
            if (south[k] != 0.0) s -= south[k] * x[k - nx];
            if (north[k] != 0.0) s -= north[k] * x[k + nx];
            r[k] = s;
            s2 += s * s;
        }
    }
    return std::sqrt(s2);
}

double StencilSystem::rhs_norm() const {
    double s2 = 0.0;
    for (std::size_t k = 0; k < rhs.size(); ++k)
        if (active[k]) s2 += rhs[k] * rhs[k];
    return std::sqrt(s2);
}

SolveStats solve_cg(const StencilSystem& sys, std::vector<double>& x,
                    double rel_tol, int max_iter) {
    const std::size_t n = sys.diag.size();
    if (x.size() != n) x.assign(n, 0.0);

    // pin inactive entries to their prescribed values
    for (std::size_t k = 0; k < n; ++k)
        if (!sys.active[k]) x[k] = sys.rhs[k];

    const double bnorm = sys.rhs_norm();
    std::vector<double> r(n), z(n), p(n), q(n), scratch(n);
    double rnorm = sys.residual(x, r);
    if (bnorm == 0.0 || rnorm <= rel_tol * bnorm)
        return {0, bnorm > 0.0 ? rnorm / bnorm : 0.0};

    Ilu0 precond;
    precond.build(sys);

    precond.apply(r, z, scratch);
    p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        sys.apply(p, q);
        for (std::size_t k = 0; k < n; ++k)
            if (!sys.active[k]) q[k] = 0.0;
        const double pq = dot(p, q);
        if (pq == 0.0) break;
        const double alpha = rz / pq;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        rnorm = norm2(r);
        if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
        precond.apply(r, z, scratch);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    throw SolverError("cg: no convergence after " + std::to_string(max_iter) +
                          " iterations, relative residual " +
                          std::to_string(rnorm / bnorm),
                      rnorm / bnorm);
}

SolveStats solve_bicgstab(const StencilSystem& sys, std::vector<double>& x,
                          double rel_tol, int max_iter) {
    const std::size_t n = sys.diag.size();
    if (x.size() != n) x.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (!sys.active[k]) x[k] = sys.rhs[k];

    const double bnorm = sys.rhs_norm();
    std::vector<double> r(n);
    double rnorm = sys.residual(x, r);
    if (bnorm == 0.0 || rnorm <= rel_tol * bnorm)
        return {0, bnorm > 0.0 ? rnorm / bnorm : 0.0};

    Ilu0 precond;
    precond.build(sys);

    std::vector<double> r0(n), p(n), ph(n), s(n), sh(n), v(n), t(n), scratch(n);
    int it = 0;

    // outer loop restarts the Krylov process after a rho/omega breakdown
    while (it < max_iter) {
        rnorm = sys.residual(x, r);
        if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
        r0 = r;
        p = r;
        double rho = dot(r0, r);
        if (rho == 0.0) break;

        bool breakdown = false;
        while (it < max_iter && !breakdown) {
            ++it;
            precond.apply(p, ph, scratch);
            sys.apply(ph, v);
            for (std::size_t k = 0; k < n; ++k)
                if (!sys.active[k]) v[k] = 0.0;
            const double r0v = dot(r0, v);
            if (r0v == 0.0) {
                breakdown = true;
                break;
            }
            const double alpha = rho / r0v;
            for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
            if (norm2(s) <= rel_tol * bnorm) {
                for (std::size_t k = 0; k < n; ++k) x[k] += alpha * ph[k];
                // the recurrence residual can drift below the true one;
                // only a verified true residual counts as convergence
                rnorm = sys.residual(x, r);
                if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
                breakdown = true; // restart the Krylov process from x
                break;
            }
            precond.apply(s, sh, scratch);
            sys.apply(sh, t);
            for (std::size_t k = 0; k < n; ++k)
                if (!sys.active[k]) t[k] = 0.0;
            const double tt = dot(t, t);
            if (tt == 0.0) {
                breakdown = true;
                break;
            }
            const double omega = dot(t, s) / tt;
            for (std::size_t k = 0; k < n; ++k) {
                x[k] += alpha * ph[k] + omega * sh[k];
                r[k] = s[k] - omega * t[k];
            }
            rnorm = norm2(r);
            if (rnorm <= rel_tol * bnorm) {
                rnorm = sys.residual(x, r); // verify, as above
                if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
                breakdown = true;
                break;
            }
            const double rho_new = dot(r0, r);
            if (omega == 0.0 || rho_new == 0.0) {
                breakdown = true;
                break;
            }
            const double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t k = 0; k < n; ++k)
                p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
        if (!breakdown) break;
    }
    rnorm = sys.residual(x, r);
    if (rnorm <= rel_tol * bnorm) return {it, rnorm / bnorm};
    throw SolverError("bicgstab: no convergence after " + std::to_string(it) +
                          " iterations, relative residual " +
                          std::to_string(rnorm / bnorm),
                      rnorm / bnorm);
}

} // namespace etstir
