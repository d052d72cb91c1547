#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "etstir/errors.hpp"
#include "etstir/linsolve.hpp"

using namespace etstir;

namespace {

// 2-D Poisson with Dirichlet boundary folded into the rhs: SPD, its
// exact solution is whatever field we manufactured the rhs from
StencilSystem poisson_system(int nx, int ny, const std::vector<double>& exact) {
    StencilSystem sys(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = sys.idx(i, j);
            sys.active[k] = 1;
            double d = 0.0;
            // zero Dirichlet ghosts outside the index range
            auto couple = [&](int ii, int jj, double* link) {
                d += 1.0;
                if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) *link = -1.0;
            };
            couple(i - 1, j, &sys.west[k]);
            couple(i + 1, j, &sys.east[k]);
            couple(i, j - 1, &sys.south[k]);
            couple(i, j + 1, &sys.north[k]);
            sys.diag[k] = d;
        }
    }
    // b = A * exact
    std::vector<double> b(exact.size());
    sys.apply(exact, b);
    sys.rhs = b;
    return sys;
}

std::vector<double> smooth_field(int nx, int ny) {
    std::vector<double> f(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            f[static_cast<std::size_t>(j) * nx + i] =
                std::sin(0.3 * i) * std::cos(0.2 * j) + 0.1 * i;
    return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST_CASE("apply and residual agree on a hand-built 2x2 system") {
    StencilSystem sys(2, 2);
    for (std::size_t k = 0; k < 4; ++k) sys.active[k] = 1;
    sys.diag = {4, 3, 5, 2};
    sys.east[0] = -1;  // (0,0) -> (1,0)
    sys.west[1] = -2;  // (1,0) -> (0,0)
    sys.north[0] = -1; // (0,0) -> (0,1)
    sys.south[2] = -1; // (0,1) -> (0,0)
    const std::vector<double> x = {1, 2, 3, 4};
    std::vector<double> y;
    sys.apply(x, y);
    CHECK(y[0] == doctest::Approx(4 * 1 - 1 * 2 - 1 * 3));
    CHECK(y[1] == doctest::Approx(3 * 2 - 2 * 1));
    CHECK(y[2] == doctest::Approx(5 * 3 - 1 * 1));
    CHECK(y[3] == doctest::Approx(2 * 4));

    sys.rhs = y;
    std::vector<double> r;
    CHECK(sys.residual(x, r) == doctest::Approx(0.0));
}

TEST_CASE("cg solves an SPD Poisson system to the requested residual") {
    const int nx = 24, ny = 16;
    const auto exact = smooth_field(nx, ny);
    const StencilSystem sys = poisson_system(nx, ny, exact);

    std::vector<double> x(exact.size(), 0.0);
    const SolveStats st = solve_cg(sys, x, 1e-10, 5000);
    CHECK(st.relative_residual <= 1e-10);
    CHECK(st.iterations > 0);
    CHECK(max_abs_diff(x, exact) < 1e-7);

    std::vector<double> r;
    CHECK(sys.residual(x, r) <= 1e-10 * sys.rhs_norm());
}

TEST_CASE("cg leaves a zero-rhs system at zero without iterating") {
    StencilSystem sys(4, 4);
    for (std::size_t k = 0; k < sys.diag.size(); ++k) {
        sys.active[k] = 1;
        sys.diag[k] = 4.0;
    }
    std::vector<double> x(16, 0.0);
    const SolveStats st = solve_cg(sys, x, 1e-8, 100);
    CHECK(st.iterations == 0);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("inactive rows pass their rhs through untouched") {
    const int nx = 8, ny = 8;
    const auto exact = smooth_field(nx, ny);
    StencilSystem sys = poisson_system(nx, ny, exact);
    // deactivate one row; neighbors must not see it through the links
    const std::size_t dead = sys.idx(3, 4);
    sys.active[dead] = 0;
    sys.rhs[dead] = 42.0;
    sys.west[dead] = sys.east[dead] = sys.south[dead] = sys.north[dead] = 0.0;
    sys.east[sys.idx(2, 4)] = 0.0;
    sys.west[sys.idx(4, 4)] = 0.0;
    sys.north[sys.idx(3, 3)] = 0.0;
    sys.south[sys.idx(3, 5)] = 0.0;

    std::vector<double> x;
    solve_cg(sys, x, 1e-10, 5000);
    CHECK(x[dead] == 42.0);

    std::vector<double> xb;
    solve_bicgstab(sys, xb, 1e-10, 5000);
    CHECK(xb[dead] == 42.0);
}

TEST_CASE("bicgstab solves a nonsymmetric upwind advection-diffusion system") {
    // 1-D steady advection-diffusion, strongly one-sided coefficients
    const int n = 64;
    StencilSystem sys(n, 1);
    const double adv = 5.0, dif = 1.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = sys.idx(i, 0);
        sys.active[k] = 1;
        double d = adv + 2.0 * dif; // upwind inflow + two diffusion links
        if (i > 0) sys.west[k] = -(adv + dif);
        if (i + 1 < n) sys.east[k] = -dif;
        if (i == 0) d += dif;       // Dirichlet ghost west
        if (i + 1 == n) d -= dif;   // zero-gradient east
        sys.diag[k] = d;
    }
    // manufacture rhs from a known solution
    std::vector<double> exact(n);
    for (int i = 0; i < n; ++i) exact[i] = 1.0 + 0.01 * i * i;
    std::vector<double> b;
    sys.apply(exact, b);
    sys.rhs = b;

    std::vector<double> x(n, 0.0);
    const SolveStats st = solve_bicgstab(sys, x, 1e-12, 5000);
    CHECK(st.relative_residual <= 1e-12);
    CHECK(max_abs_diff(x, exact) < 1e-8 * 50.0);
}

TEST_CASE("solvers throw with the final residual when capped") {
    const int nx = 16, ny = 16;
    const auto exact = smooth_field(nx, ny);
    const StencilSystem sys = poisson_system(nx, ny, exact);

    std::vector<double> x(exact.size(), 0.0);
    CHECK_THROWS_AS(solve_cg(sys, x, 1e-14, 2), SolverError);
    try {
        std::vector<double> y(exact.size(), 0.0);
        solve_cg(sys, y, 1e-14, 2);
    } catch (const SolverError& e) {
        CHECK(e.final_residual > 0.0);
    }

    std::vector<double> xb(exact.size(), 0.0);
    CHECK_THROWS_AS(solve_bicgstab(sys, xb, 1e-15, 1), SolverError);
}

TEST_CASE("warm starts at the solution return immediately") {
    const int nx = 12, ny = 12;
    const auto exact = smooth_field(nx, ny);
    const StencilSystem sys = poisson_system(nx, ny, exact);
    std::vector<double> x = exact;
    const SolveStats st = solve_cg(sys, x, 1e-8, 100);
    CHECK(st.iterations == 0);
    CHECK(max_abs_diff(x, exact) == 0.0);
}
