#pragma once

#include <cstdint>
#include <vector>

#include "etstir/field.hpp"

namespace etstir {

/// 5-point stencil system on a structured (nx, ny) index set.
/// Row for an active unknown x(i,j):
///   diag*x(i,j) + west*x(i-1,j) + east*x(i+1,j)
///              + south*x(i,j-1) + north*x(i,j+1) = rhs
/// Inactive entries are identity rows: x(i,j) = rhs(i,j). Off-diagonal
/// links never reference outside the index range; assembly guarantees
/// coefficients to out-of-range neighbors are zero.
struct StencilSystem {
    int nx = 0;
    int ny = 0;
    std::vector<double> diag, west, east, south, north, rhs;
    std::vector<std::uint8_t> active;

    StencilSystem() = default;
    StencilSystem(int nx_, int ny_)
        : nx(nx_), ny(ny_),
          diag(static_cast<std::size_t>(nx_) * ny_, 0.0),
          west(diag.size(), 0.0), east(diag.size(), 0.0),
          south(diag.size(), 0.0), north(diag.size(), 0.0),
          rhs(diag.size(), 0.0), active(diag.size(), 0) {}

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    /// r = rhs - A x over active rows (zero elsewhere); returns ||r||_2.
    double residual(const std::vector<double>& x, std::vector<double>& r) const;
    double rhs_norm() const;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Incomplete-Cholesky preconditioned conjugate gradient; requires a
/// symmetric positive-definite system. Throws SolverError past max_iter.
SolveStats solve_cg(const StencilSystem& sys, std::vector<double>& x,
                    double rel_tol, int max_iter);

/// ILU(0)-preconditioned BiCGStab for the nonsymmetric systems
/// (advection-diffusion). Throws SolverError past max_iter.
SolveStats solve_bicgstab(const StencilSystem& sys, std::vector<double>& x,
                          double rel_tol, int max_iter);

} // namespace etstir
