#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace etstir {

/// Dense 2-D array with (i,j) indexing, row-major in i (x fastest).
/// Used for cell-centered fields (nx, ny), x-face fields (nx+1, ny)
/// and y-face fields (nx, ny+1).
struct Field2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int nx_, int ny_, double init = 0.0)
        : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, init) {}

    double& operator()(int i, int j) { return v[idx(i, j)]; }
    double operator()(int i, int j) const { return v[idx(i, j)]; }

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }
    std::size_t size() const { return v.size(); }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    double max() const {
        double m = -std::numeric_limits<double>::infinity();
        for (double x : v) m = std::max(m, x);
        return m;
    }
    double min() const {
        double m = std::numeric_limits<double>::infinity();
        for (double x : v) m = std::min(m, x);
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }

    bool same_shape(const Field2D& o) const { return nx == o.nx && ny == o.ny; }
};

} // namespace etstir
