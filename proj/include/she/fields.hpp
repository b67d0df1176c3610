#pragma once

#include <vector>

#include "she/errors.hpp"

namespace she {

// Uniform grid on the torus of circumference 2, identified with [-1,1).
// Grid points are cell left endpoints x_j = -1 + j*dx, so x = 0 is the
// point with index n/2 (n is required to be even).
struct TorusGrid {
    int n_points;
    double spacing;

    explicit TorusGrid(int n);

    double point(int j) const { return -1.0 + j * spacing; }

    // Index of the cell containing x (x wrapped into [-1,1)).
    int cell_of(double x) const;

    // Torus distance between two points, in [0,1].
    static double distance(double x, double y);

    bool operator==(const TorusGrid& o) const { return n_points == o.n_points; }
};

struct GridFunction {
    TorusGrid grid;
    std::vector<double> values;

    explicit GridFunction(TorusGrid g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.n_points), fill) {}

    GridFunction(TorusGrid g, std::vector<double> v);

    int size() const { return grid.n_points; }
    double& operator[](int j) { return values[static_cast<size_t>(j)]; }
    double operator[](int j) const { return values[static_cast<size_t>(j)]; }

    bool all_finite() const;

    // Pointwise sample of a callable f(x) at the grid points.
    template <class F>
    static GridFunction sample(TorusGrid g, F&& f) {
        GridFunction out(g);
        for (int j = 0; j < g.n_points; ++j) out[j] = f(g.point(j));
        return out;
    }
};

// Left-endpoint quadrature of the L1 norm, spacing * sum |f_j|.
double norm_l1(const GridFunction& f);

// max_j |f_j|.
double norm_sup(const GridFunction& f);

// max_j log f_j - min_j log f_j; requires strictly positive values.
double osc_log(const GridFunction& f);

// norm_sup / norm_l1; requires positive mass.
double ratio_sup_l1(const GridFunction& f);

}  // namespace she
