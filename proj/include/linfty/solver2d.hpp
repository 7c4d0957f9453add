#pragma once

#include <array>
#include <functional>
#include <vector>

#include "linfty/core.hpp"

namespace linfty::solver2d {

/// Uniform n x n node grid on the square [-1, 1]^2.
struct Grid2D {
    int n = 17;

    void validate() const;
    double h() const { return 2.0 / (n - 1); }
    double coord(int i) const { return -1.0 + i * h(); }
};

/// Clamped boundary data: value and gradient, evaluable on the boundary
/// band (the two outermost node rings).
struct BoundaryData2D {
    std::function<double(double, double)> value;
    std::function<std::array<double, 2>(double, double)> grad;
};

/// g(x, y) = cos(pi x) cos(pi y) / 20, the built-in 2D test case.
BoundaryData2D test2_data();
/// Quadratic boundary family c20 x^2 + c11 x y + c02 y^2 + c10 x + c01 y + c00.
BoundaryData2D quadratic_data(const std::array<double, 6>& c);

struct SolverOptions {
    double newton_tolerance = 1e-9;
    int max_iterations = 200;
};

struct SolveResult {
    ScalarField u;
    SolveReport report;
};

/// Minimises sum over interior nodes of h^2 |Delta_h u|^p with the boundary
/// ring fixed to g and the first interior ring fixed through the one-sided
/// second-order normal-derivative relation. Damped Newton with a Levenberg
/// shift; p = 2 is a single linear solve. When p > 2 and no warm start is
/// given, the p = 2 solution initialises the iteration.
SolveResult solve_p_2d(const BoundaryData2D& g, int p, const Grid2D& grid,
                       const ScalarField* init = nullptr, const SolverOptions& opts = {});

/// 5-point Laplacian of the interior nodes; the output drops the boundary
/// ring (shape shrinks by 2 per axis, origin shifts by h).
ScalarField laplacian_field(const ScalarField& u);

struct InterfaceMetrics {
    double level = 0.0;              // median |lap| away from sign changes
    double cov = 0.0;                // std/median of |lap|, same exclusion
    int region_count = 0;            // connected components of sign(lap)
    std::array<int, 64> histogram{};
    double histogram_min = 0.0;
    double histogram_max = 0.0;
    double positive_median = 0.0;    // median of lap over the positive phase
    double negative_median = 0.0;
};

/// Piecewise-constant-interface statistics of a Laplacian field.
InterfaceMetrics interface_metrics(const ScalarField& lap);

}  // namespace linfty::solver2d
