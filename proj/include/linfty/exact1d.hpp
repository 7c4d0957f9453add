#pragma once

#include <optional>

#include "linfty/core.hpp"

namespace linfty::exact1d {

/// Constants of the curvature-pair hyperbola (R - c1)(L - c2) = c1 c2 - c0^2
/// induced by clamped data. Satisfies c0^2 - c1 c2 = defect^2.
struct HyperbolaConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

HyperbolaConstants hyperbola_constants(const HermiteData1D& d);

/// Single-quadratic solution for data with zero interpolation defect.
/// Throws std::invalid_argument (naming the defect) otherwise.
PiecewiseQuadratic quadratic_minimiser(const HermiteData1D& d);

/// The unique C^1 matching point xi = (B'-A' + aL - bR)/(L - R) of the
/// left/right quadratic pieces with curvatures L and R. Throws
/// std::invalid_argument when L == R. The caller must check a < xi < b.
double matching_point(double R, double L, const HermiteData1D& d);

struct AbsoluteMinimiser {
    PiecewiseQuadratic u;
    std::optional<double> xi;  // empty for the single-quadratic branch
    double left_curvature = 0.0;
    double right_curvature = 0.0;
    double energy = 0.0;  // sup of H(u'') over the domain
};

/// The unique two-sided-constant-curvature minimiser of ||H(u'')||_inf over
/// the clamped class: the quadratic when the defect vanishes, otherwise the
/// two-piece quadratic whose curvature pair is the intersection of the
/// equal-level curve {H(L) = H(R), L R < 0} with the admissible hyperbola
/// branch. The spec must reduce to a 1D integrand (strictly level-convex).
AbsoluteMinimiser absolute_minimiser(const HermiteData1D& d, const EnergySpec& spec);

/// Solution of the clamped p-bilaplacian (|u''|^{p-2} u'')'' = 0 for even p.
/// Critical data yields the quadratic; otherwise u'' = (lambda x + mu)^{1/(p-1)}
/// with (lambda, mu) solving the two boundary compatibility equations.
struct PExactSolution {
    int p = 2;
    bool critical = false;
    double lambda = 0.0;  // meaningful for the non-critical branch
    double mu = 0.0;
    HermiteData1D data;

    double value(double x) const;
    double derivative(double x) const;
    double second(double x) const;
    /// The point -mu/lambda when it falls inside (a, b); u is smooth elsewhere.
    std::optional<double> singular_point() const;
    /// Scaled residuals of the two compatibility equations (0 for critical).
    std::array<double, 2> system_residual() const;
    /// max(|u(b)-B|, |u'(b)-B'|) plus the matching mismatch at a.
    double boundary_residual() const;
};

struct PExactOptions {
    int max_newton_iterations = 60;
    double newton_tolerance = 1e-13;  // on the scaled residual norm
};

PExactSolution p_exact_solution(const HermiteData1D& d, int p, const PExactOptions& opts = {});

/// Feasibility of an energy level C for the fixed-|u''| construction:
/// margins are (lhs - rhs) of the two interval-containment inequalities;
/// feasible iff both are <= 0.
struct FeasibleLevel {
    bool feasible = false;
    double margin_right = 0.0;  // y_C <= b
    double margin_left = 0.0;   // a <= x_C
};

FeasibleLevel feasible_level(const HermiteData1D& d, double C);

/// Non-minimising solution with |u''| = C a.e.: curvature -C, +C, -C on
/// (a, x_C), (x_C, y_C), (y_C, b). Requires a feasible level.
struct CriticalPointSolution {
    double C = 0.0;
    double xc = 0.0;
    double yc = 0.0;
    double K = 0.0;
    double L = 0.0;  // y_C - x_C
    PiecewiseQuadratic u;
};

CriticalPointSolution critical_point_solution(const HermiteData1D& d, double C);

}  // namespace linfty::exact1d
