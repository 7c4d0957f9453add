#pragma once

#include <vector>

#include "linfty/core.hpp"

namespace linfty::solver1d {

/// Uniform mesh on (a, b) with m elements; the discrete space is C^1
/// piecewise cubic with nodal (value, derivative) degrees of freedom.
struct Mesh1D {
    double a = 0.0;
    double b = 1.0;
    int m = 4;

    void validate() const;
    double h() const { return (b - a) / m; }
    double node(int i) const { return a + i * h(); }
};

/// Nodal state of the Hermite discretisation.
struct HermiteState {
    Mesh1D mesh;
    std::vector<double> values;
    std::vector<double> derivs;

    double value(double x) const;
    double derivative(double x) const;
    double second(double x) const;

    /// u'' sampled at k points per element (uniform, element-interior);
    /// k >= 1. The result carries the sample spacing.
    ScalarField second_derivative_field(int samples_per_element = 4) const;
};

struct ContinuationSchedule {
    std::vector<int> exponents;  // even, strictly increasing, first entry 2
    double newton_tolerance = 1e-9;
    int max_iterations = 120;

    void validate() const;
};

struct SolverOptions {
    double newton_tolerance = 1e-9;  // relative drop of the gradient norm
    int max_iterations = 120;
};

struct SolveResult {
    HermiteState state;
    SolveReport report;
};

/// Minimises the discrete energy sum_elements int |u''|^p over interior
/// degrees of freedom with clamped ends, by damped Newton with a Levenberg
/// shift. p even and >= 2; for p = 2 a single step lands on the cubic
/// interpolant. `init` warm-starts the iteration (defaults to the cubic).
SolveResult solve_p_1d(const HermiteData1D& d, int p, const Mesh1D& mesh,
                       const HermiteState* init = nullptr, const SolverOptions& opts = {});

/// Runs the schedule, warm-starting each stage from the previous solution.
/// A stage failure aborts and returns the stages completed so far together
/// with the failing stage's report (converged = false).
std::vector<SolveResult> p_continuation(const HermiteData1D& d, const ContinuationSchedule& sched,
                                        const Mesh1D& mesh);

/// Locates sign changes of a sampled u'' whose plateau-to-plateau jump
/// exceeds threshold_factor * median(|u''|). Nearby crossings within the
/// masking window are merged (Gibbs oscillations).
std::vector<BreakMetric> detect_breaks(const ScalarField& second_derivative,
                                       double threshold_factor = 0.5);

/// Discrete energy (int_a^b |u''|^p dx)^(1/p) of a state, computed with the
/// same quadrature as the solver.
double discrete_energy(const HermiteState& u, int p);

}  // namespace linfty::solver1d
