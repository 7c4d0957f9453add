#pragma once

#include <string>
#include <vector>

#include "linfty/core.hpp"
#include "linfty/residuals.hpp"

namespace linfty::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // the quantity compared against the threshold
    double threshold = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    bool passed = false;
    std::vector<CheckResult> checks;
};

std::vector<std::string> suite_names();
/// Runs one of: residual-identities, exact1d-oracle, dsolution,
/// energy-limit, flow-identity. Throws std::invalid_argument for
/// unknown names.
SuiteReport run_suite(const std::string& name);

// ------ shared fixtures and independent oracles ------

/// H(t) = t^2 for t >= 0 and 4 t^2 for t < 0 (equal-level curve L = -R/2).
EnergySpec asymmetric_energy_1d();

/// The saddle u(x, y) = |x|^{12/5} - |y|^{12/5} with exact derivative
/// callables; smooth away from the axes.
residuals::DerivativeSource aronsson_saddle();

/// Direct six-index evaluation of M^{(x)3} : (D^3 u)^{(x)2} for a given
/// symmetric matrix M; the loop oracle for the contraction identities.
double six_index_contraction(const residuals::JetSample& jet, const std::vector<double>& M);

struct BruteForcePair {
    double R = 0.0;
    double L = 0.0;
    double xi = 0.0;
    double energy = 0.0;
};

/// Exhaustive search over C^1-matched curvature pairs: walks R on a uniform
/// grid, takes L from the matching hyperbola, and minimises max(H(L), H(R))
/// over the admissible branch. Independent of the closed-form/root-finding
/// path in exact1d.
BruteForcePair brute_force_minimiser(const HermiteData1D& d, const EnergySpec& spec,
                                     double resolution = 1e-4);

}  // namespace linfty::verify
