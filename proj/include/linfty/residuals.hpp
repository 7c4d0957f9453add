#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "linfty/core.hpp"

namespace linfty::residuals {

/// Pointwise second- and third-derivative data of a scalar function:
/// hessian is n x n row-major, third is n^3 with index (i, j, k) at
/// i*n*n + j*n + k. Both are validated to be symmetric to 1e-12.
struct JetSample {
    int n = 1;
    std::vector<double> point;
    std::vector<double> hessian;
    std::vector<double> third;

    void validate() const;

    double hess(int i, int j) const { return hessian[static_cast<std::size_t>(i) * n + j]; }
    double d3(int i, int j, int k) const {
        return third[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

/// Where derivative samples come from: either analytic callables (value plus
/// optional exact hessian/third tensors) or a sampled ScalarField that is
/// differentiated with second-order central stencils of step h.
class DerivativeSource {
public:
    using ValueFn = std::function<double(const std::vector<double>&)>;
    using HessFn = std::function<std::vector<double>(const std::vector<double>&)>;
    using ThirdFn = std::function<std::vector<double>(const std::vector<double>&)>;

    /// Analytic source. Missing jet callables fall back to central
    /// differences of `value` with the given step.
    static DerivativeSource analytic(int n, ValueFn value, double fd_step = 1e-4);
    static DerivativeSource analytic_with_jets(int n, ValueFn value, HessFn hessian,
                                               ThirdFn third, double fd_step = 1e-4);
    /// Sampled source; derivatives use the grid spacing as the step.
    static DerivativeSource sampled(ScalarField field);

    int dim() const { return n_; }
    bool is_sampled() const { return field_.has_value(); }

    /// Hessian and third-derivative tensor at x. Sampled sources require the
    /// point to sit at least two stencil widths inside the grid; outside
    /// points throw std::domain_error.
    JetSample jet(const std::vector<double>& x) const;

    /// Hessian only (used to evaluate H(D^2 u) near x).
    std::vector<double> hessian_at(const std::vector<double>& x) const;

    double step() const;

private:
    DerivativeSource() = default;

    int n_ = 1;
    ValueFn value_;
    HessFn hess_;
    ThirdFn third_;
    double fd_step_ = 1e-4;
    std::optional<ScalarField> field_;
};

/// H evaluated on a hessian matrix (row-major n x n).
double h_of_hessian(const EnergySpec& spec, int n, const std::vector<double>& hessian);
/// Gradient of H with respect to the matrix argument, same layout.
std::vector<double> hx_of_hessian(const EnergySpec& spec, int n, const std::vector<double>& hessian);

/// The six-index contraction sum_{ijklpq} M_ij M_kl M_pq D3_ikl D3_jpq with
/// M = H_X(D^2 u); equals w^T M w for w_i = sum_kl M_kl D3_ikl.
double residual_a2inf(const JetSample& jet, const EnergySpec& spec);

/// The contracted form H_X(D^2 u) : grad(H(D^2 u)) (x) grad(H(D^2 u)),
/// with the gradient of H(D^2 u) taken by central differences around x.
double residual_contracted(const DerivativeSource& src, const std::vector<double>& x,
                           const EnergySpec& spec);

/// Essential sup of H(u'') over a subinterval (max over pieces).
double energy_sup(const PiecewiseQuadratic& u, const EnergySpec& spec,
                  std::optional<std::pair<double, double>> region = std::nullopt);
/// Essential sup of H(D^2 u) over interior samples of a field.
double energy_sup(const ScalarField& u, const EnergySpec& spec);

/// Averaged L^p energy (mean of H(u'')^p)^(1/p); exact per piece.
double energy_lp(const PiecewiseQuadratic& u, const EnergySpec& spec, double p);
/// Same via trapezoid quadrature over interior samples of a field.
double energy_lp(const ScalarField& u, const EnergySpec& spec, double p);

struct FlowIdentity {
    double lhs = 0.0;  // |V| d/dt H(D^2 u) along sgn(V)
    double rhs = 0.0;  // expanded residual at x
};

/// Both sides of the trajectory identity at a noncritical point; throws
/// std::domain_error when |V(x)| falls below v_threshold.
FlowIdentity flow_identity_residual(const DerivativeSource& src, const std::vector<double>& x,
                                    const EnergySpec& spec, double v_threshold = 1e-10);

struct LevelCheck {
    bool passes = false;
    double level = 0.0;          // median of H(D^2 u) over unmasked samples
    double max_deviation = 0.0;
    bool projection_constant = true;  // A:D^2 u single-valued (ProjectionSq only)
    int distinct_projection_values = 1;
    std::string sign_pattern;    // 1D: sign of u'' per piece/plateau
};

/// Constant-level certificate: H(D^2 u) should be a single constant away
/// from a mask around curvature jumps.
LevelCheck dsolution_levelcheck(const PiecewiseQuadratic& u, const EnergySpec& spec, double tol);
LevelCheck dsolution_levelcheck(const ScalarField& u, const EnergySpec& spec, double tol);

}  // namespace linfty::residuals
