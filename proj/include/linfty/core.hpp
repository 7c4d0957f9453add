#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace linfty {

/// Clamped boundary data for the 1D Dirichlet problem: values and first
/// derivatives prescribed at both endpoints of (a, b).
struct HermiteData1D {
    double a = 0.0;
    double b = 1.0;
    double A = 0.0;       // u(a)
    double B = 0.0;       // u(b)
    double Aprime = 0.0;  // u'(a)
    double Bprime = 0.0;  // u'(b)

    /// Throws std::invalid_argument unless a < b and all fields are finite.
    void validate() const;

    /// Scale used for the criticality threshold: max(1, |A|, |B|, |A'|, |B'|).
    double value_scale() const;
};

/// Hermite data of the built-in 1D test case: the cubic
/// g(x) = (32x^3 - 48x^2 + 22x - 3)/120 sampled at 0 and 1.
HermiteData1D test1_data();

/// A C^1 function on (a, b) that is quadratic on each subinterval between
/// consecutive breakpoints. Piece i covers [x_i, x_{i+1}) and evaluates as
/// c0 + c1*(x - x_i) + (c2/2)*(x - x_i)^2, so c2 is the (constant) second
/// derivative of that piece.
class PiecewiseQuadratic {
public:
    struct Piece {
        double c0 = 0.0;
        double c1 = 0.0;
        double c2 = 0.0;
    };

    /// Validates ordering, piece count = breakpoints + 1, and C^1 matching
    /// across every breakpoint to 1e-12 relative tolerance.
    PiecewiseQuadratic(double a, double b, std::vector<double> breakpoints,
                       std::vector<Piece> pieces);

    /// Builds a piecewise quadratic by integrating a given list of constant
    /// curvatures from the left state (u(a), u'(a)). The result is C^1 by
    /// construction.
    static PiecewiseQuadratic from_curvatures(double a, double b,
                                              double value_at_a, double slope_at_a,
                                              const std::vector<double>& breakpoints,
                                              const std::vector<double>& curvatures);

    double domain_left() const { return a_; }
    double domain_right() const { return b_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    double value(double x) const;
    double derivative(double x) const;
    /// Constant per piece; at a breakpoint returns the right-limit piece.
    double second(double x) const;

private:
    std::size_t piece_index(double x) const;

    double a_, b_;
    std::vector<double> breaks_;
    std::vector<Piece> pieces_;
};

/// order 0 -> u(x), 1 -> u'(x), 2 -> u''(x) (right limit at breakpoints).
/// Throws std::domain_error if x lies outside [a, b].
double eval_piecewise_quadratic(const PiecewiseQuadratic& pq, double x, int order);

// ---------------------------------------------------------------------------
// Energy specifications
// ---------------------------------------------------------------------------

/// H(X) = |X|^2, the squared Frobenius norm of the hessian.
struct FullHessianSq {};

/// H(X) = (A:X)^2 for a fixed symmetric positive definite matrix A
/// (row-major, n x n). A = I gives the squared Laplacian.
struct ProjectionSq {
    int n = 1;
    std::vector<double> A;  // n*n, symmetric positive definite
};

/// A scalar integrand H(t) for 1D problems, strictly decreasing on
/// (-inf, 0) and strictly increasing on (0, inf) with H(0) = 0, together
/// with its derivative and the two branches of its level-set inverse:
/// level_neg(t) < 0 < level_pos(t) and H(level_pm(t)) = t for t > 0.
struct Custom1D {
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    std::function<double(double)> level_neg;  // T^-
    std::function<double(double)> level_pos;  // T^+
};

using EnergySpec = std::variant<FullHessianSq, ProjectionSq, Custom1D>;

/// Validating constructors. make_projection_sq checks symmetry and positive
/// definiteness; make_custom1d samples the stated monotonicity and inverse
/// branch identities (|H(T^+-(t)) - t| <= 1e-10 * max(1, t)).
EnergySpec make_full_hessian_sq();
EnergySpec make_projection_sq(int n, std::vector<double> A);
EnergySpec make_custom1d(std::function<double(double)> h,
                         std::function<double(double)> h_prime,
                         std::function<double(double)> level_neg,
                         std::function<double(double)> level_pos);

/// The spec with H(t) = t^2 as a Custom1D (level branches +-sqrt(t)).
EnergySpec square_energy_1d();

/// Scalar reduction of a spec for 1D use: H applied to a curvature value t.
/// ProjectionSq must be 1x1 here; its entry is folded into the integrand.
double h_curvature(const EnergySpec& spec, double t);
/// d/dt of the above.
double h_curvature_prime(const EnergySpec& spec, double t);
/// Level-set branches of the 1D reduction, defined for level > 0.
double h_level_neg(const EnergySpec& spec, double level);
double h_level_pos(const EnergySpec& spec, double level);
/// True if the spec admits the 1D reduction above.
bool is_one_dimensional(const EnergySpec& spec);

// ---------------------------------------------------------------------------
// Sampled fields
// ---------------------------------------------------------------------------

/// Uniformly sampled function values on a 1D interval grid or a 2D tensor
/// grid, row-major. spacing/origin are per axis; axis 0 is the row index.
struct ScalarField {
    int dimension = 1;
    std::array<int, 2> shape{0, 1};
    std::array<double, 2> spacing{1.0, 1.0};
    std::array<double, 2> origin{0.0, 0.0};
    std::vector<double> values;

    static ScalarField make_1d(int n, double h, double origin,
                               std::vector<double> values);
    static ScalarField make_2d(int n0, int n1, double h0, double h1,
                               double origin0, double origin1,
                               std::vector<double> values);

    void validate() const;

    std::size_t size() const { return values.size(); }
    double& at(int i) { return values[static_cast<std::size_t>(i)]; }
    double at(int i) const { return values[static_cast<std::size_t>(i)]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * shape[1] + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * shape[1] + j]; }
    double coord0(int i) const { return origin[0] + spacing[0] * i; }
    double coord1(int j) const { return origin[1] + spacing[1] * j; }
};

// ---------------------------------------------------------------------------
// Solver diagnostics
// ---------------------------------------------------------------------------

/// A detected jump of a (piecewise constant) derivative field.
struct BreakMetric {
    double location = 0.0;
    double left_value = 0.0;   // plateau median left of the break
    double right_value = 0.0;  // plateau median right of the break
    double jump = 0.0;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double tolerance = 0.0;
    double energy = 0.0;
    bool converged = false;
    std::vector<BreakMetric> breaks;

    /// Invariant: converged implies final_residual <= tolerance.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Hermite-data operations
// ---------------------------------------------------------------------------

/// Interpolation defect of the clamped data,
///   E(g) = (B'-A')/(b-a) - 2(B - A - A'(b-a))/(b-a)^2.
/// Zero exactly when the data is matched by a quadratic polynomial.
double hermite_defect(const HermiteData1D& d);

/// True when |E(g)| < 1e-10 * max(1, |A|, |B|, |A'|, |B'|).
bool is_critical_data(const HermiteData1D& d);

/// Monomial coefficients (c[0] + c[1] x + c[2] x^2 + c[3] x^3) of the unique
/// cubic with Q(a)=A, Q(b)=B, Q'(a)=A', Q'(b)=B'.
std::array<double, 4> cubic_hermite(const HermiteData1D& d);

}  // namespace linfty
