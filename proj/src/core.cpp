#include "linfty/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace linfty {

namespace {

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// In-place Cholesky; returns false when the matrix is not positive definite.
bool cholesky(int n, std::vector<double>& m) {
    for (int j = 0; j < n; ++j) {
        double d = m[j * n + j];
        for (int k = 0; k < j; ++k) d -= m[j * n + k] * m[j * n + k];
        if (d <= 0.0) return false;
        const double l = std::sqrt(d);
        m[j * n + j] = l;
        for (int i = j + 1; i < n; ++i) {
            double s = m[i * n + j];
            for (int k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
            m[i * n + j] = s / l;
        }
    }
    return true;
}

}  // namespace

void HermiteData1D::validate() const {
    if (!all_finite({a, b, A, B, Aprime, Bprime}))
        throw std::invalid_argument("HermiteData1D: all fields must be finite");
    if (!(a < b))
        throw std::invalid_argument("HermiteData1D: requires a < b");
}

double HermiteData1D::value_scale() const {
    return std::max({1.0, std::fabs(A), std::fabs(B), std::fabs(Aprime), std::fabs(Bprime)});
}

HermiteData1D test1_data() {
    // Endpoint values of g(x) = (32x^3 - 48x^2 + 22x - 3)/120 on (0, 1).
    return HermiteData1D{0.0, 1.0, -1.0 / 40.0, 1.0 / 40.0, 11.0 / 60.0, 11.0 / 60.0};
}

// ---------------------------------------------------------------------------
// PiecewiseQuadratic
// ---------------------------------------------------------------------------

PiecewiseQuadratic::PiecewiseQuadratic(double a, double b, std::vector<double> breakpoints,
                                       std::vector<Piece> pieces)
    : a_(a), b_(b), breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (!(a_ < b_) || !std::isfinite(a_) || !std::isfinite(b_))
        throw std::invalid_argument("PiecewiseQuadratic: bad domain");
    if (pieces_.size() != breaks_.size() + 1)
        throw std::invalid_argument("PiecewiseQuadratic: pieces count must be breakpoints + 1");
    double prev = a_;
    for (double xi : breaks_) {
        if (!(xi > prev) || !(xi < b_))
            throw std::invalid_argument("PiecewiseQuadratic: breakpoints must be sorted inside (a,b)");
        prev = xi;
    }
    for (const Piece& p : pieces_) {
        if (!all_finite({p.c0, p.c1, p.c2}))
            throw std::invalid_argument("PiecewiseQuadratic: non-finite coefficients");
    }
    // C^1 matching across every breakpoint, 1e-12 relative.
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
        const double xl = (k == 0) ? a_ : breaks_[k - 1];
        const double dx = breaks_[k] - xl;
        const Piece& L = pieces_[k];
        const Piece& R = pieces_[k + 1];
        const double vl = L.c0 + L.c1 * dx + 0.5 * L.c2 * dx * dx;
        const double sl = L.c1 + L.c2 * dx;
        const double vscale = std::max({1.0, std::fabs(vl), std::fabs(R.c0)});
        const double sscale = std::max({1.0, std::fabs(sl), std::fabs(R.c1)});
        if (std::fabs(vl - R.c0) > 1e-12 * vscale || std::fabs(sl - R.c1) > 1e-12 * sscale) {
            std::ostringstream os;
            os << "PiecewiseQuadratic: C1 mismatch at breakpoint " << breaks_[k]
               << " (value gap " << vl - R.c0 << ", slope gap " << sl - R.c1 << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

PiecewiseQuadratic PiecewiseQuadratic::from_curvatures(double a, double b,
                                                       double value_at_a, double slope_at_a,
                                                       const std::vector<double>& breakpoints,
                                                       const std::vector<double>& curvatures) {
    if (curvatures.size() != breakpoints.size() + 1)
        throw std::invalid_argument("from_curvatures: need one curvature per interval");
    std::vector<Piece> pieces;
    pieces.reserve(curvatures.size());
    double v = value_at_a;
    double s = slope_at_a;
    double xl = a;
    for (std::size_t k = 0; k < curvatures.size(); ++k) {
        pieces.push_back(Piece{v, s, curvatures[k]});
        const double xr = (k < breakpoints.size()) ? breakpoints[k] : b;
        const double dx = xr - xl;
        v += s * dx + 0.5 * curvatures[k] * dx * dx;
        s += curvatures[k] * dx;
        xl = xr;
    }
    return PiecewiseQuadratic(a, b, breakpoints, std::move(pieces));
}

std::size_t PiecewiseQuadratic::piece_index(double x) const {
    // First piece whose right edge is strictly beyond x: breakpoints behave
    // as right-limit boundaries.
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin());
}

double PiecewiseQuadratic::value(double x) const {
    const std::size_t k = piece_index(x);
    const double xl = (k == 0) ? a_ : breaks_[k - 1];
    const double dx = x - xl;
    const Piece& p = pieces_[k];
    return p.c0 + p.c1 * dx + 0.5 * p.c2 * dx * dx;
}

double PiecewiseQuadratic::derivative(double x) const {
    const std::size_t k = piece_index(x);
    const double xl = (k == 0) ? a_ : breaks_[k - 1];
    const Piece& p = pieces_[k];
    return p.c1 + p.c2 * (x - xl);
}

double PiecewiseQuadratic::second(double x) const {
    return pieces_[piece_index(x)].c2;
}

double eval_piecewise_quadratic(const PiecewiseQuadratic& pq, double x, int order) {
    if (!(x >= pq.domain_left() && x <= pq.domain_right()))
        throw std::domain_error("eval_piecewise_quadratic: x outside the domain");
    switch (order) {
        case 0: return pq.value(x);
        case 1: return pq.derivative(x);
        case 2: return pq.second(x);
        default: throw std::invalid_argument("eval_piecewise_quadratic: order must be 0, 1 or 2");
    }
}

// ---------------------------------------------------------------------------
// Energy specifications
// ---------------------------------------------------------------------------

EnergySpec make_full_hessian_sq() { return FullHessianSq{}; }

EnergySpec make_projection_sq(int n, std::vector<double> A) {
    if (n < 1 || A.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("ProjectionSq: matrix size mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(A[i * n + j] - A[j * n + i]) >
                1e-12 * std::max(1.0, std::fabs(A[i * n + j])))
                throw std::invalid_argument("ProjectionSq: matrix must be symmetric");
    std::vector<double> chol = A;
    if (!cholesky(n, chol))
        throw std::invalid_argument("ProjectionSq: matrix must be positive definite");
    return ProjectionSq{n, std::move(A)};
}

EnergySpec make_custom1d(std::function<double(double)> h,
                         std::function<double(double)> h_prime,
                         std::function<double(double)> level_neg,
                         std::function<double(double)> level_pos) {
    if (!h || !h_prime || !level_neg || !level_pos)
        throw std::invalid_argument("Custom1D: all callables are required");
    if (std::fabs(h(0.0)) > 1e-14)
        throw std::invalid_argument("Custom1D: requires H(0) = 0");
    // Strict monotonicity on each side, sampled over several decades.
    double prev_pos = 0.0, prev_neg = 0.0;
    for (double t : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e3}) {
        const double hp = h(t);
        const double hn = h(-t);
        if (!(hp > prev_pos) || !(hn > prev_neg))
            throw std::invalid_argument("Custom1D: H must be strictly monotone away from 0");
        if (hp < -1e-14 || hn < -1e-14)
            throw std::invalid_argument("Custom1D: H must be non-negative");
        prev_pos = hp;
        prev_neg = hn;
    }
    // Inverse branches: T^-(t) < 0 < T^+(t) and H(T^+-(t)) = t.
    for (double t : {1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3}) {
        const double tp = level_pos(t);
        const double tn = level_neg(t);
        if (!(tn < 0.0 && 0.0 < tp))
            throw std::invalid_argument("Custom1D: level branches must straddle 0");
        const double tol = 1e-10 * std::max(1.0, t);
        if (std::fabs(h(tp) - t) > tol || std::fabs(h(tn) - t) > tol)
            throw std::invalid_argument("Custom1D: level branches fail H(T(t)) = t");
    }
    return Custom1D{std::move(h), std::move(h_prime), std::move(level_neg), std::move(level_pos)};
}

EnergySpec square_energy_1d() {
    return make_custom1d([](double t) { return t * t; },
                         [](double t) { return 2.0 * t; },
                         [](double t) { return -std::sqrt(t); },
                         [](double t) { return std::sqrt(t); });
}

namespace {

// 1D reduction of ProjectionSq: the 1x1 matrix entry scales the curvature.
double projection_scalar(const ProjectionSq& p) {
    if (p.n != 1)
        throw std::invalid_argument("ProjectionSq: only 1x1 matrices reduce to a 1D integrand");
    return p.A[0];
}

}  // namespace

bool is_one_dimensional(const EnergySpec& spec) {
    if (std::holds_alternative<FullHessianSq>(spec)) return true;
    if (std::holds_alternative<Custom1D>(spec)) return true;
    return std::get<ProjectionSq>(spec).n == 1;
}

double h_curvature(const EnergySpec& spec, double t) {
    if (const auto* c = std::get_if<Custom1D>(&spec)) return c->h(t);
    if (std::holds_alternative<FullHessianSq>(spec)) return t * t;
    const double alpha = projection_scalar(std::get<ProjectionSq>(spec));
    return (alpha * t) * (alpha * t);
}

double h_curvature_prime(const EnergySpec& spec, double t) {
    if (const auto* c = std::get_if<Custom1D>(&spec)) return c->h_prime(t);
    if (std::holds_alternative<FullHessianSq>(spec)) return 2.0 * t;
    const double alpha = projection_scalar(std::get<ProjectionSq>(spec));
    return 2.0 * alpha * alpha * t;
}

double h_level_neg(const EnergySpec& spec, double level) {
    if (level <= 0.0) throw std::domain_error("h_level_neg: level must be positive");
    if (const auto* c = std::get_if<Custom1D>(&spec)) return c->level_neg(level);
    if (std::holds_alternative<FullHessianSq>(spec)) return -std::sqrt(level);
    return -std::sqrt(level) / projection_scalar(std::get<ProjectionSq>(spec));
}

double h_level_pos(const EnergySpec& spec, double level) {
    if (level <= 0.0) throw std::domain_error("h_level_pos: level must be positive");
    if (const auto* c = std::get_if<Custom1D>(&spec)) return c->level_pos(level);
    if (std::holds_alternative<FullHessianSq>(spec)) return std::sqrt(level);
    return std::sqrt(level) / projection_scalar(std::get<ProjectionSq>(spec));
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

ScalarField ScalarField::make_1d(int n, double h, double origin, std::vector<double> values) {
    ScalarField f;
    f.dimension = 1;
    f.shape = {n, 1};
    f.spacing = {h, 1.0};
    f.origin = {origin, 0.0};
    f.values = std::move(values);
    f.validate();
    return f;
}

ScalarField ScalarField::make_2d(int n0, int n1, double h0, double h1,
                                 double origin0, double origin1, std::vector<double> values) {
    ScalarField f;
    f.dimension = 2;
    f.shape = {n0, n1};
    f.spacing = {h0, h1};
    f.origin = {origin0, origin1};
    f.values = std::move(values);
    f.validate();
    return f;
}

void ScalarField::validate() const {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("ScalarField: dimension must be 1 or 2");
    if (shape[0] < 1 || shape[1] < 1)
        throw std::invalid_argument("ScalarField: empty shape");
    if (dimension == 1 && shape[1] != 1)
        throw std::invalid_argument("ScalarField: 1D fields must have shape (n, 1)");
    for (int ax = 0; ax < dimension; ++ax)
        if (!(spacing[ax] > 0.0))
            throw std::invalid_argument("ScalarField: spacing must be positive");
    if (values.size() != static_cast<std::size_t>(shape[0]) * shape[1])
        throw std::invalid_argument("ScalarField: value count does not match shape");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("ScalarField: all values must be finite");
}

void SolveReport::validate() const {
    if (converged && !(final_residual <= tolerance))
        throw std::logic_error("SolveReport: converged requires final_residual <= tolerance");
}

// ---------------------------------------------------------------------------
// Hermite-data operations
// ---------------------------------------------------------------------------

double hermite_defect(const HermiteData1D& d) {
    d.validate();
    const double w = d.b - d.a;
    return (d.Bprime - d.Aprime) / w - 2.0 * (d.B - d.A - d.Aprime * w) / (w * w);
}

bool is_critical_data(const HermiteData1D& d) {
    return std::fabs(hermite_defect(d)) < 1e-10 * d.value_scale();
}

std::array<double, 4> cubic_hermite(const HermiteData1D& d) {
    d.validate();
    const double w = d.b - d.a;
    // Coefficients in powers of (x - a), then shifted to global monomials.
    const double q0 = d.A;
    const double q1 = d.Aprime;
    const double q2 = 3.0 * (d.B - d.A) / (w * w) - (2.0 * d.Aprime + d.Bprime) / w;
    const double q3 = 2.0 * (d.A - d.B) / (w * w * w) + (d.Aprime + d.Bprime) / (w * w);
    const double a = d.a;
    std::array<double, 4> c{};
    c[3] = q3;
    c[2] = q2 - 3.0 * q3 * a;
    c[1] = q1 - 2.0 * q2 * a + 3.0 * q3 * a * a;
    c[0] = q0 - q1 * a + q2 * a * a - q3 * a * a * a;
    return c;
}

}  // namespace linfty
