#include "linfty/exact1d.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace linfty::exact1d {

namespace {

// sign(s)|s|^e, the odd power used throughout the p-exact solutions.
double odd_pow(double s, double e) {
    return s >= 0.0 ? std::pow(s, e) : -std::pow(-s, e);
}

}  // namespace

HyperbolaConstants hyperbola_constants(const HermiteData1D& d) {
    d.validate();
    const double w = d.b - d.a;
    HyperbolaConstants h;
    h.c0 = (d.Bprime - d.Aprime) / w;
    h.c1 = 2.0 * (d.A - d.B - d.Bprime * (d.a - d.b)) / (w * w);
    h.c2 = 2.0 * (d.B - d.A - d.Aprime * w) / (w * w);
    return h;
}

PiecewiseQuadratic quadratic_minimiser(const HermiteData1D& d) {
    const double defect = hermite_defect(d);
    if (std::fabs(defect) >= 1e-10 * d.value_scale()) {
        std::ostringstream os;
        os << "quadratic_minimiser: data has nonzero interpolation defect " << defect;
        throw std::invalid_argument(os.str());
    }
    const double c2 = (d.Bprime - d.Aprime) / (d.b - d.a);
    return PiecewiseQuadratic::from_curvatures(d.a, d.b, d.A, d.Aprime, {}, {c2});
}

double matching_point(double R, double L, const HermiteData1D& d) {
    d.validate();
    if (L == R) throw std::invalid_argument("matching_point: degenerate, L == R");
    return (d.Bprime - d.Aprime + d.a * L - d.b * R) / (L - R);
}

namespace {

struct CurvaturePair {
    double R;
    double L;
};

// Hyperbola residual along the equal-level curve, parametrised by the level
// t > 0. For positive defect the right curvature is the positive branch;
// for negative defect the branches swap.
double level_curve_residual(const EnergySpec& spec, const HyperbolaConstants& h,
                            double t, bool positive_defect) {
    const double tp = h_level_pos(spec, t);
    const double tn = h_level_neg(spec, t);
    const double R = positive_defect ? tp : tn;
    const double L = positive_defect ? tn : tp;
    return (R - h.c1) * (L - h.c2) - (h.c1 * h.c2 - h.c0 * h.c0);
}

CurvaturePair pair_at_level(const EnergySpec& spec, double t, bool positive_defect) {
    const double tp = h_level_pos(spec, t);
    const double tn = h_level_neg(spec, t);
    return positive_defect ? CurvaturePair{tp, tn} : CurvaturePair{tn, tp};
}

// Unique root of the hyperbola residual on the equal-level curve. The
// residual starts at c0^2 >= 0 near t = 0 and decreases to -inf, so a
// geometric scan brackets the single sign change; bisection plus a final
// Newton polish (via the level-branch derivatives) pins it down.
double solve_level(const EnergySpec& spec, const HyperbolaConstants& h, double defect) {
    const bool pos = defect > 0.0;
    const double t_ref = std::max({std::fabs(h.c0), std::fabs(h.c1), std::fabs(h.c2),
                                   std::fabs(defect)});
    double lo = 1e-12 * h_curvature(spec, t_ref > 0 ? t_ref : 1.0);
    if (!(lo > 0.0)) lo = 1e-300;
    double f_lo = level_curve_residual(spec, h, lo, pos);
    if (f_lo < 0.0)
        throw std::runtime_error("absolute_minimiser: level-curve residual negative at the lower bracket");
    double hi = std::max(lo * 2.0, h_curvature(spec, t_ref > 0 ? t_ref : 1.0));
    double f_hi = level_curve_residual(spec, h, hi, pos);
    int grow = 0;
    while (f_hi > 0.0) {
        hi *= 4.0;
        f_hi = level_curve_residual(spec, h, hi, pos);
        if (++grow > 600) {
            std::ostringstream os;
            os << "absolute_minimiser: no sign change of the hyperbola residual up to level "
               << hi << " (residual " << f_hi << ")";
            throw std::runtime_error(os.str());
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = level_curve_residual(spec, h, mid, pos);
        if (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    // Newton polish: d/dt T^+- = 1 / H'(T^+-).
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const CurvaturePair rl = pair_at_level(spec, t, pos);
        const double f = (rl.R - h.c1) * (rl.L - h.c2) - (h.c1 * h.c2 - h.c0 * h.c0);
        const double dR = 1.0 / h_curvature_prime(spec, rl.R);
        const double dL = 1.0 / h_curvature_prime(spec, rl.L);
        const double df = dR * (rl.L - h.c2) + (rl.R - h.c1) * dL;
        if (!std::isfinite(df) || df == 0.0) break;
        const double t_next = t - f / df;
        if (!(t_next > lo && t_next < hi)) break;
        t = t_next;
    }
    return t;
}

}  // namespace

AbsoluteMinimiser absolute_minimiser(const HermiteData1D& d, const EnergySpec& spec) {
    d.validate();
    if (!is_one_dimensional(spec))
        throw std::invalid_argument("absolute_minimiser: spec must reduce to a 1D integrand");
    const double defect = hermite_defect(d);
    if (is_critical_data(d)) {
        AbsoluteMinimiser out{quadratic_minimiser(d), std::nullopt, 0.0, 0.0, 0.0};
        const double c2 = out.u.pieces().front().c2;
        out.left_curvature = out.right_curvature = c2;
        out.energy = h_curvature(spec, c2);
        return out;
    }

    const HyperbolaConstants h = hyperbola_constants(d);
    CurvaturePair rl{};
    const auto* custom = std::get_if<Custom1D>(&spec);
    const bool plain_square = !custom;  // FullHessianSq or 1x1 ProjectionSq
    if (plain_square) {
        // H(t) = (alpha t)^2: the equal-level curve is L = -R, and the
        // hyperbola equation becomes R^2 + (c2 - c1) R - c0^2 = 0. The
        // admissible root has the sign of the defect.
        const double half = 0.5 * (h.c1 - h.c2);
        const double disc = std::sqrt(half * half + h.c0 * h.c0);
        rl.R = defect > 0.0 ? half + disc : half - disc;
        rl.L = -rl.R;
    } else {
        const double level = solve_level(spec, h, defect);
        rl = pair_at_level(spec, level, defect > 0.0);
    }

    // Admissibility: the pair must sit on the constrained hyperbola branch.
    if (!(rl.L * rl.R < 0.0))
        throw std::runtime_error("absolute_minimiser: curvature pair does not straddle zero");
    const double lvl_gap = h_curvature(spec, rl.L) - h_curvature(spec, rl.R);
    if (std::fabs(lvl_gap) > 1e-9 * std::max(1.0, h_curvature(spec, rl.R)))
        throw std::runtime_error("absolute_minimiser: level mismatch H(L) != H(R)");
    const double xi = matching_point(rl.R, rl.L, d);
    if (!(xi > d.a && xi < d.b))
        throw std::runtime_error("absolute_minimiser: matching point escaped the domain");

    AbsoluteMinimiser out{
        PiecewiseQuadratic::from_curvatures(d.a, d.b, d.A, d.Aprime, {xi}, {rl.L, rl.R}),
        xi, rl.L, rl.R, std::max(h_curvature(spec, rl.L), h_curvature(spec, rl.R))};
    return out;
}

// ---------------------------------------------------------------------------
// p-exact solutions
// ---------------------------------------------------------------------------

namespace {

struct PSystem {
    double a, b, A, B, Ap, Bp;
    int p;
    double q;  // p/(p-1)

    // Antiderivative of |lambda t + mu|^q in t.
    double phi(double lambda, double mu, double x) const {
        const double s = lambda * x + mu;
        return odd_pow(s, q + 1.0) / (lambda * (q + 1.0));
    }

    std::array<double, 2> residual(double lambda, double mu) const {
        const double w = b - a;
        const double pa = std::pow(std::fabs(lambda * a + mu), q);
        const double pb = std::pow(std::fabs(lambda * b + mu), q);
        const double integral = phi(lambda, mu, b) - phi(lambda, mu, a);
        const double f1 = pb - pa - (Bp - Ap) * (static_cast<double>(p) / (p - 1)) * lambda;
        const double f2 = integral - pa * w - (B - A - Ap * w) * (static_cast<double>(p) / (p - 1)) * lambda;
        return {f1, f2};
    }

    // Magnitudes of the residual terms, used to scale the convergence test.
    std::array<double, 2> residual_scale(double lambda, double mu) const {
        const double w = b - a;
        const double pa = std::pow(std::fabs(lambda * a + mu), q);
        const double pb = std::pow(std::fabs(lambda * b + mu), q);
        const double integral = std::fabs(phi(lambda, mu, b)) + std::fabs(phi(lambda, mu, a));
        const double lam_term = std::fabs(lambda) * (static_cast<double>(p) / (p - 1));
        return {std::max({pa, pb, std::fabs(Bp - Ap) * lam_term, 1e-300}),
                std::max({integral, pa * w, std::fabs(B - A - Ap * w) * lam_term, 1e-300})};
    }

    // Analytic Jacobian of the residual in (lambda, mu).
    std::array<double, 4> jacobian(double lambda, double mu) const {
        const double w = b - a;
        const double sa = lambda * a + mu;
        const double sb = lambda * b + mu;
        const double ga = odd_pow(sa, q - 1.0);  // sign |s|^{q-1}
        const double gb = odd_pow(sb, q - 1.0);
        const double pa = std::pow(std::fabs(sa), q);
        const double pb = std::pow(std::fabs(sb), q);
        const double pfac = static_cast<double>(p) / (p - 1);

        const double dI_dmu = (pb - pa) / lambda;
        const double Sa = odd_pow(sa, q + 1.0);
        const double Sb = odd_pow(sb, q + 1.0);
        const double dI_dlam = (q / (q + 1.0)) * (Sb - Sa) / (lambda * lambda)
                               - mu * (pb - pa) / (lambda * lambda);

        std::array<double, 4> J{};
        J[0] = q * (gb * b - ga * a) - (Bp - Ap) * pfac;          // dF1/dlambda
        J[1] = q * (gb - ga);                                      // dF1/dmu
        J[2] = dI_dlam - q * ga * a * w - (B - A - Ap * w) * pfac; // dF2/dlambda
        J[3] = dI_dmu - q * ga * w;                                // dF2/dmu
        return J;
    }
};

double scaled_norm(const std::array<double, 2>& f, const std::array<double, 2>& s) {
    return std::max(std::fabs(f[0]) / s[0], std::fabs(f[1]) / s[1]);
}

// Damped Newton on the 2x2 compatibility system; halves the step until the
// scaled residual decreases.
void newton_solve(const PSystem& sys, double& lambda, double& mu, const PExactOptions& opts) {
    double res = scaled_norm(sys.residual(lambda, mu), sys.residual_scale(lambda, mu));
    for (int it = 0; it < opts.max_newton_iterations; ++it) {
        if (res <= opts.newton_tolerance) return;
        const auto f = sys.residual(lambda, mu);
        const auto J = sys.jacobian(lambda, mu);
        const double det = J[0] * J[3] - J[1] * J[2];
        if (det == 0.0 || !std::isfinite(det))
            throw std::runtime_error("p_exact_solution: singular Newton system");
        const double dl = -(f[0] * J[3] - f[1] * J[1]) / det;
        const double dm = -(J[0] * f[1] - J[2] * f[0]) / det;
        double step = 1.0;
        for (int half = 0; half < 40; ++half) {
            const double lam_try = lambda + step * dl;
            const double mu_try = mu + step * dm;
            if (lam_try != 0.0) {
                const double res_try =
                    scaled_norm(sys.residual(lam_try, mu_try), sys.residual_scale(lam_try, mu_try));
                if (res_try < res) {
                    lambda = lam_try;
                    mu = mu_try;
                    res = res_try;
                    break;
                }
            }
            step *= 0.5;
            if (half == 39) {
                std::ostringstream os;
                os << "p_exact_solution: Newton stalled at p = " << sys.p
                   << " with scaled residual " << res;
                throw std::runtime_error(os.str());
            }
        }
    }
    if (res > opts.newton_tolerance) {
        std::ostringstream os;
        os << "p_exact_solution: Newton did not converge at p = " << sys.p
           << " (scaled residual " << res << ")";
        throw std::runtime_error(os.str());
    }
}

}  // namespace

double PExactSolution::second(double x) const {
    if (critical) return (data.Bprime - data.Aprime) / (data.b - data.a);
    return odd_pow(lambda * x + mu, 1.0 / (p - 1));
}

double PExactSolution::derivative(double x) const {
    if (critical) return data.Aprime + second(x) * (x - data.a);
    const double q = static_cast<double>(p) / (p - 1);
    const double pa = std::pow(std::fabs(lambda * data.a + mu), q);
    const double px = std::pow(std::fabs(lambda * x + mu), q);
    return data.Aprime + (p - 1.0) / (p * lambda) * (px - pa);
}

double PExactSolution::value(double x) const {
    if (critical) {
        const double c = (data.Bprime - data.Aprime) / (data.b - data.a);
        const double dx = x - data.a;
        return data.A + data.Aprime * dx + 0.5 * c * dx * dx;
    }
    const double q = static_cast<double>(p) / (p - 1);
    const double pa = std::pow(std::fabs(lambda * data.a + mu), q);
    auto phi = [&](double t) {
        return odd_pow(lambda * t + mu, q + 1.0) / (lambda * (q + 1.0));
    };
    const double integral = phi(x) - phi(data.a);
    return data.A + (data.Aprime - (p - 1.0) / (p * lambda) * pa) * (x - data.a)
           + (p - 1.0) / (p * lambda) * integral;
}

std::optional<double> PExactSolution::singular_point() const {
    if (critical || lambda == 0.0) return std::nullopt;
    const double s = -mu / lambda;
    if (s > data.a && s < data.b) return s;
    return std::nullopt;
}

std::array<double, 2> PExactSolution::system_residual() const {
    if (critical) return {0.0, 0.0};
    const PSystem sys{data.a, data.b, data.A, data.B, data.Aprime, data.Bprime,
                      p, static_cast<double>(p) / (p - 1)};
    const auto f = sys.residual(lambda, mu);
    const auto s = sys.residual_scale(lambda, mu);
    return {f[0] / s[0], f[1] / s[1]};
}

double PExactSolution::boundary_residual() const {
    const double scale = data.value_scale();
    return std::max(std::fabs(value(data.b) - data.B), std::fabs(derivative(data.b) - data.Bprime)) / scale;
}

PExactSolution p_exact_solution(const HermiteData1D& d, int p, const PExactOptions& opts) {
    d.validate();
    if (p < 2 || p % 2 != 0)
        throw std::invalid_argument("p_exact_solution: p must be an even integer >= 2");

    PExactSolution sol;
    sol.p = p;
    sol.data = d;
    if (is_critical_data(d)) {
        sol.critical = true;
        return sol;
    }

    // p = 2: u'' is the affine second derivative of the cubic interpolant,
    // which reads off (lambda, mu) directly.
    const auto cubic = cubic_hermite(d);
    double lambda = 6.0 * cubic[3];
    double mu = 2.0 * cubic[2];
    if (lambda == 0.0)
        throw std::runtime_error("p_exact_solution: degenerate start, data is near-critical");

    // Continuation through even exponents. Between stages the warm start
    // preserves the endpoint curvature values z = (lambda x + mu)^{1/(pk-1)}:
    // lambda_new = (z_b^{pn-1} - z_a^{pn-1})/(b-a).
    for (int pk = 4; pk <= p; pk += 2) {
        const double za = odd_pow(lambda * d.a + mu, 1.0 / (pk - 3));
        const double zb = odd_pow(lambda * d.b + mu, 1.0 / (pk - 3));
        const double ra = odd_pow(za, static_cast<double>(pk - 1));
        const double rb = odd_pow(zb, static_cast<double>(pk - 1));
        double lam_k = (rb - ra) / (d.b - d.a);
        double mu_k = ra - lam_k * d.a;
        if (lam_k == 0.0) lam_k = lambda;  // fallback, keeps Newton well-posed
        const PSystem sys{d.a, d.b, d.A, d.B, d.Aprime, d.Bprime,
                          pk, static_cast<double>(pk) / (pk - 1)};
        newton_solve(sys, lam_k, mu_k, opts);
        lambda = lam_k;
        mu = mu_k;
    }
    if (p == 2) {
        // The direct formula is already exact; still run one Newton pass so
        // the reported residual reflects the same code path.
        const PSystem sys{d.a, d.b, d.A, d.B, d.Aprime, d.Bprime, 2, 2.0};
        newton_solve(sys, lambda, mu, opts);
    }
    sol.lambda = lambda;
    sol.mu = mu;
    return sol;
}

// ---------------------------------------------------------------------------
// Fixed-energy-level solutions
// ---------------------------------------------------------------------------

FeasibleLevel feasible_level(const HermiteData1D& d, double C) {
    d.validate();
    if (!(C > 0.0)) throw std::invalid_argument("feasible_level: C must be positive");
    const double w = d.b - d.a;
    const double D = d.Bprime - d.Aprime;
    const double M = d.B - d.A - d.Aprime * w;
    const double rhs = w * w / 4.0;
    FeasibleLevel out;
    // y_C <= b  and  a <= x_C, as containment margins of the +C interval.
    out.margin_right = (D * D / (4.0 * C) + D * w / 2.0 - M) / C - rhs;
    out.margin_left = (D * D / (4.0 * C) - D * w / 2.0 + M) / C - rhs;
    out.feasible = out.margin_right <= 0.0 && out.margin_left <= 0.0;
    return out;
}

CriticalPointSolution critical_point_solution(const HermiteData1D& d, double C) {
    const FeasibleLevel f = feasible_level(d, C);
    if (!f.feasible) {
        std::ostringstream os;
        os << "critical_point_solution: infeasible level C = " << C
           << " (margins " << f.margin_right << ", " << f.margin_left << ")";
        throw std::invalid_argument(os.str());
    }
    const double w = d.b - d.a;
    const double K = (2.0 * (d.B - d.A - d.Aprime * w) + C * w * w) / (2.0 * C);
    const double L = (d.Bprime - d.Aprime + C * w) / (2.0 * C);
    const double xc = (-K - L * L + 2.0 * d.b * L) / (2.0 * L);
    const double yc = (-K + L * L + 2.0 * d.b * L) / (2.0 * L);

    std::vector<double> breaks;
    std::vector<double> curvatures;
    // Degenerate touches x_C = a or y_C = b collapse the outer pieces.
    if (xc > d.a + 1e-14 * w) {
        breaks.push_back(xc);
        curvatures.push_back(-C);
    }
    curvatures.push_back(C);
    if (yc < d.b - 1e-14 * w) {
        breaks.push_back(yc);
        curvatures.push_back(-C);
    }
    return CriticalPointSolution{
        C, xc, yc, K, L,
        PiecewiseQuadratic::from_curvatures(d.a, d.b, d.A, d.Aprime, breaks, curvatures)};
}

}  // namespace linfty::exact1d
