#include "linfty/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "linfty/exact1d.hpp"
#include "linfty/solver2d.hpp"

namespace linfty::verify {

using residuals::DerivativeSource;
using residuals::JetSample;

EnergySpec asymmetric_energy_1d() {
    return make_custom1d(
        [](double t) { return t >= 0.0 ? t * t : 4.0 * t * t; },
        [](double t) { return t >= 0.0 ? 2.0 * t : 8.0 * t; },
        [](double t) { return -0.5 * std::sqrt(t); },
        [](double t) { return std::sqrt(t); });
}

DerivativeSource aronsson_saddle() {
    auto f = [](double t) { return std::pow(std::fabs(t), 12.0 / 5.0); };
    auto f2 = [](double t) { return (84.0 / 25.0) * std::pow(std::fabs(t), 2.0 / 5.0); };
    auto f3 = [](double t) {
        const double s = t >= 0.0 ? 1.0 : -1.0;
        return (168.0 / 125.0) * s * std::pow(std::fabs(t), -3.0 / 5.0);
    };
    return DerivativeSource::analytic_with_jets(
        2,
        [f](const std::vector<double>& x) { return f(x[0]) - f(x[1]); },
        [f2](const std::vector<double>& x) {
            return std::vector<double>{f2(x[0]), 0.0, 0.0, -f2(x[1])};
        },
        [f3](const std::vector<double>& x) {
            std::vector<double> t(8, 0.0);
            t[0] = f3(x[0]);   // (0,0,0)
            t[7] = -f3(x[1]);  // (1,1,1)
            return t;
        },
        1e-5);
}

double six_index_contraction(const JetSample& jet, const std::vector<double>& M) {
    const int n = jet.n;
    if (M.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("six_index_contraction: matrix size mismatch");
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            r += M[static_cast<std::size_t>(i) * n + j] *
                                 M[static_cast<std::size_t>(k) * n + l] *
                                 M[static_cast<std::size_t>(p) * n + q] *
                                 jet.d3(i, k, l) * jet.d3(j, p, q);
    return r;
}

BruteForcePair brute_force_minimiser(const HermiteData1D& d, const EnergySpec& spec,
                                     double resolution) {
    d.validate();
    const double defect = hermite_defect(d);
    if (std::fabs(defect) == 0.0)
        throw std::invalid_argument("brute_force_minimiser: zero-defect data has no breakpoint");
    const auto h = exact1d::hyperbola_constants(d);
    const double rhs = h.c1 * h.c2 - h.c0 * h.c0;
    const double span = 20.0 * (std::fabs(h.c0) + std::fabs(h.c1) + std::fabs(h.c2) +
                                std::fabs(defect) + 1.0);
    const double dir = defect > 0.0 ? 1.0 : -1.0;  // R >= c1 branch vs R <= c1

    BruteForcePair best;
    bool found = false;
    const long steps = static_cast<long>(span / resolution);
    for (long k = 1; k <= steps; ++k) {
        const double R = h.c1 + dir * resolution * static_cast<double>(k);
        const double L = h.c2 + rhs / (R - h.c1);
        if (!(L * R < 0.0)) continue;
        // Matching point inside (a, b): L < c0 < R on this branch (mirrored
        // when the defect is negative).
        if (defect > 0.0 ? !(L < h.c0 && h.c0 < R) : !(R < h.c0 && h.c0 < L)) continue;
        const double energy = std::max(h_curvature(spec, L), h_curvature(spec, R));
        if (!found || energy < best.energy) {
            best = BruteForcePair{R, L, exact1d::matching_point(R, L, d), energy};
            found = true;
        } else if (found && h_curvature(spec, R) > best.energy) {
            break;  // H(R) alone already exceeds the best level and keeps growing
        }
    }
    if (!found) throw std::runtime_error("brute_force_minimiser: no admissible pair on the grid");
    return best;
}

// ---------------------------------------------------------------------------
// Polynomial fixtures
// ---------------------------------------------------------------------------

namespace {

// Dense bivariate polynomial of degree <= 6 (1D uses y-degree 0).
struct Poly {
    int n = 1;
    double c[7][7] = {};

    double eval(const std::vector<double>& x) const {
        const double y = n == 2 ? x[1] : 0.0;
        double r = 0.0;
        for (int i = 6; i >= 0; --i) {
            double row = 0.0;
            for (int j = 6; j >= 0; --j) row = row * y + c[i][j];
            r = r * x[0] + row;
        }
        return r;
    }

    Poly dx() const {
        Poly p;
        p.n = n;
        for (int i = 1; i < 7; ++i)
            for (int j = 0; j < 7; ++j) p.c[i - 1][j] = i * c[i][j];
        return p;
    }

    Poly dy() const {
        Poly p;
        p.n = n;
        for (int i = 0; i < 7; ++i)
            for (int j = 1; j < 7; ++j) p.c[i][j - 1] = j * c[i][j];
        return p;
    }
};

DerivativeSource poly_source(const Poly& u, double fd_step = 1e-5) {
    const int n = u.n;
    const Poly ux = u.dx();
    const Poly uy = u.dy();
    const Poly uxx = ux.dx(), uxy = ux.dy(), uyy = uy.dy();
    const Poly uxxx = uxx.dx(), uxxy = uxx.dy(), uxyy = uxy.dy(), uyyy = uyy.dy();
    auto hess = [n, uxx, uxy, uyy](const std::vector<double>& x) {
        if (n == 1) return std::vector<double>{uxx.eval(x)};
        const double a = uxx.eval(x), b = uxy.eval(x), d = uyy.eval(x);
        return std::vector<double>{a, b, b, d};
    };
    auto third = [n, uxxx, uxxy, uxyy, uyyy](const std::vector<double>& x) {
        if (n == 1) return std::vector<double>{uxxx.eval(x)};
        std::vector<double> t(8);
        const double t000 = uxxx.eval(x), t001 = uxxy.eval(x);
        const double t011 = uxyy.eval(x), t111 = uyyy.eval(x);
        t[0] = t000;
        t[1] = t[2] = t[4] = t001;
        t[3] = t[5] = t[6] = t011;
        t[7] = t111;
        return t;
    };
    return DerivativeSource::analytic_with_jets(
        n, [u](const std::vector<double>& x) { return u.eval(x); }, hess, third, fd_step);
}

Poly random_poly(std::mt19937& gen, int n, int degree) {
    std::uniform_real_distribution<double> coeff(-0.3, 0.3);
    Poly p;
    p.n = n;
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; j <= (n == 2 ? degree - i : 0); ++j) p.c[i][j] = coeff(gen);
    return p;
}

std::vector<double> random_point(std::mt19937& gen, int n) {
    std::uniform_real_distribution<double> pos(-0.5, 0.5);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = pos(gen);
    return x;
}

CheckResult check(std::string name, double measured, double threshold, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = threshold;
    c.passed = measured <= threshold;
    c.detail = std::move(detail);
    return c;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteReport residual_identities_suite() {
    SuiteReport rep;
    rep.suite = "residual-identities";
    std::mt19937 gen(20240811u);

    struct Variant {
        std::string name;
        int n;
        EnergySpec spec;
    };
    std::vector<Variant> variants;
    variants.push_back({"full-hessian-1d", 1, make_full_hessian_sq()});
    variants.push_back({"full-hessian-2d", 2, make_full_hessian_sq()});
    variants.push_back({"projection-1d", 1, make_projection_sq(1, {1.5})});
    variants.push_back({"projection-2d", 2, make_projection_sq(2, {1.2, 0.3, 0.3, 0.9})});
    variants.push_back({"custom-square-1d", 1, square_energy_1d()});
    variants.push_back({"custom-asymmetric-1d", 1, asymmetric_energy_1d()});

    for (const auto& v : variants) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Poly u = random_poly(gen, v.n, 4);
            const DerivativeSource src = poly_source(u);
            const std::vector<double> x = random_point(gen, v.n);
            const double expanded = residuals::residual_a2inf(src.jet(x), v.spec);
            const double contracted = residuals::residual_contracted(src, x, v.spec);
            worst = std::max(worst, std::fabs(expanded - contracted) / (1.0 + std::fabs(expanded)));
        }
        rep.checks.push_back(check("expanded-vs-contracted/" + v.name, worst, 1e-6));
    }

    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            for (int n : {1, 2}) {
                const Poly u = random_poly(gen, n, 2);
                const DerivativeSource src = poly_source(u);
                const std::vector<double> x = random_point(gen, n);
                worst = std::max(worst,
                                 std::fabs(residuals::residual_a2inf(src.jet(x), make_full_hessian_sq())));
            }
        }
        rep.checks.push_back(check("quadratic-residual-zero", worst, 0.0));
    }

    {
        // Full-hessian residual vs. eight times the plain hessian-power
        // contraction, and the A = I projection vs. the Laplacian form.
        double worst_pi = 0.0, worst_delta = 0.0;
        const EnergySpec full = make_full_hessian_sq();
        const EnergySpec proj_id = make_projection_sq(2, {1.0, 0.0, 0.0, 1.0});
        for (int trial = 0; trial < 50; ++trial) {
            const Poly u = random_poly(gen, 2, 4);
            const DerivativeSource src = poly_source(u);
            const std::vector<double> x = random_point(gen, 2);
            const JetSample jet = src.jet(x);

            const double r_full = residuals::residual_a2inf(jet, full);
            const double pi_loop = six_index_contraction(jet, jet.hessian);
            worst_pi = std::max(worst_pi,
                                std::fabs(r_full - 8.0 * pi_loop) / (1.0 + std::fabs(r_full)));

            const double r_proj = residuals::residual_a2inf(jet, proj_id);
            const double trace = jet.hess(0, 0) + jet.hess(1, 1);
            const std::vector<double> lap_matrix{trace, 0.0, 0.0, trace};
            const double delta_loop = six_index_contraction(jet, lap_matrix);
            worst_delta = std::max(worst_delta, std::fabs(r_proj - 8.0 * delta_loop) /
                                                     (1.0 + std::fabs(r_proj)));
        }
        rep.checks.push_back(check("polylaplacian-factor-eight", worst_pi, 1e-12));
        rep.checks.push_back(check("bilaplacian-factor-eight", worst_delta, 1e-12));
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> noise(-1e-12, 1e-12);
        for (int trial = 0; trial < 20; ++trial) {
            const Poly u = random_poly(gen, 2, 4);
            const DerivativeSource src = poly_source(u);
            const std::vector<double> x = random_point(gen, 2);
            JetSample jet = src.jet(x);
            const double r0 = residuals::residual_a2inf(jet, make_full_hessian_sq());
            for (double& t : jet.third) t += noise(gen);
            // Re-symmetrise so the perturbed jet stays a valid sample.
            JetSample sym = jet;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) {
                        const double avg = (jet.d3(i, j, k) + jet.d3(i, k, j) + jet.d3(j, i, k) +
                                            jet.d3(j, k, i) + jet.d3(k, i, j) + jet.d3(k, j, i)) / 6.0;
                        sym.third[(static_cast<std::size_t>(i) * 2 + j) * 2 + k] = avg;
                    }
            const double r1 = residuals::residual_a2inf(sym, make_full_hessian_sq());
            worst = std::max(worst, std::fabs(r1 - r0) / (1.0 + std::fabs(r0)));
        }
        rep.checks.push_back(check("jet-symmetrisation-noise", worst, 1e-6));
    }

    {
        // Hessian stencils are second order: quartic test function, error
        // ratio between steps h and h/2 should sit near 4.
        auto make_field = [](int npts, double h) {
            std::vector<double> vals(static_cast<std::size_t>(npts));
            const double x0 = 1.0 - h * (npts / 2);
            for (int i = 0; i < npts; ++i) {
                const double x = x0 + i * h;
                vals[i] = x * x * x * x;
            }
            return ScalarField::make_1d(npts, h, x0, vals);
        };
        const double exact = 12.0;  // (x^4)'' at x = 1
        const double h = 1e-2;
        const auto coarse = DerivativeSource::sampled(make_field(9, h));
        const auto fine = DerivativeSource::sampled(make_field(17, h / 2));
        const double e1 = std::fabs(coarse.jet({1.0}).hess(0, 0) - exact);
        const double e2 = std::fabs(fine.jet({1.0}).hess(0, 0) - exact);
        const double ratio = e1 / e2;
        rep.checks.push_back(check("fd-second-order-ratio", std::fabs(ratio - 4.0), 0.5));
    }

    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
    return rep;
}

SuiteReport exact1d_oracle_suite() {
    SuiteReport rep;
    rep.suite = "exact1d-oracle";
    const HermiteData1D d = test1_data();
    const EnergySpec sq = square_energy_1d();

    {
        const auto am = exact1d::absolute_minimiser(d, sq);
        const double err = std::max({std::fabs(am.right_curvature - 8.0 / 15.0),
                                     std::fabs(am.left_curvature + 8.0 / 15.0),
                                     std::fabs(am.xi.value() - 0.5)});
        rep.checks.push_back(check("test1-square-closed-form", err, 1e-10));
        const auto bf = brute_force_minimiser(d, sq, 1e-4);
        rep.checks.push_back(check("test1-square-brute-force",
                                   std::max(std::fabs(bf.R - am.right_curvature),
                                            std::fabs(bf.L - am.left_curvature)),
                                   1e-3));
    }
    {
        const EnergySpec asym = asymmetric_energy_1d();
        const auto am = exact1d::absolute_minimiser(d, asym);
        const double err = std::max({std::fabs(am.right_curvature - 0.8),
                                     std::fabs(am.left_curvature + 0.4),
                                     std::fabs(am.xi.value() - 2.0 / 3.0)});
        rep.checks.push_back(check("test1-asymmetric-level-curve", err, 1e-8));
        const auto bf = brute_force_minimiser(d, asym, 1e-4);
        rep.checks.push_back(check("test1-asymmetric-brute-force",
                                   std::max(std::fabs(bf.R - am.right_curvature),
                                            std::fabs(bf.L - am.left_curvature)),
                                   1e-3));
    }
    {
        // Reflecting the data flips the defect sign and the curvature pair.
        const HermiteData1D neg{0.0, 1.0, -d.A, -d.B, -d.Aprime, -d.Bprime};
        const auto am = exact1d::absolute_minimiser(neg, sq);
        const double err = std::max({std::fabs(am.right_curvature + 8.0 / 15.0),
                                     std::fabs(am.left_curvature - 8.0 / 15.0),
                                     std::fabs(am.xi.value() - 0.5)});
        rep.checks.push_back(check("negative-defect-mirror", err, 1e-10));
    }
    for (int p : {4, 12, 42}) {
        const auto sol = exact1d::p_exact_solution(d, p);
        double scale = 0.0, worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            scale = std::max(scale, std::fabs(sol.lambda * x + sol.mu));
        }
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            const double u2 = sol.second(x);
            const double flux = std::pow(std::fabs(u2), p - 2) * u2;
            worst = std::max(worst, std::fabs(flux - (sol.lambda * x + sol.mu)));
        }
        rep.checks.push_back(
            check("p" + std::to_string(p) + "-flux-affine", worst, 1e-9 * scale));
        rep.checks.push_back(
            check("p" + std::to_string(p) + "-boundary", sol.boundary_residual(), 1e-9));
        rep.checks.push_back(check("p" + std::to_string(p) + "-antisymmetry",
                                   std::fabs(sol.mu + 0.5 * sol.lambda), 1e-9 * std::fabs(sol.lambda)));
    }
    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
    return rep;
}

SuiteReport dsolution_suite() {
    SuiteReport rep;
    rep.suite = "dsolution";
    const HermiteData1D d = test1_data();
    const EnergySpec sq = square_energy_1d();

    {
        const auto cps = exact1d::critical_point_solution(d, 1.0);
        const auto lc = residuals::dsolution_levelcheck(cps.u, sq, 1e-9);
        rep.checks.push_back(check("critical-point-passes", lc.passes ? 0.0 : 1.0, 0.0,
                                   "sign pattern " + lc.sign_pattern));
        rep.checks.push_back(check("critical-point-level", std::fabs(lc.level - 1.0), 1e-12));
        rep.checks.push_back(check("critical-point-deviation", lc.max_deviation, 1e-12));
    }
    {
        const auto am = exact1d::absolute_minimiser(d, sq);
        const auto lc = residuals::dsolution_levelcheck(am.u, sq, 1e-9);
        rep.checks.push_back(check("absolute-minimiser-passes", lc.passes ? 0.0 : 1.0, 0.0));
        rep.checks.push_back(
            check("absolute-minimiser-level", std::fabs(lc.level - 64.0 / 225.0), 1e-12));
    }
    {
        const int n = 201;
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            const double x = i / 200.0;
            vals[i] = x * x * x;
        }
        const auto field = ScalarField::make_1d(n, 1.0 / 200.0, 0.0, vals);
        const auto lc = residuals::dsolution_levelcheck(field, sq, 1e-6);
        rep.checks.push_back(check("cubic-fails", lc.passes ? 1.0 : 0.0, 0.0,
                                   "non-constant H must be rejected"));
    }
    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
    return rep;
}

SuiteReport energy_limit_suite() {
    SuiteReport rep;
    rep.suite = "energy-limit";
    const HermiteData1D d = test1_data();
    const EnergySpec sq = square_energy_1d();
    const std::vector<double> ps{1, 2, 4, 8, 16, 32, 64, 128, 256};

    struct Field {
        std::string name;
        std::function<double(double)> lp;
        double sup;
    };
    std::vector<Field> fields;
    {
        const auto am = exact1d::absolute_minimiser(d, sq);
        const PiecewiseQuadratic u = am.u;
        fields.push_back({"absolute-minimiser",
                          [u, sq](double p) { return residuals::energy_lp(u, sq, p); },
                          residuals::energy_sup(u, sq)});
        const auto cps = exact1d::critical_point_solution(d, 1.0);
        const PiecewiseQuadratic v = cps.u;
        fields.push_back({"critical-point",
                          [v, sq](double p) { return residuals::energy_lp(v, sq, p); },
                          residuals::energy_sup(v, sq)});
        const int n = 401;
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            const double x = i / 400.0;
            vals[i] = x * x * x;
        }
        const ScalarField f = ScalarField::make_1d(n, 1.0 / 400.0, 0.0, vals);
        fields.push_back({"cubic-field",
                          [f, sq](double p) { return residuals::energy_lp(f, sq, p); },
                          residuals::energy_sup(f, sq)});
    }

    for (const auto& f : fields) {
        std::vector<double> e;
        for (double p : ps) e.push_back(f.lp(p));
        double worst_monotone = 0.0, worst_bound = 0.0;
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            worst_monotone = std::max(worst_monotone, e[i] - e[i + 1]);
        for (double v : e) worst_bound = std::max(worst_bound, v - f.sup);
        rep.checks.push_back(check(f.name + "/monotone", worst_monotone, 1e-3));
        rep.checks.push_back(check(f.name + "/bounded-by-sup", worst_bound, 1e-3));
        const double gap_first = f.sup - e.front();
        const double gap_last = f.sup - e.back();
        rep.checks.push_back(check(f.name + "/gap-shrinks", gap_last - gap_first, 1e-12));
    }
    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
    return rep;
}

SuiteReport flow_identity_suite() {
    SuiteReport rep;
    rep.suite = "flow-identity";
    const EnergySpec sq = square_energy_1d();

    {
        // u = x^4/12: u'' = x^2, V = 8 x^5, both sides equal 32 x^8.
        Poly u;
        u.n = 1;
        u.c[4][0] = 1.0 / 12.0;
        const DerivativeSource src = poly_source(u, 1e-6);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double x = 0.4 + 1.1 * i / 19.0;
            const auto fi = residuals::flow_identity_residual(src, {x}, sq);
            worst = std::max(worst, std::fabs(fi.lhs - fi.rhs) / (1.0 + std::fabs(fi.rhs)));
        }
        rep.checks.push_back(check("quartic-1d-agreement", worst, 1e-5));
    }
    {
        Poly u;
        u.n = 1;
        u.c[2][0] = 0.5;
        const DerivativeSource src = poly_source(u);
        bool threw = false;
        try {
            residuals::flow_identity_residual(src, {0.3}, sq);
        } catch (const std::domain_error&) {
            threw = true;
        }
        rep.checks.push_back(check("quadratic-critical-point", threw ? 0.0 : 1.0, 0.0,
                                   "V = 0 everywhere; both sides vanish identically"));
    }
    {
        const DerivativeSource src = aronsson_saddle();
        const EnergySpec full = make_full_hessian_sq();
        double worst = 0.0;
        std::mt19937 gen(7u);
        std::uniform_real_distribution<double> pos(0.4, 1.6);
        for (int i = 0; i < 20; ++i) {
            const std::vector<double> x{pos(gen), pos(gen)};
            const auto jet = src.jet(x);
            const auto M = residuals::hx_of_hessian(full, 2, jet.hessian);
            double mnorm = 0.0, tnorm = 0.0;
            for (double v : M) mnorm += v * v;
            for (double v : jet.third) tnorm += v * v;
            const double scale = std::pow(std::sqrt(mnorm), 3.0) * tnorm;
            const auto fi = residuals::flow_identity_residual(src, x, full);
            worst = std::max(worst, std::max(std::fabs(fi.lhs), std::fabs(fi.rhs)) / scale);
        }
        rep.checks.push_back(check("aronsson-off-axis-null", worst, 1e-4));
    }
    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& c) { return c.passed; });
    return rep;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"residual-identities", "exact1d-oracle", "dsolution", "energy-limit", "flow-identity"};
}

SuiteReport run_suite(const std::string& name) {
    if (name == "residual-identities") return residual_identities_suite();
    if (name == "exact1d-oracle") return exact1d_oracle_suite();
    if (name == "dsolution") return dsolution_suite();
    if (name == "energy-limit") return energy_limit_suite();
    if (name == "flow-identity") return flow_identity_suite();
    throw std::invalid_argument("unknown verification suite: " + name);
}

}  // namespace linfty::verify
