// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"
#include "linfty/residuals.hpp"
#include "linfty/solver1d.hpp"
#include "linfty/solver2d.hpp"
#include "linfty/verify.hpp"

using namespace linfty;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    std::string name;
    double time_budget_s;
    std::function<std::pair<bool, std::string>()> run;
};

void run_criterion(int index, const Criterion& c) {
    const auto t0 = Clock::now();
    bool ok = false;
    std::string detail;
    try {
        std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > c.time_budget_s) {
        ok = false;
        detail += " [over time budget]";
    }
    std::printf("%s criterion-%d %s: %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL",
                index, c.name.c_str(), detail.c_str(), secs, c.time_budget_s);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Polynomial fixture with exact derivative chains, used for the random-jet
// identity checks.
struct Poly {
    int n = 1;
    double c[5][5] = {};

    double eval(const std::vector<double>& x) const {
        const double y = n == 2 ? x[1] : 0.0;
        double r = 0.0;
        for (int i = 4; i >= 0; --i) {
            double row = 0.0;
            for (int j = 4; j >= 0; --j) row = row * y + c[i][j];
            r = r * x[0] + row;
        }
        return r;
    }
    Poly dx() const {
        Poly p;
        p.n = n;
        for (int i = 1; i < 5; ++i)
            for (int j = 0; j < 5; ++j) p.c[i - 1][j] = i * c[i][j];
        return p;
    }
    Poly dy() const {
        Poly p;
        p.n = n;
        for (int i = 0; i < 5; ++i)
            for (int j = 1; j < 5; ++j) p.c[i][j - 1] = j * c[i][j];
        return p;
    }
};

residuals::DerivativeSource poly_source(const Poly& u) {
    const int n = u.n;
    const Poly ux = u.dx(), uy = u.dy();
    const Poly uxx = ux.dx(), uxy = ux.dy(), uyy = uy.dy();
    const Poly uxxx = uxx.dx(), uxxy = uxx.dy(), uxyy = uxy.dy(), uyyy = uyy.dy();
    return residuals::DerivativeSource::analytic_with_jets(
        n, [u](const std::vector<double>& x) { return u.eval(x); },
        [n, uxx, uxy, uyy](const std::vector<double>& x) {
            if (n == 1) return std::vector<double>{uxx.eval(x)};
            const double a = uxx.eval(x), b = uxy.eval(x), d = uyy.eval(x);
            return std::vector<double>{a, b, b, d};
        },
        [n, uxxx, uxxy, uxyy, uyyy](const std::vector<double>& x) {
            if (n == 1) return std::vector<double>{uxxx.eval(x)};
            std::vector<double> t(8);
            const double t001 = uxxy.eval(x), t011 = uxyy.eval(x);
            t[0] = uxxx.eval(x);
            t[1] = t[2] = t[4] = t001;
            t[3] = t[5] = t[6] = t011;
            t[7] = uyyy.eval(x);
            return t;
        },
        1e-5);
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> exact_absolute_minimiser() {
    const auto d = test1_data();
    const EnergySpec sq = square_energy_1d();
    const auto am = exact1d::absolute_minimiser(d, sq);
    const double err = std::max({std::fabs(am.left_curvature + 8.0 / 15.0),
                                 std::fabs(am.right_curvature - 8.0 / 15.0),
                                 std::fabs(am.xi.value_or(-1.0) - 0.5)});
    const auto bf = verify::brute_force_minimiser(d, sq, 1e-4);
    const double bf_err = std::max(std::fabs(bf.R - am.right_curvature),
                                   std::fabs(bf.L - am.left_curvature));
    const bool ok = err <= 1e-10 && bf_err <= 1e-3;
    return {ok, "closed-form error " + fmt(err) + " <= 1e-10, oracle gap " + fmt(bf_err) +
                    " <= 1e-3"};
}

std::pair<bool, std::string> critical_point_solution_criterion() {
    const auto d = test1_data();
    const auto cps = exact1d::critical_point_solution(d, 1.0);
    const double endpoint_err = std::max(std::fabs(cps.xc - 23.0 / 60.0),
                                         std::fabs(cps.yc - 53.0 / 60.0));
    const double boundary_err = std::max(std::fabs(cps.u.value(1.0) - d.B),
                                         std::fabs(cps.u.derivative(1.0) - d.Bprime));
    const auto lc = residuals::dsolution_levelcheck(cps.u, square_energy_1d(), 1e-9);
    const bool ok = endpoint_err <= 1e-10 && boundary_err <= 1e-9 && lc.passes &&
                    std::fabs(lc.level - 1.0) <= 1e-12 && lc.max_deviation <= 1e-12;
    return {ok, "endpoints " + fmt(endpoint_err) + " <= 1e-10, boundary " + fmt(boundary_err) +
                    " <= 1e-9, level " + fmt(lc.level) + ", deviation " + fmt(lc.max_deviation)};
}

std::pair<bool, std::string> p_exact_criterion(int p) {
    const auto sol = exact1d::p_exact_solution(test1_data(), p);
    const auto res = sol.system_residual();
    const double sys = std::max(std::fabs(res[0]), std::fabs(res[1]));
    const double bdy = sol.boundary_residual();
    const double sym = std::fabs(sol.mu + 0.5 * sol.lambda);
    const bool ok = sys <= 1e-10 && bdy <= 1e-9 && sym <= 1e-9;
    return {ok, "system residual " + fmt(sys) + " <= 1e-10, boundary " + fmt(bdy) +
                    " <= 1e-9, symmetry " + fmt(sym) + " <= 1e-9"};
}

std::pair<bool, std::string> solver_cross_validation() {
    const auto d = test1_data();
    const auto exact = exact1d::p_exact_solution(d, 4);
    std::vector<double> errs;
    for (int m : {64, 128, 256}) {
        const solver1d::Mesh1D mesh{d.a, d.b, m};
        const auto r = solver1d::solve_p_1d(d, 4, mesh);
        if (!r.report.converged)
            return {false, "solver did not converge at m=" + std::to_string(m)};
        double sup = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double x = mesh.node(i);
            sup = std::max(sup, std::fabs(r.state.values[i] - exact.value(x)));
        }
        errs.push_back(sup);
    }
    const double r1 = errs[0] / errs[1];
    const double r2 = errs[1] / errs[2];
    const bool ok = r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0;
    return {ok, "node-sup errors " + fmt(errs[0]) + " -> " + fmt(errs[1]) + " -> " +
                    fmt(errs[2]) + ", ratios " + fmt(r1) + ", " + fmt(r2) + " in [3,5]"};
}

std::pair<bool, std::string> flattening_1d() {
    const auto d = test1_data();
    solver1d::ContinuationSchedule sched;
    sched.exponents = {2, 4, 12, 42, 202};
    const auto stages = solver1d::p_continuation(d, sched, solver1d::Mesh1D{d.a, d.b, 256});
    if (stages.size() != 5 || !stages.back().report.converged)
        return {false, "continuation incomplete"};
    const auto d2 = stages.back().state.second_derivative_field();
    const auto breaks = solver1d::detect_breaks(d2);
    if (breaks.size() != 1)
        return {false, "expected one break, found " + std::to_string(breaks.size())};
    const double target = 8.0 / 15.0;
    const double loc_err = std::fabs(breaks[0].location - 0.5);
    const double left_rel = std::fabs(breaks[0].left_value + target) / target;
    const double right_rel = std::fabs(breaks[0].right_value - target) / target;
    const bool ok = loc_err <= 0.02 && left_rel <= 0.10 && right_rel <= 0.10;
    return {ok, "break at " + fmt(breaks[0].location) + " (|dx| " + fmt(loc_err) +
                    " <= 0.02), plateau offsets " + fmt(left_rel) + ", " + fmt(right_rel) +
                    " <= 0.10"};
}

std::pair<bool, std::string> residual_identities() {
    std::mt19937 gen(318u);
    std::uniform_real_distribution<double> coeff(-0.3, 0.3);
    std::uniform_real_distribution<double> pos(-0.5, 0.5);

    struct Variant {
        int n;
        EnergySpec spec;
    };
    std::vector<Variant> variants{{1, square_energy_1d()},
                                  {1, make_full_hessian_sq()},
                                  {2, make_full_hessian_sq()},
                                  {1, make_projection_sq(1, {1.4})},
                                  {2, make_projection_sq(2, {1.1, 0.2, 0.2, 0.8})}};
    double worst = 0.0;
    for (const auto& v : variants)
        for (int trial = 0; trial < 100; ++trial) {
            Poly u;
            u.n = v.n;
            for (int i = 0; i <= 4; ++i)
                for (int j = 0; j <= (v.n == 2 ? 4 - i : 0); ++j) u.c[i][j] = coeff(gen);
            const auto src = poly_source(u);
            std::vector<double> x(static_cast<std::size_t>(v.n));
            for (double& t : x) t = pos(gen);
            const double expanded = residuals::residual_a2inf(src.jet(x), v.spec);
            const double contracted = residuals::residual_contracted(src, x, v.spec);
            worst = std::max(worst,
                             std::fabs(expanded - contracted) / (1.0 + std::fabs(expanded)));
        }
    if (worst > 1e-6) return {false, "expanded/contracted gap " + fmt(worst) + " > 1e-6"};

    // Quadratics give exactly zero.
    double qworst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Poly u;
        u.n = 2;
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; j <= 2 - i; ++j) u.c[i][j] = coeff(gen);
        const auto src = poly_source(u);
        qworst = std::max(qworst, std::fabs(residuals::residual_a2inf(
                                      src.jet({pos(gen), pos(gen)}), make_full_hessian_sq())));
    }
    if (qworst != 0.0) return {false, "quadratic residual " + fmt(qworst) + " != 0"};

    // Off-axis saddle points annihilate the hessian-power operator.
    const auto saddle = verify::aronsson_saddle();
    const EnergySpec full = make_full_hessian_sq();
    std::uniform_real_distribution<double> axis(0.3, 1.7);
    double sworst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> x{axis(gen), axis(gen)};
        const auto jet = saddle.jet(x);
        const auto M = residuals::hx_of_hessian(full, 2, jet.hessian);
        double mnorm = 0.0, tnorm = 0.0;
        for (double v : M) mnorm += v * v;
        for (double v : jet.third) tnorm += v * v;
        const double scale = std::pow(std::sqrt(mnorm), 3.0) * tnorm;
        sworst = std::max(sworst, std::fabs(residuals::residual_a2inf(jet, full)) / scale);
    }
    if (sworst > 1e-4) return {false, "saddle residual " + fmt(sworst) + " > 1e-4 * scale"};
    return {true, "identity gap " + fmt(worst) + " <= 1e-6, quadratics exact, saddle " +
                      fmt(sworst) + " <= 1e-4"};
}

std::pair<bool, std::string> flow_identity() {
    Poly quartic;
    quartic.n = 1;
    quartic.c[4][0] = 1.0 / 12.0;
    const auto src = poly_source(quartic);
    const EnergySpec sq = square_energy_1d();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = 0.4 + 1.1 * i / 19.0;
        const auto fi = residuals::flow_identity_residual(src, {x}, sq);
        worst = std::max(worst, std::fabs(fi.lhs - fi.rhs) / (1.0 + std::fabs(fi.rhs)));
    }
    if (worst > 1e-5) return {false, "quartic agreement " + fmt(worst) + " > 1e-5"};

    // Quadratic: the expanded residual vanishes identically and the field V
    // is zero, which the flow check reports as a critical point.
    Poly quad;
    quad.n = 1;
    quad.c[2][0] = 0.5;
    const auto qsrc = poly_source(quad);
    if (residuals::residual_a2inf(qsrc.jet({0.3}), sq) != 0.0)
        return {false, "quadratic residual nonzero"};
    bool critical = false;
    try {
        residuals::flow_identity_residual(qsrc, {0.3}, sq);
    } catch (const std::domain_error&) {
        critical = true;
    }
    if (!critical) return {false, "quadratic not reported as critical"};
    return {true, "quartic agreement " + fmt(worst) + " <= 1e-5, quadratics vanish"};
}

std::pair<bool, std::string> experiment_2d() {
    const auto g = solver2d::test2_data();
    const solver2d::Grid2D grid{65};
    std::vector<double> covs;
    solver2d::InterfaceMetrics last;
    const ScalarField* init = nullptr;
    std::optional<ScalarField> keep;
    for (int p : {4, 12, 42}) {
        const auto r = solver2d::solve_p_2d(g, p, grid, init, {});
        if (!r.report.converged) return {false, "2D solve failed at p=" + std::to_string(p)};
        last = solver2d::interface_metrics(solver2d::laplacian_field(r.u));
        covs.push_back(last.cov);
        keep = r.u;
        init = &*keep;
    }
    const bool monotone = covs[1] <= covs[0] * 1.10 && covs[2] <= covs[1] * 1.10 &&
                          covs[2] < covs[0];
    const double balance = std::fabs(last.positive_median + last.negative_median);
    const bool ok = monotone && last.region_count >= 2 && balance <= 0.1 * last.level;
    return {ok, "cov " + fmt(covs[0]) + " -> " + fmt(covs[1]) + " -> " + fmt(covs[2]) +
                    ", regions " + std::to_string(last.region_count) + " >= 2, phase balance " +
                    fmt(balance) + " <= " + fmt(0.1 * last.level)};
}

std::pair<bool, std::string> energy_limit() {
    const auto d = test1_data();
    const EnergySpec sq = square_energy_1d();
    const auto am = exact1d::absolute_minimiser(d, sq);
    const auto cps = exact1d::critical_point_solution(d, 1.0);
    const int n = 801;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        vals[i] = x * x * x;
    }
    const auto field = ScalarField::make_1d(n, 1.0 / (n - 1), 0.0, vals);

    double worst_monotone = 0.0, worst_bound = 0.0, worst_gap_growth = -1e300;
    auto check_one = [&](const std::function<double(double)>& lp, double sup) {
        double prev = -1e300, first_gap = 0.0, last_gap = 0.0;
        bool first = true;
        for (double p : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0}) {
            const double e = lp(p);
            if (!first) worst_monotone = std::max(worst_monotone, prev - e);
            worst_bound = std::max(worst_bound, e - sup);
            if (first) first_gap = sup - e;
            last_gap = sup - e;
            prev = e;
            first = false;
        }
        worst_gap_growth = std::max(worst_gap_growth, last_gap - first_gap);
    };
    check_one([&](double p) { return residuals::energy_lp(am.u, sq, p); },
              residuals::energy_sup(am.u, sq));
    check_one([&](double p) { return residuals::energy_lp(cps.u, sq, p); },
              residuals::energy_sup(cps.u, sq));
    check_one([&](double p) { return residuals::energy_lp(field, sq, p); },
              residuals::energy_sup(field, sq));
    const bool ok = worst_monotone <= 1e-3 && worst_bound <= 1e-3 && worst_gap_growth <= 1e-12;
    return {ok, "monotonicity slack " + fmt(worst_monotone) + " <= 1e-3, sup bound slack " +
                    fmt(worst_bound) + " <= 1e-3, gap growth " + fmt(worst_gap_growth)};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, {"exact-absolute-minimiser", 1.0, exact_absolute_minimiser});
    run_criterion(2, {"critical-point-solution", 1.0, critical_point_solution_criterion});
    run_criterion(3, {"p-exact-p4", 1.0, [] { return p_exact_criterion(4); }});
    run_criterion(3, {"p-exact-p12", 1.0, [] { return p_exact_criterion(12); }});
    run_criterion(3, {"p-exact-p42", 1.0, [] { return p_exact_criterion(42); }});
    run_criterion(4, {"solver-exact-cross-validation", 30.0, solver_cross_validation});
    run_criterion(5, {"p-limit-flattening-1d", 300.0, flattening_1d});
    run_criterion(6, {"residual-identities", 10.0, residual_identities});
    run_criterion(7, {"flow-identity", 5.0, flow_identity});
    run_criterion(8, {"experiment-2d", 900.0, experiment_2d});
    run_criterion(9, {"energy-limit", 5.0, energy_limit});

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
