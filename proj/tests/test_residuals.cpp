#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"
#include "linfty/residuals.hpp"
#include "linfty/verify.hpp"

using namespace linfty;
using namespace linfty::residuals;

namespace {

DerivativeSource cubic_1d() {
    return DerivativeSource::analytic_with_jets(
        1, [](const std::vector<double>& x) { return x[0] * x[0] * x[0]; },
        [](const std::vector<double>& x) { return std::vector<double>{6.0 * x[0]}; },
        [](const std::vector<double>&) { return std::vector<double>{6.0}; });
}

}  // namespace

TEST_CASE("analytic jet of a paraboloid") {
    auto src = DerivativeSource::analytic(
        2, [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }, 1e-4);
    const auto jet = src.jet({0.3, -0.2});
    CHECK(jet.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(jet.hess(1, 1) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(jet.hess(0, 1) == doctest::Approx(0.0));
    for (double t : jet.third) CHECK(std::fabs(t) < 1e-4);
}

TEST_CASE("sampled third derivative of a cubic") {
    const double h = 1e-3;
    const int n = 11;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = 1.0 + (i - n / 2) * h;
        vals[i] = x * x * x;
    }
    auto src = DerivativeSource::sampled(ScalarField::make_1d(n, h, 1.0 - (n / 2) * h, vals));
    const auto jet = src.jet({1.0});
    CHECK(jet.d3(0, 0, 0) == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(jet.hess(0, 0) == doctest::Approx(6.0).epsilon(1e-6));
    // Boundary margin is enforced.
    CHECK_THROWS_AS(src.jet({1.0 + (n / 2) * h}), std::domain_error);
}

TEST_CASE("saddle power function hessian") {
    auto src = verify::aronsson_saddle();
    const auto jet = src.jet({1.0, 1.0});
    CHECK(jet.hess(0, 0) == doctest::Approx(84.0 / 25.0).epsilon(1e-13));
    CHECK(jet.hess(1, 1) == doctest::Approx(-84.0 / 25.0).epsilon(1e-13));
    // Cross-check against central differences of the value callable. The
    // third-derivative stencil divides by h^3, so it needs a larger step
    // than the hessian stencil.
    auto value = [](const std::vector<double>& x) {
        return std::pow(std::fabs(x[0]), 2.4) - std::pow(std::fabs(x[1]), 2.4);
    };
    const auto jfd = DerivativeSource::analytic(2, value, 1e-5).jet({1.0, 1.0});
    CHECK(jfd.hess(0, 0) == doctest::Approx(84.0 / 25.0).epsilon(1e-6));
    const auto jfd3 = DerivativeSource::analytic(2, value, 1e-3).jet({1.0, 1.0});
    CHECK(jfd3.d3(0, 0, 0) == doctest::Approx(168.0 / 125.0).epsilon(1e-4));
}

TEST_CASE("residual_a2inf closed forms in 1D") {
    // Quadratic: third derivative vanishes, residual is exactly zero.
    auto quad = DerivativeSource::analytic_with_jets(
        1, [](const std::vector<double>& x) { return 0.5 * x[0] * x[0]; },
        [](const std::vector<double>&) { return std::vector<double>{1.0}; },
        [](const std::vector<double>&) { return std::vector<double>{0.0}; });
    CHECK(residual_a2inf(quad.jet({0.4}), make_full_hessian_sq()) == 0.0);

    // u = x^3 with H = t^2: residual is 8 (6x)^3 (6)^2 = 62208 at x = 1.
    const auto jet = cubic_1d().jet({1.0});
    CHECK(residual_a2inf(jet, make_full_hessian_sq()) ==
          doctest::Approx(62208.0).epsilon(1e-13));
    CHECK(residual_a2inf(jet, square_energy_1d()) == doctest::Approx(62208.0).epsilon(1e-13));
    // Direct six-index loop oracle with M = H_X = 2 u''.
    const std::vector<double> M{2.0 * jet.hess(0, 0)};
    CHECK(verify::six_index_contraction(jet, M) == doctest::Approx(62208.0).epsilon(1e-13));
}

TEST_CASE("residual_contracted matches the expanded form") {
    const auto src = cubic_1d();
    // H(u'') = 36 x^2, grad = 72 x, H_X = 12 x: contracted = 12x (72x)^2.
    const double r = residual_contracted(src, {1.0}, square_energy_1d());
    CHECK(r == doctest::Approx(62208.0).epsilon(1e-7));
    const double e = residual_a2inf(src.jet({1.0}), square_energy_1d());
    CHECK(std::fabs(r - e) <= 1e-6 * (1.0 + std::fabs(e)));
}

TEST_CASE("saddle power function annihilates the hessian-power operator") {
    auto src = verify::aronsson_saddle();
    const EnergySpec spec = make_full_hessian_sq();
    for (double x : {0.5, 0.9, 1.3})
        for (double y : {0.6, 1.1}) {
            const auto jet = src.jet({x, y});
            const auto M = hx_of_hessian(spec, 2, jet.hessian);
            double mnorm = 0.0, tnorm = 0.0;
            for (double v : M) mnorm += v * v;
            for (double v : jet.third) tnorm += v * v;
            const double scale = std::pow(std::sqrt(mnorm), 3.0) * tnorm;
            CHECK(std::fabs(residual_a2inf(jet, spec)) < 1e-4 * scale);
        }
}

TEST_CASE("energy_sup and energy_lp closed forms") {
    const EnergySpec sq = square_energy_1d();
    const PiecewiseQuadratic constant(0.0, 1.0, {}, {{0.0, 0.0, 3.0}});
    CHECK(energy_sup(constant, sq) == doctest::Approx(9.0));
    for (double p : {1.0, 2.0, 7.0}) CHECK(energy_lp(constant, sq, p) == doctest::Approx(9.0));

    const auto am = exact1d::absolute_minimiser(test1_data(), sq);
    CHECK(energy_sup(am.u, sq) == doctest::Approx(64.0 / 225.0).epsilon(1e-12));
    for (double p : {1.0, 4.0, 64.0})
        CHECK(energy_lp(am.u, sq, p) == doctest::Approx(64.0 / 225.0).epsilon(1e-12));

    const auto cps = exact1d::critical_point_solution(test1_data(), 1.0);
    CHECK(energy_sup(cps.u, sq) == doctest::Approx(1.0));

    // u = x^3 on (0,1), H = t^2, p = 1: the averaged integral of (6x)^2 is 12.
    const int n = 2001;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        vals[i] = x * x * x;
    }
    const auto field = ScalarField::make_1d(n, 1.0 / (n - 1), 0.0, vals);
    CHECK(energy_lp(field, sq, 1.0) == doctest::Approx(12.0).epsilon(1e-3));
}

TEST_CASE("energy_lp monotone toward energy_sup") {
    const EnergySpec sq = square_energy_1d();
    const int n = 801;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        vals[i] = std::sin(3.0 * x) + 0.3 * x * x * x;
    }
    const auto field = ScalarField::make_1d(n, 1.0 / (n - 1), 0.0, vals);
    const double sup = energy_sup(field, sq);
    double prev = 0.0;
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0}) {
        const double e = energy_lp(field, sq, p);
        CHECK(e >= prev - 1e-3);
        CHECK(e <= sup + 1e-3);
        prev = e;
    }
    CHECK(sup - prev <= sup - energy_lp(field, sq, 1.0) + 1e-12);
}

TEST_CASE("energy_sup respects subregions") {
    const auto am = exact1d::absolute_minimiser(test1_data(), square_energy_1d());
    const EnergySpec sq = square_energy_1d();
    CHECK(energy_sup(am.u, sq, std::make_pair(0.0, 0.4)) ==
          doctest::Approx(64.0 / 225.0).epsilon(1e-12));
    CHECK_THROWS_AS(energy_sup(am.u, sq, std::make_pair(2.0, 3.0)), std::invalid_argument);
}

TEST_CASE("flow identity on the quartic") {
    auto src = DerivativeSource::analytic_with_jets(
        1, [](const std::vector<double>& x) { return std::pow(x[0], 4) / 12.0; },
        [](const std::vector<double>& x) { return std::vector<double>{x[0] * x[0]}; },
        [](const std::vector<double>& x) { return std::vector<double>{2.0 * x[0]}; }, 1e-6);
    for (double x : {0.5, 1.0, 1.4}) {
        const auto fi = flow_identity_residual(src, {x}, square_energy_1d());
        CHECK(fi.rhs == doctest::Approx(32.0 * std::pow(x, 8)).epsilon(1e-10));
        CHECK(std::fabs(fi.lhs - fi.rhs) <= 1e-5 * (1.0 + std::fabs(fi.rhs)));
    }
}

TEST_CASE("flow identity rejects critical points") {
    auto quad = DerivativeSource::analytic_with_jets(
        1, [](const std::vector<double>& x) { return x[0] * x[0]; },
        [](const std::vector<double>&) { return std::vector<double>{2.0}; },
        [](const std::vector<double>&) { return std::vector<double>{0.0}; });
    CHECK_THROWS_AS(flow_identity_residual(quad, {0.7}, square_energy_1d()),
                    std::domain_error);
}

TEST_CASE("level check verdicts") {
    const EnergySpec sq = square_energy_1d();
    const auto cps = exact1d::critical_point_solution(test1_data(), 1.0);
    const auto lc1 = dsolution_levelcheck(cps.u, sq, 1e-9);
    CHECK(lc1.passes);
    CHECK(lc1.level == doctest::Approx(1.0));
    CHECK(lc1.max_deviation == doctest::Approx(0.0));
    CHECK(lc1.sign_pattern == "-+-");

    const auto am = exact1d::absolute_minimiser(test1_data(), sq);
    const auto lc2 = dsolution_levelcheck(am.u, sq, 1e-9);
    CHECK(lc2.passes);
    CHECK(lc2.level == doctest::Approx(64.0 / 225.0).epsilon(1e-12));
    CHECK(lc2.sign_pattern == "-+");

    const int n = 301;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        vals[i] = x * x * x;
    }
    const auto lc3 =
        dsolution_levelcheck(ScalarField::make_1d(n, 1.0 / (n - 1), 0.0, vals), sq, 1e-6);
    CHECK_FALSE(lc3.passes);
}

TEST_CASE("projection constancy in the level check") {
    const EnergySpec proj = make_projection_sq(1, {2.0});
    // |u''| constant but sign-changing: H level constant, projection twoish.
    const auto cps = exact1d::critical_point_solution(test1_data(), 1.0);
    const auto lc = dsolution_levelcheck(cps.u, proj, 1e-9);
    CHECK(lc.passes);
    CHECK(lc.level == doctest::Approx(4.0));
    CHECK_FALSE(lc.projection_constant);
    CHECK(lc.distinct_projection_values == 2);

    const PiecewiseQuadratic constant(0.0, 1.0, {}, {{0.0, 0.0, 0.7}});
    const auto lc2 = dsolution_levelcheck(constant, proj, 1e-9);
    CHECK(lc2.projection_constant);
}

TEST_CASE("jet FD error halves quadratically") {
    // Quartic value data: the hessian stencil error scales as h^2.
    auto make = [](double h) {
        const int n = 9;
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            const double x = 1.0 + (i - n / 2) * h;
            vals[i] = std::pow(x, 4);
        }
        return DerivativeSource::sampled(ScalarField::make_1d(n, h, 1.0 - (n / 2) * h, vals));
    };
    const double e1 = std::fabs(make(2e-2).jet({1.0}).hess(0, 0) - 12.0);
    const double e2 = std::fabs(make(1e-2).jet({1.0}).hess(0, 0) - 12.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}
