#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"
#include "linfty/solver1d.hpp"

using namespace linfty;
using namespace linfty::solver1d;

TEST_CASE("p=2 solution is the cubic interpolant") {
    const auto d = test1_data();
    const Mesh1D mesh{0.0, 1.0, 32};
    const auto r = solve_p_1d(d, 2, mesh);
    CHECK(r.report.converged);
    const auto c = cubic_hermite(d);
    for (int i = 0; i <= mesh.m; ++i) {
        const double x = mesh.node(i);
        const double g = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
        CHECK(std::fabs(r.state.values[i] - g) <= 1e-10);
    }
    // Boundary DOFs are bit-exact.
    CHECK(r.state.values.front() == d.A);
    CHECK(r.state.derivs.front() == d.Aprime);
    CHECK(r.state.values.back() == d.B);
    CHECK(r.state.derivs.back() == d.Bprime);
}

TEST_CASE("zero-defect data yields the quadratic at every p") {
    const HermiteData1D d{0.0, 1.0, 0.0, 0.5, 0.0, 1.0};
    const Mesh1D mesh{0.0, 1.0, 16};
    ContinuationSchedule sched;
    sched.exponents = {2, 4, 12};
    const auto stages = p_continuation(d, sched, mesh);
    REQUIRE(stages.size() == 3);
    for (const auto& st : stages) {
        CHECK(st.report.converged);
        for (int i = 0; i <= mesh.m; ++i) {
            const double x = mesh.node(i);
            CHECK(std::fabs(st.state.values[i] - 0.5 * x * x) <= 1e-8);
        }
        CHECK(st.report.energy == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("p=4 converges to the explicit solution at second order") {
    const auto d = test1_data();
    const auto exact = exact1d::p_exact_solution(d, 4);
    double prev = 0.0;
    for (int m : {64, 128}) {
        const Mesh1D mesh{0.0, 1.0, m};
        const auto r = solve_p_1d(d, 4, mesh);
        CHECK(r.report.converged);
        double sup = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double x = mesh.node(i);
            sup = std::max(sup, std::fabs(r.state.values[i] - exact.value(x)));
        }
        if (prev > 0.0) CHECK(prev / sup == doctest::Approx(4.0).epsilon(0.25));
        prev = sup;
    }
}

TEST_CASE("Galerkin residual is below the reported tolerance") {
    const auto d = test1_data();
    const auto r = solve_p_1d(d, 4, Mesh1D{0.0, 1.0, 64});
    CHECK(r.report.converged);
    CHECK(r.report.final_residual <= r.report.tolerance);
    CHECK_NOTHROW(r.report.validate());
}

TEST_CASE("discrete energy is non-increasing under refinement") {
    const auto d = test1_data();
    double prev = 1e300;
    for (int m : {16, 32, 64}) {
        const auto r = solve_p_1d(d, 4, Mesh1D{0.0, 1.0, m});
        CHECK(r.report.energy <= prev + 1e-12);
        prev = r.report.energy;
    }
}

TEST_CASE("solutions scale with the data") {
    const auto d = test1_data();
    const HermiteData1D d2{d.a, d.b, 2.0 * d.A, 2.0 * d.B, 2.0 * d.Aprime, 2.0 * d.Bprime};
    const Mesh1D mesh{0.0, 1.0, 32};
    const auto r1 = solve_p_1d(d, 4, mesh);
    const auto r2 = solve_p_1d(d2, 4, mesh);
    for (int i = 0; i <= mesh.m; ++i) {
        CHECK(r2.state.values[i] == doctest::Approx(2.0 * r1.state.values[i]).epsilon(1e-12));
        CHECK(r2.state.derivs[i] == doctest::Approx(2.0 * r1.state.derivs[i]).epsilon(1e-12));
    }
}

TEST_CASE("continuation is warm-started and monotone toward the minimiser") {
    const auto d = test1_data();
    ContinuationSchedule sched;
    sched.exponents = {2, 4, 12, 42};
    const Mesh1D mesh{0.0, 1.0, 64};
    const auto stages = p_continuation(d, sched, mesh);
    REQUIRE(stages.size() == 4);
    const auto am = exact1d::absolute_minimiser(d, square_energy_1d());
    double prev = 1e300;
    for (const auto& st : stages) {
        CHECK(st.report.converged);
        double sup = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double x = i / 500.0;
            sup = std::max(sup, std::fabs(st.state.value(x) - am.u.value(x)));
        }
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("schedule validation") {
    ContinuationSchedule sched;
    sched.exponents = {4, 12};
    CHECK_THROWS_AS(sched.validate(), std::invalid_argument);
    sched.exponents = {2, 3};
    CHECK_THROWS_AS(sched.validate(), std::invalid_argument);
    sched.exponents = {2, 12, 4};
    CHECK_THROWS_AS(sched.validate(), std::invalid_argument);
    sched.exponents = {2, 4, 12};
    CHECK_NOTHROW(sched.validate());
}

TEST_CASE("detect_breaks on synthetic plateaus") {
    const int n = 512;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        vals[i] = x < 0.5 ? -8.0 / 15.0 : 8.0 / 15.0;
    }
    const auto field = ScalarField::make_1d(n, 1.0 / n, 0.5 / n, vals);
    const auto breaks = detect_breaks(field);
    REQUIRE(breaks.size() == 1);
    CHECK(breaks[0].location == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(breaks[0].left_value == doctest::Approx(-8.0 / 15.0));
    CHECK(breaks[0].right_value == doctest::Approx(8.0 / 15.0));

    // Constant field: nothing to detect.
    std::vector<double> flat(n, 0.7);
    CHECK(detect_breaks(ScalarField::make_1d(n, 1.0 / n, 0.0, flat)).empty());
}

TEST_CASE("mesh and input validation") {
    CHECK_THROWS_AS(Mesh1D({0.0, 1.0, 2}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(solve_p_1d(test1_data(), 3, Mesh1D{0.0, 1.0, 8}), std::invalid_argument);
    CHECK_THROWS_AS(solve_p_1d(test1_data(), 4, Mesh1D{0.0, 2.0, 8}), std::invalid_argument);
}
