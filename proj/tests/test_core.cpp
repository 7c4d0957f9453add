#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"

using namespace linfty;

TEST_CASE("eval_piecewise_quadratic on a single piece") {
    // u = x^2 on (0,1): piece (0, 0, 2).
    const PiecewiseQuadratic pq(0.0, 1.0, {}, {{0.0, 0.0, 2.0}});
    CHECK(eval_piecewise_quadratic(pq, 0.5, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(eval_piecewise_quadratic(pq, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_piecewise_quadratic(pq, 0.5, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(eval_piecewise_quadratic(pq, 1.5, 0), std::domain_error);
    CHECK_THROWS_AS(eval_piecewise_quadratic(pq, -0.1, 0), std::domain_error);
}

TEST_CASE("two-piece minimiser is C1 at the breakpoint") {
    const auto am = exact1d::absolute_minimiser(test1_data(), square_energy_1d());
    REQUIRE(am.xi.has_value());
    const double xi = *am.xi;
    const double eps = 1e-9;
    const double left = eval_piecewise_quadratic(am.u, xi - eps, 1);
    const double right = eval_piecewise_quadratic(am.u, xi + eps, 1);
    CHECK(left == doctest::Approx(right).epsilon(1e-7));
    // Order 2 at the breakpoint returns the right-limit piece.
    CHECK(eval_piecewise_quadratic(am.u, xi, 2) == doctest::Approx(8.0 / 15.0));
}

TEST_CASE("PiecewiseQuadratic validates C1 matching") {
    // Value jump at the breakpoint.
    CHECK_THROWS_AS(PiecewiseQuadratic(0.0, 1.0, {0.5}, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}),
                    std::invalid_argument);
    // Slope jump.
    CHECK_THROWS_AS(PiecewiseQuadratic(0.0, 1.0, {0.5}, {{0.0, 1.0, 0.0}, {0.5, 2.0, 0.0}}),
                    std::invalid_argument);
    // Piece count mismatch.
    CHECK_THROWS_AS(PiecewiseQuadratic(0.0, 1.0, {0.5}, {{0.0, 0.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("hermite_defect on reference data") {
    CHECK(hermite_defect(test1_data()) == doctest::Approx(4.0 / 15.0).epsilon(1e-14));
    // Data of x^2/2 on (0,1).
    CHECK(hermite_defect({0.0, 1.0, 0.0, 0.5, 0.0, 1.0}) == doctest::Approx(0.0));
    // Affine data.
    CHECK(hermite_defect({0.0, 1.0, 0.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("hermite_defect invariances") {
    std::mt19937 gen(99u);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const HermiteData1D d{-1.0, 2.0, coeff(gen), coeff(gen), coeff(gen), coeff(gen)};
        const double e = hermite_defect(d);

        // Adding any quadratic's data leaves the defect unchanged.
        const double q0 = coeff(gen), q1 = coeff(gen), q2 = coeff(gen);
        auto q = [&](double x) { return q0 + q1 * x + 0.5 * q2 * x * x; };
        auto qp = [&](double x) { return q1 + q2 * x; };
        const HermiteData1D shifted{d.a, d.b, d.A + q(d.a), d.B + q(d.b),
                                    d.Aprime + qp(d.a), d.Bprime + qp(d.b)};
        CHECK(hermite_defect(shifted) == doctest::Approx(e).epsilon(1e-10));

        // Linearity in the data.
        const double s = 2.5;
        const HermiteData1D scaled{d.a, d.b, s * d.A, s * d.B, s * d.Aprime, s * d.Bprime};
        CHECK(hermite_defect(scaled) == doctest::Approx(s * e).epsilon(1e-12));
    }
}

TEST_CASE("cubic_hermite reproduces the reference cubic") {
    const auto c = cubic_hermite(test1_data());
    CHECK(c[0] == doctest::Approx(-3.0 / 120.0).epsilon(1e-13));
    CHECK(c[1] == doctest::Approx(22.0 / 120.0).epsilon(1e-13));
    CHECK(c[2] == doctest::Approx(-48.0 / 120.0).epsilon(1e-13));
    CHECK(c[3] == doctest::Approx(32.0 / 120.0).epsilon(1e-13));
    for (double x : {0.1, 0.35, 0.62, 0.97}) {
        const double g = (4.0 * x - 3.0) * (2.0 * x - 1.0) * (4.0 * x - 1.0) / 120.0;
        CHECK(c[0] + x * (c[1] + x * (c[2] + x * c[3])) == doctest::Approx(g).epsilon(1e-13));
    }
}

TEST_CASE("cubic_hermite degenerate cases") {
    const auto quad = cubic_hermite({0.0, 1.0, 0.0, 0.5, 0.0, 1.0});
    CHECK(quad[3] == doctest::Approx(0.0));
    CHECK(quad[2] == doctest::Approx(0.5).epsilon(1e-14));
    const auto zero = cubic_hermite({0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
    for (double v : zero) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("double integration of u'' reproduces right-end data") {
    std::mt19937 gen(7u);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        HermiteData1D d{0.0, 1.0, coeff(gen), coeff(gen), coeff(gen), coeff(gen)};
        if (is_critical_data(d)) continue;
        const auto am = exact1d::absolute_minimiser(d, square_energy_1d());
        // Integrate the curvature twice from (A, A') in closed form.
        double v = d.A, s = d.Aprime, xl = d.a;
        for (std::size_t k = 0; k < am.u.pieces().size(); ++k) {
            const double xr = k < am.u.breakpoints().size() ? am.u.breakpoints()[k] : d.b;
            const double c2 = am.u.pieces()[k].c2;
            v += s * (xr - xl) + 0.5 * c2 * (xr - xl) * (xr - xl);
            s += c2 * (xr - xl);
            xl = xr;
        }
        CHECK(v == doctest::Approx(d.B).epsilon(1e-10));
        CHECK(s == doctest::Approx(d.Bprime).epsilon(1e-10));
    }
}

TEST_CASE("energy spec validation") {
    CHECK_THROWS_AS(make_projection_sq(2, {1.0, 0.5, 0.4, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_projection_sq(2, {1.0, 2.0, 2.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(make_projection_sq(2, {2.0, 0.3, 0.3, 1.0}));

    // H without H(0) = 0 is rejected.
    CHECK_THROWS_AS(make_custom1d([](double t) { return t * t + 1.0; },
                                  [](double t) { return 2.0 * t; },
                                  [](double t) { return -std::sqrt(t); },
                                  [](double t) { return std::sqrt(t); }),
                    std::invalid_argument);
    // Level branches must invert H.
    CHECK_THROWS_AS(make_custom1d([](double t) { return t * t; },
                                  [](double t) { return 2.0 * t; },
                                  [](double t) { return -t; },
                                  [](double t) { return t; }),
                    std::invalid_argument);

    const EnergySpec sq = square_energy_1d();
    CHECK(h_curvature(sq, -3.0) == doctest::Approx(9.0));
    CHECK(h_level_pos(sq, 4.0) == doctest::Approx(2.0));
    CHECK(h_level_neg(sq, 4.0) == doctest::Approx(-2.0));

    const EnergySpec proj = make_projection_sq(1, {2.0});
    CHECK(h_curvature(proj, 3.0) == doctest::Approx(36.0));
    CHECK(h_level_pos(proj, 36.0) == doctest::Approx(3.0));
}

TEST_CASE("scalar field validation") {
    CHECK_THROWS_AS(ScalarField::make_1d(3, 0.0, 0.0, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField::make_1d(3, 0.1, 0.0, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField::make_2d(2, 2, 0.1, 0.1, 0.0, 0.0,
                                         {1.0, 2.0, 3.0, std::nan("")}),
                    std::invalid_argument);
    const auto f = ScalarField::make_2d(2, 3, 0.5, 0.25, -1.0, 0.0,
                                        {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    CHECK(f.at(1, 2) == 6.0);
    CHECK(f.coord0(1) == doctest::Approx(-0.5));
    CHECK(f.coord1(2) == doctest::Approx(0.5));
}

TEST_CASE("solve report consistency") {
    SolveReport r;
    r.converged = true;
    r.final_residual = 1e-3;
    r.tolerance = 1e-9;
    CHECK_THROWS_AS(r.validate(), std::logic_error);
    r.final_residual = 1e-12;
    CHECK_NOTHROW(r.validate());
}
