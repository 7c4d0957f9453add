#include <doctest.h>

#include <cmath>

#include "linfty/exact1d.hpp"
#include "linfty/io.hpp"

using namespace linfty;

TEST_CASE("piecewise quadratic JSON round trip") {
    const auto am = exact1d::absolute_minimiser(test1_data(), square_energy_1d());
    const auto j = io::to_json(am.u);
    CHECK(j.at("domain").at(0) == 0.0);
    CHECK(j.at("domain").at(1) == 1.0);
    CHECK(j.at("breakpoints").size() == 1);
    CHECK(j.at("pieces").size() == 2);
    CHECK(j.at("pieces").at(0).at(2).get<double>() == doctest::Approx(-8.0 / 15.0));

    const auto back = io::piecewise_quadratic_from_json(j);
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0})
        CHECK(back.value(x) == doctest::Approx(am.u.value(x)).epsilon(1e-15));
}

TEST_CASE("scalar field JSON and CSV round trips") {
    const auto f = ScalarField::make_2d(2, 3, 0.5, 0.25, -1.0, 0.0,
                                        {1.0, 2.5, 3.0, -4.0, 5.0, 6.125});
    const auto j = io::to_json(f);
    const auto back = io::scalar_field_from_json(j);
    CHECK(back.dimension == 2);
    CHECK(back.shape[0] == 2);
    CHECK(back.shape[1] == 3);
    CHECK(back.at(1, 2) == 6.125);

    const std::string csv = io::to_csv(f);
    CHECK(csv == "1,2.5,3\n-4,5,6.125\n");
    const auto fromcsv = io::scalar_field_from_csv(csv, 0.5, -1.0, 0.0);
    CHECK(fromcsv.shape[0] == 2);
    CHECK(fromcsv.at(0, 1) == 2.5);

    const auto f1 = ScalarField::make_1d(3, 0.1, 0.0, {1.0, 2.0, 3.0});
    CHECK(io::to_csv(f1) == "1,2,3\n");
    CHECK(io::scalar_field_from_csv("1,2,3\n", 0.1, 0.0).dimension == 1);
}

TEST_CASE("format_double is locale-free shortest round trip") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(-8.0 / 15.0) == "-0.5333333333333333");
    CHECK(io::format_double(1.0) == "1");
    const double v = 0.12345678901234567;
    CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("solve report serialisation") {
    SolveReport r;
    r.iterations = 7;
    r.final_residual = 1e-11;
    r.tolerance = 1e-9;
    r.energy = 0.5;
    r.converged = true;
    r.breaks.push_back({0.5, -1.0, 1.0, 2.0});
    const auto j = io::to_json(r);
    CHECK(j.at("iterations") == 7);
    CHECK(j.at("converged") == true);
    CHECK(j.at("breaks").at(0).at("location") == 0.5);
}
