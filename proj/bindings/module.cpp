// Python bindings for the main operations: exact 1D constructions,
// operator residuals and energies, and the p-bilaplacian solvers.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"
#include "linfty/residuals.hpp"
#include "linfty/solver1d.hpp"
#include "linfty/solver2d.hpp"
#include "linfty/verify.hpp"

namespace py = pybind11;
using namespace linfty;

namespace {

ScalarField field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                             double spacing, double origin0, double origin1) {
    const auto buf = arr.request();
    std::vector<double> values(static_cast<const double*>(buf.ptr),
                               static_cast<const double*>(buf.ptr) + buf.size);
    if (buf.ndim == 1)
        return ScalarField::make_1d(static_cast<int>(buf.shape[0]), spacing, origin0,
                                    std::move(values));
    if (buf.ndim == 2)
        return ScalarField::make_2d(static_cast<int>(buf.shape[0]),
                                    static_cast<int>(buf.shape[1]), spacing, spacing, origin0,
                                    origin1, std::move(values));
    throw std::invalid_argument("expected a 1D or 2D array");
}

py::array_t<double> field_to_array(const ScalarField& f) {
    if (f.dimension == 1) {
        py::array_t<double> out(f.shape[0]);
        std::copy(f.values.begin(), f.values.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out({f.shape[0], f.shape[1]});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

py::dict report_to_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["final_residual"] = r.final_residual;
    d["tolerance"] = r.tolerance;
    d["energy"] = r.energy;
    d["converged"] = r.converged;
    py::list breaks;
    for (const auto& b : r.breaks) {
        py::dict bd;
        bd["location"] = b.location;
        bd["left_value"] = b.left_value;
        bd["right_value"] = b.right_value;
        bd["jump"] = b.jump;
        breaks.append(bd);
    }
    d["breaks"] = breaks;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "second-order sup-norm variational solvers";

    py::class_<HermiteData1D>(m, "HermiteData1D")
        .def(py::init([](double a, double b, double A, double B, double Ap, double Bp) {
                 HermiteData1D d{a, b, A, B, Ap, Bp};
                 d.validate();
                 return d;
             }),
             py::arg("a"), py::arg("b"), py::arg("A"), py::arg("B"), py::arg("Aprime"),
             py::arg("Bprime"))
        .def_readonly("a", &HermiteData1D::a)
        .def_readonly("b", &HermiteData1D::b)
        .def_readonly("A", &HermiteData1D::A)
        .def_readonly("B", &HermiteData1D::B)
        .def_readonly("Aprime", &HermiteData1D::Aprime)
        .def_readonly("Bprime", &HermiteData1D::Bprime);

    m.def("test1_data", &test1_data);
    m.def("hermite_defect", &hermite_defect, py::arg("data"));
    m.def("cubic_hermite", &cubic_hermite, py::arg("data"),
          "monomial coefficients [c0, c1, c2, c3] of the clamped cubic");

    py::class_<PiecewiseQuadratic>(m, "PiecewiseQuadratic")
        .def("value", &PiecewiseQuadratic::value)
        .def("derivative", &PiecewiseQuadratic::derivative)
        .def("second", &PiecewiseQuadratic::second)
        .def_property_readonly("domain",
                               [](const PiecewiseQuadratic& pq) {
                                   return py::make_tuple(pq.domain_left(), pq.domain_right());
                               })
        .def_property_readonly("breakpoints",
                               [](const PiecewiseQuadratic& pq) { return pq.breakpoints(); })
        .def_property_readonly("pieces", [](const PiecewiseQuadratic& pq) {
            py::list out;
            for (const auto& p : pq.pieces()) out.append(py::make_tuple(p.c0, p.c1, p.c2));
            return out;
        });

    // EnergySpec is a std::variant; the stl.h caster maps it onto these
    // three alternative classes.
    py::class_<FullHessianSq>(m, "FullHessianSq");
    py::class_<ProjectionSq>(m, "ProjectionSq");
    py::class_<Custom1D>(m, "Custom1D");
    m.def("square_energy", &square_energy_1d, "H(t) = t^2 with explicit level branches");
    m.def("full_hessian_energy", &make_full_hessian_sq);
    m.def("projection_energy", &make_projection_sq, py::arg("n"), py::arg("matrix"));
    m.def("custom_energy", &make_custom1d, py::arg("h"), py::arg("h_prime"),
          py::arg("level_neg"), py::arg("level_pos"));
    m.def("asymmetric_energy", &verify::asymmetric_energy_1d);

    py::class_<exact1d::HyperbolaConstants>(m, "HyperbolaConstants")
        .def_readonly("c0", &exact1d::HyperbolaConstants::c0)
        .def_readonly("c1", &exact1d::HyperbolaConstants::c1)
        .def_readonly("c2", &exact1d::HyperbolaConstants::c2);
    m.def("hyperbola_constants", &exact1d::hyperbola_constants, py::arg("data"));

    m.def("quadratic_minimiser", &exact1d::quadratic_minimiser, py::arg("data"));
    m.def("matching_point", &exact1d::matching_point, py::arg("R"), py::arg("L"),
          py::arg("data"));

    py::class_<exact1d::AbsoluteMinimiser>(m, "AbsoluteMinimiser")
        .def_readonly("u", &exact1d::AbsoluteMinimiser::u)
        .def_readonly("xi", &exact1d::AbsoluteMinimiser::xi)
        .def_readonly("left_curvature", &exact1d::AbsoluteMinimiser::left_curvature)
        .def_readonly("right_curvature", &exact1d::AbsoluteMinimiser::right_curvature)
        .def_readonly("energy", &exact1d::AbsoluteMinimiser::energy);
    m.def("absolute_minimiser", &exact1d::absolute_minimiser, py::arg("data"), py::arg("spec"));

    py::class_<exact1d::PExactSolution>(m, "PExactSolution")
        .def_readonly("p", &exact1d::PExactSolution::p)
        .def_readonly("critical", &exact1d::PExactSolution::critical)
        .def_readonly("lam", &exact1d::PExactSolution::lambda)
        .def_readonly("mu", &exact1d::PExactSolution::mu)
        .def("value", &exact1d::PExactSolution::value)
        .def("derivative", &exact1d::PExactSolution::derivative)
        .def("second", &exact1d::PExactSolution::second)
        .def("singular_point", &exact1d::PExactSolution::singular_point)
        .def("system_residual", &exact1d::PExactSolution::system_residual)
        .def("boundary_residual", &exact1d::PExactSolution::boundary_residual);
    m.def("p_exact_solution",
          [](const HermiteData1D& d, int p) { return exact1d::p_exact_solution(d, p); },
          py::arg("data"), py::arg("p"));

    py::class_<exact1d::FeasibleLevel>(m, "FeasibleLevel")
        .def_readonly("feasible", &exact1d::FeasibleLevel::feasible)
        .def_readonly("margin_right", &exact1d::FeasibleLevel::margin_right)
        .def_readonly("margin_left", &exact1d::FeasibleLevel::margin_left);
    m.def("feasible_level", &exact1d::feasible_level, py::arg("data"), py::arg("C"));

    py::class_<exact1d::CriticalPointSolution>(m, "CriticalPointSolution")
        .def_readonly("C", &exact1d::CriticalPointSolution::C)
        .def_readonly("xc", &exact1d::CriticalPointSolution::xc)
        .def_readonly("yc", &exact1d::CriticalPointSolution::yc)
        .def_readonly("K", &exact1d::CriticalPointSolution::K)
        .def_readonly("L", &exact1d::CriticalPointSolution::L)
        .def_readonly("u", &exact1d::CriticalPointSolution::u);
    m.def("critical_point_solution", &exact1d::critical_point_solution, py::arg("data"),
          py::arg("C"));

    m.def("energy_sup",
          [](const PiecewiseQuadratic& pq, const EnergySpec& spec) {
              return residuals::energy_sup(pq, spec);
          },
          py::arg("u"), py::arg("spec"));
    m.def("energy_lp",
          [](const PiecewiseQuadratic& pq, const EnergySpec& spec, double p) {
              return residuals::energy_lp(pq, spec, p);
          },
          py::arg("u"), py::arg("spec"), py::arg("p"));

    py::class_<residuals::LevelCheck>(m, "LevelCheck")
        .def_readonly("passes", &residuals::LevelCheck::passes)
        .def_readonly("level", &residuals::LevelCheck::level)
        .def_readonly("max_deviation", &residuals::LevelCheck::max_deviation)
        .def_readonly("sign_pattern", &residuals::LevelCheck::sign_pattern);
    m.def("dsolution_levelcheck",
          [](const PiecewiseQuadratic& pq, const EnergySpec& spec, double tol) {
              return residuals::dsolution_levelcheck(pq, spec, tol);
          },
          py::arg("u"), py::arg("spec"), py::arg("tol"));

    m.def("residual_a2inf",
          [](py::array_t<double> hessian, py::array_t<double> third, const EnergySpec& spec) {
              const auto hb = hessian.request();
              const auto tb = third.request();
              residuals::JetSample jet;
              jet.n = hb.ndim == 0 ? 1 : static_cast<int>(hb.shape[0]);
              jet.point.assign(static_cast<std::size_t>(jet.n), 0.0);
              jet.hessian.assign(static_cast<const double*>(hb.ptr),
                                 static_cast<const double*>(hb.ptr) + hb.size);
              jet.third.assign(static_cast<const double*>(tb.ptr),
                               static_cast<const double*>(tb.ptr) + tb.size);
              return residuals::residual_a2inf(jet, spec);
          },
          py::arg("hessian"), py::arg("third"), py::arg("spec"),
          "six-index contraction on an explicit jet (row-major tensors)");

    m.def("solve_p_1d",
          [](const HermiteData1D& d, int p, int m) {
              const auto r = solver1d::solve_p_1d(d, p, solver1d::Mesh1D{d.a, d.b, m});
              py::array_t<double> values(static_cast<py::ssize_t>(r.state.values.size()));
              py::array_t<double> derivs(static_cast<py::ssize_t>(r.state.derivs.size()));
              std::copy(r.state.values.begin(), r.state.values.end(), values.mutable_data());
              std::copy(r.state.derivs.begin(), r.state.derivs.end(), derivs.mutable_data());
              return py::make_tuple(values, derivs, report_to_dict(r.report));
          },
          py::arg("data"), py::arg("p"), py::arg("m"),
          "returns (nodal values, nodal derivatives, report)");

    m.def("p_continuation",
          [](const HermiteData1D& d, std::vector<int> exponents, int m) {
              solver1d::ContinuationSchedule sched;
              sched.exponents = std::move(exponents);
              const auto stages =
                  solver1d::p_continuation(d, sched, solver1d::Mesh1D{d.a, d.b, m});
              py::list out;
              for (const auto& st : stages) {
                  const auto f = st.state.second_derivative_field();
                  py::dict entry;
                  entry["report"] = report_to_dict(st.report);
                  entry["d2u"] = field_to_array(f);
                  entry["d2u_spacing"] = f.spacing[0];
                  entry["d2u_origin"] = f.origin[0];
                  out.append(entry);
              }
              return out;
          },
          py::arg("data"), py::arg("exponents"), py::arg("m"));

    m.def("detect_breaks",
          [](py::array_t<double> d2u, double spacing, double origin, double threshold) {
              const auto f = field_from_array(d2u, spacing, origin, 0.0);
              py::list out;
              for (const auto& b : solver1d::detect_breaks(f, threshold)) {
                  py::dict bd;
                  bd["location"] = b.location;
                  bd["left_value"] = b.left_value;
                  bd["right_value"] = b.right_value;
                  bd["jump"] = b.jump;
                  out.append(bd);
              }
              return out;
          },
          py::arg("d2u"), py::arg("spacing"), py::arg("origin") = 0.0,
          py::arg("threshold") = 0.5);

    m.def("solve_p_2d",
          [](const std::string& builtin, int p, int n) {
              if (builtin != "test2") throw std::invalid_argument("unknown builtin");
              const auto r =
                  solver2d::solve_p_2d(solver2d::test2_data(), p, solver2d::Grid2D{n});
              return py::make_tuple(field_to_array(r.u), report_to_dict(r.report));
          },
          py::arg("builtin"), py::arg("p"), py::arg("n"));

    m.def("solve_p_2d_quadratic",
          [](const std::array<double, 6>& coeffs, int p, int n) {
              const auto r = solver2d::solve_p_2d(solver2d::quadratic_data(coeffs), p,
                                                  solver2d::Grid2D{n});
              return py::make_tuple(field_to_array(r.u), report_to_dict(r.report));
          },
          py::arg("coeffs"), py::arg("p"), py::arg("n"));

    m.def("laplacian_field",
          [](py::array_t<double> u, double spacing) {
              return field_to_array(
                  solver2d::laplacian_field(field_from_array(u, spacing, 0.0, 0.0)));
          },
          py::arg("u"), py::arg("spacing"));

    m.def("interface_metrics",
          [](py::array_t<double> lap, double spacing) {
              const auto met =
                  solver2d::interface_metrics(field_from_array(lap, spacing, 0.0, 0.0));
              py::dict d;
              d["level"] = met.level;
              d["cov"] = met.cov;
              d["region_count"] = met.region_count;
              d["positive_median"] = met.positive_median;
              d["negative_median"] = met.negative_median;
              return d;
          },
          py::arg("lap"), py::arg("spacing"));

    m.def("verify_suite", [](const std::string& name) {
        const auto rep = verify::run_suite(name);
        py::dict d;
        d["suite"] = rep.suite;
        d["passed"] = rep.passed;
        py::list checks;
        for (const auto& c : rep.checks) {
            py::dict cd;
            cd["name"] = c.name;
            cd["passed"] = c.passed;
            cd["measured"] = c.measured;
            cd["threshold"] = c.threshold;
            checks.append(cd);
        }
        d["checks"] = checks;
        return d;
    });

    m.attr("__version__") = "0.1.0";
}
