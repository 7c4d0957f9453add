// Command-line front end: exact constructions, p-solvers, residual checks,
// verification suites, and parameter sweeps.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "linfty/core.hpp"
#include "linfty/exact1d.hpp"
#include "linfty/io.hpp"
#include "linfty/residuals.hpp"
#include "linfty/solver1d.hpp"
#include "linfty/solver2d.hpp"
#include "linfty/verify.hpp"

namespace fs = std::filesystem;
using linfty::io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOut {
    std::string out_dir;

    fs::path dir() const {
        fs::path p = out_dir;
        fs::create_directories(p);
        return p;
    }
};

std::string default_out_dir() {
    if (const char* env = std::getenv("LINFTY_OUT")) return env;
    return ".";
}

void write_with_sidecar(const fs::path& path, const std::string& payload,
                        const std::string& command, const json& config) {
    linfty::io::write_text(path, payload);
    json meta;
    meta["tool"] = "linfty";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["config"] = config;
    meta["file"] = path.filename().string();
    linfty::io::write_json(path.string() + ".meta.json", meta);
}

// ---- data selection -------------------------------------------------------

struct DataArgs {
    std::vector<double> inline_data;  // a,b,A,B,A',B'
    std::string builtin;

    linfty::HermiteData1D resolve() const {
        if (!builtin.empty()) {
            if (builtin == "test1") return linfty::test1_data();
            throw CLI::ValidationError("--builtin", "unknown builtin '" + builtin + "'");
        }
        if (inline_data.size() != 6)
            throw CLI::ValidationError("--data", "expected six reals a,b,A,B,A',B'");
        linfty::HermiteData1D d{inline_data[0], inline_data[1], inline_data[2],
                                inline_data[3], inline_data[4], inline_data[5]};
        d.validate();
        return d;
    }

    json echo() const {
        json j;
        if (!builtin.empty()) j["builtin"] = builtin;
        else j["data"] = inline_data;
        return j;
    }
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
    auto* data = cmd->add_option("--data", args.inline_data,
                                 "clamped data a,b,A,B,A',B'")->delimiter(',')->expected(6);
    auto* builtin = cmd->add_option("--builtin", args.builtin, "named data set (test1)");
    data->excludes(builtin);
    builtin->excludes(data);
}

linfty::EnergySpec resolve_spec(const std::string& name, int dim) {
    if (name == "sq" || name.empty())
        return dim == 1 ? linfty::square_energy_1d() : linfty::make_full_hessian_sq();
    if (name == "full") return linfty::make_full_hessian_sq();
    if (name == "asym") return linfty::verify::asymmetric_energy_1d();
    if (name.rfind("proj=", 0) == 0) {
        const std::string rest = name.substr(5);
        std::vector<double> entries;
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(',', pos);
            if (next == std::string::npos) next = rest.size();
            entries.push_back(std::stod(rest.substr(pos, next - pos)));
            pos = next + 1;
        }
        if (entries.size() == 1) return linfty::make_projection_sq(1, entries);
        if (entries.size() == 4) return linfty::make_projection_sq(2, entries);
        throw CLI::ValidationError("--spec", "proj= takes 1 (1D) or 4 (2D row-major) entries");
    }
    throw CLI::ValidationError("--spec", "unknown spec '" + name + "'");
}

json spec_echo(const std::string& name) { return name.empty() ? json("sq") : json(name); }

// ---- exact1d ---------------------------------------------------------------

struct Exact1DArgs {
    DataArgs data;
    std::string spec = "sq";
    int samples = 513;
    std::optional<int> p;
    std::optional<double> level;
    CommonOut out;
};

std::string sample_csv(const std::function<double(double, int)>& eval, double a, double b,
                       int samples) {
    std::string csv = "x,u,du,d2u\n";
    for (int i = 0; i < samples; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        csv += linfty::io::format_double(x);
        for (int order = 0; order < 3; ++order) {
            csv += ',';
            csv += linfty::io::format_double(eval(x, order));
        }
        csv += '\n';
    }
    return csv;
}

int run_exact1d(const Exact1DArgs& args) {
    const auto d = args.data.resolve();
    const auto spec = resolve_spec(args.spec, 1);
    json config = args.data.echo();
    config["spec"] = spec_echo(args.spec);
    config["samples"] = args.samples;

    json result;
    result["data"] = {{"a", d.a}, {"b", d.b}, {"A", d.A}, {"B", d.B},
                      {"Aprime", d.Aprime}, {"Bprime", d.Bprime}};
    result["defect"] = linfty::hermite_defect(d);
    const auto hyp = linfty::exact1d::hyperbola_constants(d);
    result["hyperbola"] = {{"c0", hyp.c0}, {"c1", hyp.c1}, {"c2", hyp.c2}};

    const auto am = linfty::exact1d::absolute_minimiser(d, spec);
    json mj;
    mj["type"] = am.xi ? "two_piece" : "quadratic";
    mj["left_curvature"] = am.left_curvature;
    mj["right_curvature"] = am.right_curvature;
    if (am.xi) mj["xi"] = *am.xi;
    mj["energy"] = am.energy;
    mj["piecewise"] = linfty::io::to_json(am.u);
    result["minimiser"] = std::move(mj);

    const fs::path dir = args.out.dir();
    write_with_sidecar(dir / "exact1d_samples.csv",
                       sample_csv([&](double x, int order) {
                           return linfty::eval_piecewise_quadratic(am.u, x, order);
                       }, d.a, d.b, args.samples),
                       "exact1d", config);

    if (args.p) {
        config["p"] = *args.p;
        const auto sol = linfty::exact1d::p_exact_solution(d, *args.p);
        json pj;
        pj["p"] = sol.p;
        pj["branch"] = sol.critical ? "critical" : "non_critical";
        if (!sol.critical) {
            pj["lambda"] = sol.lambda;
            pj["mu"] = sol.mu;
            const auto res = sol.system_residual();
            pj["system_residual"] = {res[0], res[1]};
            if (const auto s = sol.singular_point()) pj["singular_point"] = *s;
        }
        pj["boundary_residual"] = sol.boundary_residual();
        result["p_solution"] = std::move(pj);
        write_with_sidecar(dir / ("p_exact_samples_p" + std::to_string(*args.p) + ".csv"),
                           sample_csv([&](double x, int order) {
                               return order == 0 ? sol.value(x)
                                      : order == 1 ? sol.derivative(x) : sol.second(x);
                           }, d.a, d.b, args.samples),
                           "exact1d", config);
    }

    if (args.level) {
        config["level"] = *args.level;
        const auto feas = linfty::exact1d::feasible_level(d, *args.level);
        json fj;
        fj["feasible"] = feas.feasible;
        fj["margin_right"] = feas.margin_right;
        fj["margin_left"] = feas.margin_left;
        result["feasibility"] = std::move(fj);
        if (feas.feasible) {
            const auto cps = linfty::exact1d::critical_point_solution(d, *args.level);
            json cj;
            cj["C"] = cps.C;
            cj["xc"] = cps.xc;
            cj["yc"] = cps.yc;
            cj["K"] = cps.K;
            cj["L"] = cps.L;
            cj["piecewise"] = linfty::io::to_json(cps.u);
            const auto lc = linfty::residuals::dsolution_levelcheck(cps.u, spec, 1e-9);
            cj["levelcheck"] = {{"passes", lc.passes}, {"level", lc.level},
                                {"max_deviation", lc.max_deviation},
                                {"sign_pattern", lc.sign_pattern}};
            result["critical_point"] = std::move(cj);
            write_with_sidecar(dir / "critical_point_samples.csv",
                               sample_csv([&](double x, int order) {
                                   return linfty::eval_piecewise_quadratic(cps.u, x, order);
                               }, d.a, d.b, args.samples),
                               "exact1d", config);
        }
    }

    write_with_sidecar(dir / "exact1d_result.json", json(result).dump(2) + "\n", "exact1d",
                       config);
    std::cout << result.dump(2) << "\n";
    return 0;
}

// ---- solve1d ---------------------------------------------------------------

struct Solve1DArgs {
    DataArgs data;
    std::vector<int> schedule{2, 4, 12, 42, 202};
    int m = 256;
    double tol = 1e-9;
    int max_iterations = 120;
    int samples_per_element = 4;
    CommonOut out;
};

int run_solve1d(const Solve1DArgs& args) {
    const auto d = args.data.resolve();
    json config = args.data.echo();
    config["schedule"] = args.schedule;
    config["m"] = args.m;
    config["tol"] = args.tol;

    linfty::solver1d::ContinuationSchedule sched;
    sched.exponents = args.schedule;
    sched.newton_tolerance = args.tol;
    sched.max_iterations = args.max_iterations;
    sched.validate();
    const linfty::solver1d::Mesh1D mesh{d.a, d.b, args.m};
    const auto stages = linfty::solver1d::p_continuation(d, sched, mesh);

    const fs::path dir = args.out.dir();
    json reports = json::array();
    bool all_converged = true;
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const int p = sched.exponents[k];
        const auto& st = stages[k];
        all_converged = all_converged && st.report.converged;
        json r = linfty::io::to_json(st.report);
        r["p"] = p;
        reports.push_back(std::move(r));

        std::string csv = "x,u,du,d2u\n";
        const int samples = args.m * args.samples_per_element + 1;
        for (int i = 0; i < samples; ++i) {
            const double x = d.a + (d.b - d.a) * i / (samples - 1);
            csv += linfty::io::format_double(x);
            csv += ',';
            csv += linfty::io::format_double(st.state.value(x));
            csv += ',';
            csv += linfty::io::format_double(st.state.derivative(x));
            csv += ',';
            csv += linfty::io::format_double(st.state.second(x));
            csv += '\n';
        }
        write_with_sidecar(dir / ("stage_p" + std::to_string(p) + ".csv"), csv, "solve1d",
                           config);
    }
    json top;
    top["stages"] = std::move(reports);
    top["completed"] = stages.size();
    top["requested"] = sched.exponents.size();
    write_with_sidecar(dir / "solve1d_report.json", top.dump(2) + "\n", "solve1d", config);
    std::cout << top.dump(2) << "\n";
    return all_converged && stages.size() == sched.exponents.size() ? 0 : 1;
}

// ---- solve2d ---------------------------------------------------------------

struct Solve2DArgs {
    std::string builtin;
    std::vector<double> quad;
    std::vector<int> schedule{4, 12, 42};
    int n = 65;
    double tol = 1e-9;
    bool xyz = false;
    CommonOut out;
};

int run_solve2d(const Solve2DArgs& args) {
    linfty::solver2d::BoundaryData2D g;
    json config;
    if (!args.builtin.empty()) {
        if (args.builtin != "test2")
            throw CLI::ValidationError("--builtin", "unknown builtin '" + args.builtin + "'");
        g = linfty::solver2d::test2_data();
        config["builtin"] = args.builtin;
    } else if (args.quad.size() == 6) {
        std::array<double, 6> c;
        std::copy(args.quad.begin(), args.quad.end(), c.begin());
        g = linfty::solver2d::quadratic_data(c);
        config["quad"] = args.quad;
    } else {
        throw CLI::ValidationError("--quad", "need --builtin test2 or --quad with six coefficients");
    }
    config["schedule"] = args.schedule;
    config["n"] = args.n;

    const linfty::solver2d::Grid2D grid{args.n};
    linfty::solver2d::SolverOptions opts;
    opts.newton_tolerance = args.tol;

    const fs::path dir = args.out.dir();
    json metrics = json::array();
    const linfty::ScalarField* init = nullptr;
    std::optional<linfty::ScalarField> keep;
    for (int p : args.schedule) {
        const auto r = linfty::solver2d::solve_p_2d(g, p, grid, init, opts);
        const auto lap = linfty::solver2d::laplacian_field(r.u);
        const auto met = linfty::solver2d::interface_metrics(lap);

        json entry = linfty::io::to_json(met);
        entry["p"] = p;
        entry["report"] = linfty::io::to_json(r.report);
        metrics.push_back(std::move(entry));

        write_with_sidecar(dir / ("u_p" + std::to_string(p) + ".csv"),
                           linfty::io::to_csv(r.u), "solve2d", config);
        write_with_sidecar(dir / ("lap_p" + std::to_string(p) + ".csv"),
                           linfty::io::to_csv(lap), "solve2d", config);
        if (args.xyz) {
            std::string xyz = "x,y,u\n";
            for (int i = 0; i < grid.n; ++i)
                for (int j = 0; j < grid.n; ++j) {
                    xyz += linfty::io::format_double(grid.coord(i));
                    xyz += ',';
                    xyz += linfty::io::format_double(grid.coord(j));
                    xyz += ',';
                    xyz += linfty::io::format_double(r.u.at(i, j));
                    xyz += '\n';
                }
            write_with_sidecar(dir / ("xyz_p" + std::to_string(p) + ".csv"), xyz, "solve2d",
                               config);
        }
        keep = r.u;
        init = &*keep;
    }
    json top;
    top["stages"] = std::move(metrics);
    write_with_sidecar(dir / "interface_metrics.json", top.dump(2) + "\n", "solve2d", config);
    std::cout << top.dump(2) << "\n";
    return 0;
}

// ---- residual ---------------------------------------------------------------

struct ResidualArgs {
    std::string input;
    double spacing = 0.0;
    std::vector<double> origin{0.0, 0.0};
    std::string spec = "sq";
    double tol = 1e-6;
    CommonOut out;
};

int run_residual(const ResidualArgs& args) {
    linfty::ScalarField field = [&] {
        const fs::path path = args.input;
        if (path.extension() == ".json")
            return linfty::io::scalar_field_from_json(linfty::io::read_json(path));
        if (args.spacing <= 0.0)
            throw CLI::ValidationError("--spacing", "CSV input requires a positive --spacing");
        return linfty::io::scalar_field_from_csv(linfty::io::read_text(path), args.spacing,
                                                 args.origin[0],
                                                 args.origin.size() > 1 ? args.origin[1] : 0.0);
    }();
    const auto spec = resolve_spec(args.spec, field.dimension);
    json config;
    config["input"] = args.input;
    config["spec"] = spec_echo(args.spec);
    config["tol"] = args.tol;

    const auto src = linfty::residuals::DerivativeSource::sampled(field);
    // Pointwise expanded residual where the stencil fits (margin 2).
    std::vector<double> rvals;
    int rows = 1, cols = 0;
    if (field.dimension == 1) {
        cols = field.shape[0] - 4;
        if (cols < 1) throw std::runtime_error("residual: field too small for the stencil");
        for (int i = 2; i + 2 < field.shape[0]; ++i)
            rvals.push_back(linfty::residuals::residual_a2inf(
                src.jet({field.coord0(i)}), spec));
    } else {
        rows = field.shape[0] - 4;
        cols = field.shape[1] - 4;
        if (rows < 1 || cols < 1) throw std::runtime_error("residual: field too small");
        for (int i = 2; i + 2 < field.shape[0]; ++i)
            for (int j = 2; j + 2 < field.shape[1]; ++j)
                rvals.push_back(linfty::residuals::residual_a2inf(
                    src.jet({field.coord0(i), field.coord1(j)}), spec));
    }
    linfty::ScalarField rfield =
        field.dimension == 1
            ? linfty::ScalarField::make_1d(cols, field.spacing[0],
                                           field.origin[0] + 2 * field.spacing[0], rvals)
            : linfty::ScalarField::make_2d(rows, cols, field.spacing[0], field.spacing[1],
                                           field.origin[0] + 2 * field.spacing[0],
                                           field.origin[1] + 2 * field.spacing[1], rvals);

    double max_abs = 0.0;
    std::vector<double> mags;
    for (double v : rvals) {
        max_abs = std::max(max_abs, std::fabs(v));
        mags.push_back(std::fabs(v));
    }
    std::sort(mags.begin(), mags.end());
    const double median_abs = mags.size() % 2 == 1
                                  ? mags[mags.size() / 2]
                                  : 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);

    const auto lc = linfty::residuals::dsolution_levelcheck(field, spec, args.tol);
    json summary;
    summary["max_abs"] = max_abs;
    summary["median_abs"] = median_abs;
    summary["levelcheck"] = {{"passes", lc.passes}, {"level", lc.level},
                             {"max_deviation", lc.max_deviation}};

    const fs::path dir = args.out.dir();
    write_with_sidecar(dir / "residual_field.csv", linfty::io::to_csv(rfield), "residual",
                       config);
    write_with_sidecar(dir / "residual_summary.json", summary.dump(2) + "\n", "residual",
                       config);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const std::string& suite, const CommonOut& out) {
    const auto rep = linfty::verify::run_suite(suite);
    json j;
    j["suite"] = rep.suite;
    j["passed"] = rep.passed;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["measured"] = c.measured;
        cj["threshold"] = c.threshold;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    json config;
    config["suite"] = suite;
    write_with_sidecar(out.dir() / ("verify_" + suite + ".json"), j.dump(2) + "\n", "verify",
                       config);
    std::cout << j.dump(2) << "\n";
    return rep.passed ? 0 : 1;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    DataArgs data;
    std::vector<int> p_list{4, 12, 42};
    std::vector<int> m_list{64, 128};
    double tol = 1e-9;
    CommonOut out;
};

int run_sweep(const SweepArgs& args) {
    const auto d = args.data.resolve();
    json config = args.data.echo();
    config["p_list"] = args.p_list;
    config["m_list"] = args.m_list;

    json runs = json::array();
    bool ok = true;
    for (int m : args.m_list) {
        for (int p : args.p_list) {
            // Each run is an isolated continuation 2 -> ... -> p.
            linfty::solver1d::ContinuationSchedule sched;
            for (int e = 2; e < p; e = std::max(e + 2, static_cast<int>(e * 1.6) / 2 * 2))
                sched.exponents.push_back(e);
            sched.exponents.push_back(p);
            sched.newton_tolerance = args.tol;
            const linfty::solver1d::Mesh1D mesh{d.a, d.b, m};
            json entry;
            entry["p"] = p;
            entry["m"] = m;
            try {
                const auto stages = linfty::solver1d::p_continuation(d, sched, mesh);
                const auto& fin = stages.back();
                entry["report"] = linfty::io::to_json(fin.report);
                ok = ok && fin.report.converged;
                const fs::path sub = args.out.dir() / ("sweep_p" + std::to_string(p) + "_m" +
                                                       std::to_string(m));
                fs::create_directories(sub);
                std::string csv = "x,u,du,d2u\n";
                const int samples = 4 * m + 1;
                for (int i = 0; i < samples; ++i) {
                    const double x = d.a + (d.b - d.a) * i / (samples - 1);
                    csv += linfty::io::format_double(x);
                    csv += ',';
                    csv += linfty::io::format_double(fin.state.value(x));
                    csv += ',';
                    csv += linfty::io::format_double(fin.state.derivative(x));
                    csv += ',';
                    csv += linfty::io::format_double(fin.state.second(x));
                    csv += '\n';
                }
                write_with_sidecar(sub / "solution.csv", csv, "sweep", config);
            } catch (const std::exception& e) {
                entry["error"] = e.what();
                ok = false;
            }
            runs.push_back(std::move(entry));
        }
    }
    json top;
    top["runs"] = std::move(runs);
    write_with_sidecar(args.out.dir() / "sweep_summary.json", top.dump(2) + "\n", "sweep",
                       config);
    std::cout << top.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvers and checkers for second-order sup-norm variational problems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Exact1DArgs exact_args;
    exact_args.out.out_dir = default_out_dir();
    auto* exact = app.add_subcommand("exact1d", "closed-form 1D constructions");
    add_data_options(exact, exact_args.data);
    exact->add_option("--spec", exact_args.spec, "integrand: sq, asym, proj=<alpha>");
    exact->add_option("--samples", exact_args.samples, "CSV sample count")->check(CLI::Range(2, 1 << 20));
    exact->add_option("--p", exact_args.p, "also solve the p-bilaplacian (even p)");
    exact->add_option("--level", exact_args.level, "also build the fixed-level solution");
    exact->add_option("--out", exact_args.out.out_dir, "output directory");

    Solve1DArgs s1_args;
    s1_args.out.out_dir = default_out_dir();
    auto* s1 = app.add_subcommand("solve1d", "1D p-bilaplacian continuation solver");
    add_data_options(s1, s1_args.data);
    s1->add_option("--schedule", s1_args.schedule, "even exponents, increasing")->delimiter(',');
    s1->add_option("--m", s1_args.m, "element count");
    s1->add_option("--tol", s1_args.tol, "Newton tolerance (relative)");
    s1->add_option("--max-iterations", s1_args.max_iterations, "Newton iteration cap");
    s1->add_option("--samples-per-element", s1_args.samples_per_element, "CSV resolution");
    s1->add_option("--out", s1_args.out.out_dir, "output directory");

    Solve2DArgs s2_args;
    s2_args.out.out_dir = default_out_dir();
    auto* s2 = app.add_subcommand("solve2d", "2D p-bilaplacian solver on [-1,1]^2");
    auto* b2 = s2->add_option("--builtin", s2_args.builtin, "named data set (test2)");
    auto* q2 = s2->add_option("--quad", s2_args.quad,
                              "quadratic boundary coefficients c20,c11,c02,c10,c01,c00")
                   ->delimiter(',')->expected(6);
    b2->excludes(q2);
    q2->excludes(b2);
    s2->add_option("--schedule", s2_args.schedule, "even exponents, increasing")->delimiter(',');
    s2->add_option("--n", s2_args.n, "nodes per side");
    s2->add_option("--tol", s2_args.tol, "Newton tolerance (relative)");
    s2->add_flag("--xyz", s2_args.xyz, "emit contour-ready x,y,u triplets");
    s2->add_option("--out", s2_args.out.out_dir, "output directory");

    ResidualArgs r_args;
    r_args.out.out_dir = default_out_dir();
    auto* rc = app.add_subcommand("residual", "pointwise operator residual of a sampled field");
    rc->add_option("--input", r_args.input, "field file (.csv or .json)")->required();
    rc->add_option("--spacing", r_args.spacing, "grid spacing for CSV input");
    rc->add_option("--origin", r_args.origin, "grid origin for CSV input")->delimiter(',');
    rc->add_option("--spec", r_args.spec, "integrand: sq, full, proj=<entries>");
    rc->add_option("--tol", r_args.tol, "level-check tolerance");
    rc->add_option("--out", r_args.out.out_dir, "output directory");

    std::string suite;
    CommonOut v_out;
    v_out.out_dir = default_out_dir();
    auto* vc = app.add_subcommand("verify", "run a named invariant suite");
    vc->add_option("--suite", suite, "one of: residual-identities, exact1d-oracle, dsolution, "
                                     "energy-limit, flow-identity")->required();
    vc->add_option("--out", v_out.out_dir, "output directory");

    SweepArgs sw_args;
    sw_args.out.out_dir = default_out_dir();
    auto* sw = app.add_subcommand("sweep", "independent 1D solves over p and mesh lists");
    add_data_options(sw, sw_args.data);
    sw->add_option("--p-list", sw_args.p_list, "target exponents")->delimiter(',');
    sw->add_option("--m-list", sw_args.m_list, "mesh sizes")->delimiter(',');
    sw->add_option("--tol", sw_args.tol, "Newton tolerance (relative)");
    sw->add_option("--out", sw_args.out.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are a usage error
    }

    try {
        if (exact->parsed()) return run_exact1d(exact_args);
        if (s1->parsed()) return run_solve1d(s1_args);
        if (s2->parsed()) return run_solve2d(s2_args);
        if (rc->parsed()) return run_residual(r_args);
        if (vc->parsed()) return run_verify(suite, v_out);
        if (sw->parsed()) return run_sweep(sw_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
    return 2;
}
