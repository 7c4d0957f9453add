#include "linfty/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "linfty/linalg.hpp"

namespace linfty::solver1d {

namespace {

// Gauss-Legendre rules on [0, 1], indexed by point count 2..8.
struct GaussRule {
    std::vector<double> s;
    std::vector<double> w;
};

const GaussRule& gauss_rule(int npts) {
    static const std::vector<GaussRule> rules = [] {
        std::vector<GaussRule> r(9);
        auto fill = [&](int n, std::initializer_list<double> xs, std::initializer_list<double> ws) {
            GaussRule g;
            auto wi = ws.begin();
            for (double x : xs) {
                const double ww = *wi++;
                if (x == 0.0) {
                    g.s.push_back(0.5);
                    g.w.push_back(0.5 * ww);
                } else {
                    g.s.push_back(0.5 * (1.0 - x));
                    g.w.push_back(0.5 * ww);
                    g.s.push_back(0.5 * (1.0 + x));
                    g.w.push_back(0.5 * ww);
                }
            }
            r[n] = std::move(g);
        };
        fill(2, {0.5773502691896257645}, {1.0});
        fill(3, {0.0, 0.7745966692414833770}, {0.8888888888888888889, 0.5555555555555555556});
        fill(4, {0.3399810435848562648, 0.8611363115940525752},
             {0.6521451548625461426, 0.3478548451374538574});
        fill(5, {0.0, 0.5384693101056830910, 0.9061798459386639928},
             {0.5688888888888888889, 0.4786286704993664680, 0.2369268850561890875});
        fill(6, {0.2386191860831969087, 0.6612093864662645137, 0.9324695142031520278},
             {0.4679139345726910474, 0.3607615730481386076, 0.1713244923791703450});
        fill(7, {0.0, 0.4058451513773971669, 0.7415311855993944399, 0.9491079123427585245},
             {0.4179591836734693878, 0.3818300505051189450, 0.2797053914892766679,
              0.1294849661688696933});
        fill(8, {0.1834346424956498049, 0.5255324099163289858, 0.7966664774136267395,
                 0.9602898564975362317},
             {0.3626837833783619830, 0.3137066458778872873, 0.2223810344533744705,
              0.1012285362903762592});
        return r;
    }();
    return rules[std::clamp(npts, 2, 8)];
}

// Exact up to p = 15; beyond that the 8-point cap applies and accuracy is
// controlled by mesh refinement.
int quad_points(int p) { return std::clamp(p / 2 + 1, 2, 8); }

// z^k for integer k >= 0 by squaring (deterministic, no libm).
double ipow(double z, int k) {
    double r = 1.0, base = z;
    for (; k > 0; k >>= 1) {
        if (k & 1) r *= base;
        base *= base;
    }
    return r;
}

// Second-derivative factors of the cubic Hermite basis at local coordinate s:
// u''(x) = sum_a c_a * basis2[a] / h^2 with c = (v_i, h d_i, v_{i+1}, h d_{i+1})
// folded as below (the h factors are carried explicitly).
void basis_second(double s, double h, double out[4]) {
    out[0] = -6.0 + 12.0 * s;
    out[1] = h * (-4.0 + 6.0 * s);
    out[2] = 6.0 - 12.0 * s;
    out[3] = h * (-2.0 + 6.0 * s);
}

struct Assembly {
    std::vector<double> gradient;   // per unknown DOF
    std::vector<double> abs_scale;  // same sums with absolute terms
    double energy_scaled = 0.0;     // sum_el int |u''/gamma|^p
    double diag_max = 0.0;          // largest Hessian diagonal entry
};

int unknown_index(int global, int total) {
    // Unknowns are the global DOFs 2 .. total-3 (clamped ends fixed).
    if (global < 2 || global >= total - 2) return -1;
    return global - 2;
}

double second_at_quad(const HermiteState& u, int el, double s) {
    const double h = u.mesh.h();
    double B[4];
    basis_second(s, h, B);
    const double c[4] = {u.values[el], u.derivs[el], u.values[el + 1], u.derivs[el + 1]};
    return (c[0] * B[0] + c[1] * B[1] + c[2] * B[2] + c[3] * B[3]) / (h * h);
}

Assembly assemble_gradient(const HermiteState& u, int p, double gamma, BandMatrix* hess) {
    const Mesh1D& mesh = u.mesh;
    const int total = 2 * (mesh.m + 1);
    const int nu = total - 4;
    Assembly out;
    out.gradient.assign(nu, 0.0);
    out.abs_scale.assign(nu, 0.0);
    if (hess) hess->clear();

    const GaussRule& rule = gauss_rule(quad_points(p));
    const double h = mesh.h();
    for (int el = 0; el < mesh.m; ++el) {
        const int gdof[4] = {2 * el, 2 * el + 1, 2 * el + 2, 2 * el + 3};
        for (std::size_t q = 0; q < rule.s.size(); ++q) {
            const double s = rule.s[q];
            double B[4];
            basis_second(s, h, B);
            const double z = second_at_quad(u, el, s) / gamma;
            const double zp2 = ipow(z, p - 2);  // even power, >= 0
            out.energy_scaled += h * rule.w[q] * zp2 * z * z;
            const double gfac = h * rule.w[q] * p * zp2 * z / (gamma * h * h);
            const double hfac = h * rule.w[q] * p * (p - 1) * zp2 / (gamma * gamma * h * h * h * h);
            for (int a = 0; a < 4; ++a) {
                const int ia = unknown_index(gdof[a], total);
                if (ia < 0) continue;
                out.gradient[ia] += gfac * B[a];
                out.abs_scale[ia] += std::fabs(gfac) * std::fabs(B[a]);
                if (hess) {
                    for (int b = 0; b <= a; ++b) {
                        const int ib = unknown_index(gdof[b], total);
                        if (ib < 0) continue;
                        hess->at(ia, ib) += hfac * B[a] * B[b];
                        if (ia == ib) out.diag_max = std::max(out.diag_max, hess->at(ia, ib));
                    }
                }
            }
        }
    }
    return out;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double scaled_energy(const HermiteState& u, int p, double gamma) {
    const GaussRule& rule = gauss_rule(quad_points(p));
    const double h = u.mesh.h();
    double e = 0.0;
    for (int el = 0; el < u.mesh.m; ++el)
        for (std::size_t q = 0; q < rule.s.size(); ++q) {
            const double z = second_at_quad(u, el, rule.s[q]) / gamma;
            e += h * rule.w[q] * ipow(z, p);
        }
    return e;
}

double curvature_scale(const HermiteState& u, int p) {
    const GaussRule& rule = gauss_rule(quad_points(p));
    double gamma = 0.0;
    for (int el = 0; el < u.mesh.m; ++el)
        for (double s : rule.s) gamma = std::max(gamma, std::fabs(second_at_quad(u, el, s)));
    return gamma > 0.0 ? gamma : 1.0;
}

struct StageOutcome {
    SolveResult result;
    bool ok = true;
    std::string message;
};

StageOutcome solve_stage(const HermiteData1D& d, int p, const Mesh1D& mesh,
                         const HermiteState* init, const SolverOptions& opts) {
    d.validate();
    mesh.validate();
    if (p < 2 || p % 2 != 0)
        throw std::invalid_argument("solve_p_1d: p must be an even integer >= 2");
    if (std::fabs(mesh.a - d.a) > 1e-12 || std::fabs(mesh.b - d.b) > 1e-12)
        throw std::invalid_argument("solve_p_1d: mesh must cover the data interval");

    HermiteState u;
    u.mesh = mesh;
    u.values.resize(mesh.m + 1);
    u.derivs.resize(mesh.m + 1);
    if (init) {
        for (int i = 0; i <= mesh.m; ++i) {
            const double x = mesh.node(i);
            u.values[i] = init->value(x);
            u.derivs[i] = init->derivative(x);
        }
    } else {
        // Cubic Hermite interpolant of the data as the cold start.
        const auto c = cubic_hermite(d);
        for (int i = 0; i <= mesh.m; ++i) {
            const double x = mesh.node(i);
            u.values[i] = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
            u.derivs[i] = c[1] + x * (2.0 * c[2] + x * 3.0 * c[3]);
        }
    }
    // Clamped end conditions, imposed bit-exactly.
    u.values.front() = d.A;
    u.derivs.front() = d.Aprime;
    u.values.back() = d.B;
    u.derivs.back() = d.Bprime;

    const int nu = 2 * (mesh.m + 1) - 4;
    const double gamma = curvature_scale(u, p);
    BandMatrix hess(nu, 3);

    Assembly asm0 = assemble_gradient(u, p, gamma, &hess);
    double res = inf_norm(asm0.gradient);
    // Floor at the assembly roundoff scale so warm starts that are already
    // optimal register as converged.
    const double tol = std::max(opts.newton_tolerance * res, 1e-10 * inf_norm(asm0.abs_scale));
    double energy = asm0.energy_scaled;
    double mu = 0.0;

    SolveReport report;
    report.tolerance = tol;
    int it = 0;
    std::string failure;
    while (res > tol && it < opts.max_iterations) {
        ++it;
        std::vector<double> step(asm0.gradient);
        for (double& g : step) g = -g;

        // Levenberg loop: shift until the factorisation holds and a step
        // decreasing the energy exists.
        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            BandMatrix shifted = hess;
            if (mu > 0.0) shifted.shift_diagonal(mu);
            if (!shifted.factorize()) {
                mu = std::max(mu * 10.0, 1e-14 * asm0.diag_max);
                continue;
            }
            std::vector<double> delta = step;
            shifted.solve(delta);
            double t = 1.0;
            for (int half = 0; half < 30; ++half) {
                HermiteState trial = u;
                for (int k = 0; k < nu; ++k) {
                    const int g = k + 2;
                    if (g % 2 == 0)
                        trial.values[g / 2] += t * delta[k];
                    else
                        trial.derivs[g / 2] += t * delta[k];
                }
                const double etrial = scaled_energy(trial, p, gamma);
                if (etrial <= energy * (1.0 + 1e-14)) {
                    u = std::move(trial);
                    energy = etrial;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (accepted) {
                // Trust-region-style shift update: full steps relax the
                // shift, damped steps tighten it (flat directions near
                // u'' = 0 otherwise bounce the line search).
                if (t == 1.0)
                    mu *= 0.3;
                else if (t >= 0.25)
                    mu = std::max(mu * 2.0, 1e-13 * asm0.diag_max);
                else
                    mu = std::max(mu * 8.0, 1e-12 * asm0.diag_max);
                if (mu < 1e-300) mu = 0.0;
            } else {
                mu = std::max(mu * 100.0, 1e-12 * asm0.diag_max);
            }
        }
        if (!accepted) {
            failure = "Levenberg exhausted without an energy-decreasing step";
            break;
        }
        asm0 = assemble_gradient(u, p, gamma, &hess);
        res = inf_norm(asm0.gradient);
        energy = asm0.energy_scaled;
    }

    report.iterations = it;
    report.final_residual = res;
    report.converged = res <= tol && failure.empty();
    report.energy = gamma * std::pow(std::max(energy, 0.0), 1.0 / p);
    const ScalarField d2 = u.second_derivative_field();
    report.breaks = detect_breaks(d2);

    StageOutcome out{SolveResult{std::move(u), report}, true, {}};
    if (!report.converged) {
        out.ok = false;
        std::ostringstream os;
        os << "solve_p_1d: Newton did not converge at p = " << p << " after " << it
           << " iterations (residual " << res << ", tolerance " << tol << ")";
        if (!failure.empty()) os << ": " << failure;
        out.message = os.str();
    }
    return out;
}

}  // namespace

void Mesh1D::validate() const {
    if (!(a < b)) throw std::invalid_argument("Mesh1D: requires a < b");
    if (m < 4) throw std::invalid_argument("Mesh1D: requires at least 4 elements");
}

void ContinuationSchedule::validate() const {
    if (exponents.empty() || exponents.front() != 2)
        throw std::invalid_argument("ContinuationSchedule: first exponent must be 2");
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] % 2 != 0)
            throw std::invalid_argument("ContinuationSchedule: exponents must be even");
        if (i > 0 && exponents[i] <= exponents[i - 1])
            throw std::invalid_argument("ContinuationSchedule: exponents must be increasing");
    }
}

double HermiteState::value(double x) const {
    const double h = mesh.h();
    const int el = std::clamp(static_cast<int>((x - mesh.a) / h), 0, mesh.m - 1);
    const double s = (x - mesh.node(el)) / h;
    const double s2 = s * s, s3 = s2 * s;
    return values[el] * (1.0 - 3.0 * s2 + 2.0 * s3) + h * derivs[el] * (s - 2.0 * s2 + s3) +
           values[el + 1] * (3.0 * s2 - 2.0 * s3) + h * derivs[el + 1] * (s3 - s2);
}

double HermiteState::derivative(double x) const {
    const double h = mesh.h();
    const int el = std::clamp(static_cast<int>((x - mesh.a) / h), 0, mesh.m - 1);
    const double s = (x - mesh.node(el)) / h;
    const double s2 = s * s;
    return (values[el] * (-6.0 * s + 6.0 * s2) + h * derivs[el] * (1.0 - 4.0 * s + 3.0 * s2) +
            values[el + 1] * (6.0 * s - 6.0 * s2) + h * derivs[el + 1] * (3.0 * s2 - 2.0 * s)) / h;
}

double HermiteState::second(double x) const {
    const double h = mesh.h();
    const int el = std::clamp(static_cast<int>((x - mesh.a) / h), 0, mesh.m - 1);
    const double s = (x - mesh.node(el)) / h;
    double B[4];
    basis_second(s, h, B);
    return (values[el] * B[0] + derivs[el] * B[1] + values[el + 1] * B[2] + derivs[el + 1] * B[3]) /
           (h * h);
}

ScalarField HermiteState::second_derivative_field(int samples_per_element) const {
    if (samples_per_element < 1)
        throw std::invalid_argument("second_derivative_field: need >= 1 sample per element");
    const double h = mesh.h();
    const double hs = h / samples_per_element;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(mesh.m) * samples_per_element);
    for (int el = 0; el < mesh.m; ++el)
        for (int j = 0; j < samples_per_element; ++j) {
            const double x = mesh.node(el) + (j + 0.5) * hs;
            vals.push_back(second(x));
        }
    const int nvals = static_cast<int>(vals.size());
    return ScalarField::make_1d(nvals, hs, mesh.a + 0.5 * hs, std::move(vals));
}

SolveResult solve_p_1d(const HermiteData1D& d, int p, const Mesh1D& mesh,
                       const HermiteState* init, const SolverOptions& opts) {
    StageOutcome out = solve_stage(d, p, mesh, init, opts);
    if (!out.ok) throw std::runtime_error(out.message);
    return std::move(out.result);
}

std::vector<SolveResult> p_continuation(const HermiteData1D& d, const ContinuationSchedule& sched,
                                        const Mesh1D& mesh) {
    sched.validate();
    SolverOptions opts;
    opts.newton_tolerance = sched.newton_tolerance;
    opts.max_iterations = sched.max_iterations;
    std::vector<SolveResult> stages;
    const HermiteState* init = nullptr;
    for (int p : sched.exponents) {
        StageOutcome out = solve_stage(d, p, mesh, init, opts);
        stages.push_back(std::move(out.result));
        if (!out.ok) break;  // partial results retained
        init = &stages.back().state;
    }
    return stages;
}

std::vector<BreakMetric> detect_breaks(const ScalarField& second_derivative,
                                       double threshold_factor) {
    if (second_derivative.dimension != 1)
        throw std::invalid_argument("detect_breaks: needs a 1D field");
    const int n = second_derivative.shape[0];
    const double hs = second_derivative.spacing[0];
    const auto& v = second_derivative.values;

    std::vector<double> mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::fabs(v[i]);
    std::sort(mags.begin(), mags.end());
    const double med = mags.size() % 2 == 1 ? mags[mags.size() / 2]
                                            : 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);
    if (med == 0.0) return {};
    const double threshold = threshold_factor * med;

    // Zero crossings, merged into clusters within the masking window.
    const int window = std::max(2, n / 64);
    std::vector<std::pair<int, double>> crossings;  // (index, interpolated x)
    for (int i = 0; i + 1 < n; ++i) {
        if ((v[i] > 0.0 && v[i + 1] < 0.0) || (v[i] < 0.0 && v[i + 1] > 0.0)) {
            const double x = second_derivative.coord0(i) + hs * v[i] / (v[i] - v[i + 1]);
            crossings.emplace_back(i, x);
        }
    }
    std::vector<std::vector<std::pair<int, double>>> clusters;
    for (const auto& c : crossings) {
        if (!clusters.empty() && c.first - clusters.back().back().first <= window)
            clusters.back().push_back(c);
        else
            clusters.push_back({c});
    }

    auto range_median = [&](int lo, int hi) {  // samples [lo, hi)
        std::vector<double> seg(v.begin() + lo, v.begin() + hi);
        std::sort(seg.begin(), seg.end());
        return seg.size() % 2 == 1 ? seg[seg.size() / 2]
                                   : 0.5 * (seg[seg.size() / 2 - 1] + seg[seg.size() / 2]);
    };

    std::vector<BreakMetric> breaks;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const auto& cl = clusters[k];
        const int i_mid = cl[cl.size() / 2].first;
        const double x_mid = cl[cl.size() / 2].second;
        const int left_stop = k > 0 ? clusters[k - 1].back().first + window : 0;
        const int right_start = k + 1 < clusters.size() ? clusters[k + 1].front().first - window : n;
        const int lo = std::max(left_stop, 0);
        const int hi = std::min(right_start, n);
        const int l_end = std::max(lo + 1, i_mid - window);
        const int r_begin = std::min(hi - 1, i_mid + 1 + window);
        if (l_end <= lo || r_begin >= hi) continue;  // no plateau room
        BreakMetric b;
        b.location = x_mid;
        b.left_value = range_median(lo, l_end);
        b.right_value = range_median(r_begin, hi);
        b.jump = std::fabs(b.right_value - b.left_value);
        if (b.jump > threshold) breaks.push_back(b);
    }
    return breaks;
}

double discrete_energy(const HermiteState& u, int p) {
    const double gamma = curvature_scale(u, p);
    return gamma * std::pow(std::max(scaled_energy(u, p, gamma), 0.0), 1.0 / p);
}

}  // namespace linfty::solver1d
