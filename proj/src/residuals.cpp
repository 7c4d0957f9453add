#include "linfty/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linfty::residuals {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void JetSample::validate() const {
    if (n < 1) throw std::invalid_argument("JetSample: n must be >= 1");
    if (hessian.size() != static_cast<std::size_t>(n) * n ||
        third.size() != static_cast<std::size_t>(n) * n * n)
        throw std::invalid_argument("JetSample: tensor sizes do not match n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double scale = std::max(1.0, std::fabs(hess(i, j)));
            if (std::fabs(hess(i, j) - hess(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("JetSample: hessian must be symmetric");
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double ref = d3(i, j, k);
                const double scale = std::max(1.0, std::fabs(ref));
                if (std::fabs(d3(i, k, j) - ref) > 1e-12 * scale ||
                    std::fabs(d3(j, i, k) - ref) > 1e-12 * scale ||
                    std::fabs(d3(k, j, i) - ref) > 1e-12 * scale)
                    throw std::invalid_argument("JetSample: third tensor must be symmetric");
            }
}

// ---------------------------------------------------------------------------
// DerivativeSource
// ---------------------------------------------------------------------------

DerivativeSource DerivativeSource::analytic(int n, ValueFn value, double fd_step) {
    if (n < 1 || n > 3) throw std::invalid_argument("DerivativeSource: n must be 1..3");
    if (!value) throw std::invalid_argument("DerivativeSource: value callable required");
    DerivativeSource s;
    s.n_ = n;
    s.value_ = std::move(value);
    s.fd_step_ = fd_step;
    return s;
}

DerivativeSource DerivativeSource::analytic_with_jets(int n, ValueFn value, HessFn hessian,
                                                      ThirdFn third, double fd_step) {
    DerivativeSource s = analytic(n, std::move(value), fd_step);
    s.hess_ = std::move(hessian);
    s.third_ = std::move(third);
    return s;
}

DerivativeSource DerivativeSource::sampled(ScalarField field) {
    field.validate();
    DerivativeSource s;
    s.n_ = field.dimension;
    s.fd_step_ = field.spacing[0];
    s.field_ = std::move(field);
    return s;
}

double DerivativeSource::step() const { return fd_step_; }

namespace {

// Nodal accessor for a sampled field with out-of-range checks deferred to
// the caller via the margin argument.
struct NodeView {
    const ScalarField& f;
    std::vector<int> idx;

    double at(int di, int dj = 0) const {
        if (f.dimension == 1) return f.at(idx[0] + di);
        return f.at(idx[0] + di, idx[1] + dj);
    }
};

std::vector<int> snap_to_grid(const ScalarField& f, const std::vector<double>& x, int margin) {
    if (static_cast<int>(x.size()) != f.dimension)
        throw std::invalid_argument("sampled jet: point dimension mismatch");
    std::vector<int> idx(f.dimension);
    for (int ax = 0; ax < f.dimension; ++ax) {
        const double t = (x[ax] - f.origin[ax]) / f.spacing[ax];
        const int i = static_cast<int>(std::lround(t));
        if (i < margin || i > f.shape[ax] - 1 - margin)
            throw std::domain_error("sampled jet: point too close to the field boundary");
        idx[ax] = i;
    }
    return idx;
}

}  // namespace

std::vector<double> DerivativeSource::hessian_at(const std::vector<double>& x) const {
    if (hess_) return hess_(x);
    if (field_) {
        const ScalarField& f = *field_;
        const NodeView v{f, snap_to_grid(f, x, 1)};
        if (n_ == 1) {
            const double h = f.spacing[0];
            return {(v.at(-1) - 2.0 * v.at(0) + v.at(1)) / (h * h)};
        }
        const double h0 = f.spacing[0];
        const double h1 = f.spacing[1];
        const double uxx = (v.at(-1, 0) - 2.0 * v.at(0, 0) + v.at(1, 0)) / (h0 * h0);
        const double uyy = (v.at(0, -1) - 2.0 * v.at(0, 0) + v.at(0, 1)) / (h1 * h1);
        const double uxy =
            (v.at(1, 1) - v.at(1, -1) - v.at(-1, 1) + v.at(-1, -1)) / (4.0 * h0 * h1);
        return {uxx, uxy, uxy, uyy};
    }
    // Central differences of the analytic value.
    const double h = fd_step_;
    std::vector<double> H(static_cast<std::size_t>(n_) * n_);
    const double u0 = value_(x);
    for (int i = 0; i < n_; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        H[static_cast<std::size_t>(i) * n_ + i] = (value_(xp) - 2.0 * u0 + value_(xm)) / (h * h);
        for (int j = i + 1; j < n_; ++j) {
            std::vector<double> pp = x, pm = x, mp = x, mm = x;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            const double m = (value_(pp) - value_(pm) - value_(mp) + value_(mm)) / (4.0 * h * h);
            H[static_cast<std::size_t>(i) * n_ + j] = m;
            H[static_cast<std::size_t>(j) * n_ + i] = m;
        }
    }
    return H;
}

JetSample DerivativeSource::jet(const std::vector<double>& x) const {
    JetSample jet;
    jet.n = n_;
    jet.point = x;
    jet.hessian = hessian_at(x);

    if (third_) {
        jet.third = third_(x);
        jet.validate();
        return jet;
    }

    const std::size_t n3 = static_cast<std::size_t>(n_) * n_ * n_;
    jet.third.assign(n3, 0.0);
    auto set3 = [&](int i, int j, int k, double val) {
        // Fill every permutation of (i, j, k).
        const int p[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& q : p)
            jet.third[(static_cast<std::size_t>(q[0]) * n_ + q[1]) * n_ + q[2]] = val;
    };

    if (hess_ && !field_) {
        // Differentiate the exact hessian once; second-order central.
        const double h = fd_step_;
        for (int i = 0; i < n_; ++i) {
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const auto Hp = hess_(xp);
            const auto Hm = hess_(xm);
            for (int j = 0; j < n_; ++j)
                for (int k = j; k < n_; ++k) {
                    const double val =
                        (Hp[static_cast<std::size_t>(j) * n_ + k] - Hm[static_cast<std::size_t>(j) * n_ + k]) /
                        (2.0 * h);
                    set3(i, j, k, val);
                }
        }
        // Symmetrise: averaged over the derivative direction.
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j)
                for (int k = j; k < n_; ++k) {
                    const double avg = (jet.third[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] +
                                        jet.third[(static_cast<std::size_t>(j) * n_ + i) * n_ + k] +
                                        jet.third[(static_cast<std::size_t>(k) * n_ + j) * n_ + i]) / 3.0;
                    set3(i, j, k, avg);
                }
        jet.validate();
        return jet;
    }

    // Width-5 central stencils on values (grid nodes or the analytic callable).
    std::function<double(const std::vector<int>&)> sample;
    std::vector<double> h(static_cast<std::size_t>(n_));
    std::vector<int> base;
    if (field_) {
        const ScalarField& f = *field_;
        base = snap_to_grid(f, x, 2);
        for (int ax = 0; ax < n_; ++ax) h[ax] = f.spacing[ax];
        sample = [&f, &base](const std::vector<int>& off) {
            if (f.dimension == 1) return f.at(base[0] + off[0]);
            return f.at(base[0] + off[0], base[1] + off[1]);
        };
    } else {
        for (int ax = 0; ax < n_; ++ax) h[ax] = fd_step_;
        sample = [this, &x, &h](const std::vector<int>& off) {
            std::vector<double> y = x;
            for (int ax = 0; ax < n_; ++ax) y[ax] += off[ax] * h[ax];
            return value_(y);
        };
    }

    std::vector<int> off(static_cast<std::size_t>(n_), 0);
    auto at = [&](int i, int di, int j = -1, int dj = 0) {
        std::fill(off.begin(), off.end(), 0);
        off[i] = di;
        if (j >= 0) off[j] += dj;
        return sample(off);
    };

    for (int i = 0; i < n_; ++i) {
        // d^3/dx_i^3
        const double pure = (-at(i, -2) + 2.0 * at(i, -1) - 2.0 * at(i, 1) + at(i, 2)) /
                            (2.0 * h[i] * h[i] * h[i]);
        set3(i, i, i, pure);
        for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            // d^3/(dx_i^2 dx_j): central j-difference of the i-second-difference.
            const double mixed =
                ((at(i, 1, j, 1) - 2.0 * at(i, 0, j, 1) + at(i, -1, j, 1)) -
                 (at(i, 1, j, -1) - 2.0 * at(i, 0, j, -1) + at(i, -1, j, -1))) /
                (2.0 * h[j] * h[i] * h[i]);
            set3(i, i, j, mixed);
        }
    }
    if (n_ == 3) {
        // d^3/(dx dy dz) via the eight-corner stencil.
        double s = 0.0;
        for (int si = -1; si <= 1; si += 2)
            for (int sj = -1; sj <= 1; sj += 2)
                for (int sk = -1; sk <= 1; sk += 2) {
                    std::fill(off.begin(), off.end(), 0);
                    off[0] = si; off[1] = sj; off[2] = sk;
                    s += si * sj * sk * sample(off);
                }
        set3(0, 1, 2, s / (8.0 * h[0] * h[1] * h[2]));
    }
    jet.validate();
    return jet;
}

// ---------------------------------------------------------------------------
// H on matrices
// ---------------------------------------------------------------------------

double h_of_hessian(const EnergySpec& spec, int n, const std::vector<double>& hessian) {
    if (hessian.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("h_of_hessian: size mismatch");
    if (std::holds_alternative<FullHessianSq>(spec)) {
        double s = 0.0;
        for (double v : hessian) s += v * v;
        return s;
    }
    if (const auto* proj = std::get_if<ProjectionSq>(&spec)) {
        if (proj->n != n) throw std::invalid_argument("h_of_hessian: ProjectionSq dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < hessian.size(); ++i) s += proj->A[i] * hessian[i];
        return s * s;
    }
    if (n != 1) throw std::invalid_argument("h_of_hessian: Custom1D applies only to n = 1");
    return std::get<Custom1D>(spec).h(hessian[0]);
}

std::vector<double> hx_of_hessian(const EnergySpec& spec, int n, const std::vector<double>& hessian) {
    if (hessian.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("hx_of_hessian: size mismatch");
    if (std::holds_alternative<FullHessianSq>(spec)) {
        std::vector<double> g(hessian.size());
        for (std::size_t i = 0; i < hessian.size(); ++i) g[i] = 2.0 * hessian[i];
        return g;
    }
    if (const auto* proj = std::get_if<ProjectionSq>(&spec)) {
        if (proj->n != n) throw std::invalid_argument("hx_of_hessian: ProjectionSq dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < hessian.size(); ++i) s += proj->A[i] * hessian[i];
        std::vector<double> g(hessian.size());
        for (std::size_t i = 0; i < hessian.size(); ++i) g[i] = 2.0 * s * proj->A[i];
        return g;
    }
    if (n != 1) throw std::invalid_argument("hx_of_hessian: Custom1D applies only to n = 1");
    return {std::get<Custom1D>(spec).h_prime(hessian[0])};
}

double residual_a2inf(const JetSample& jet, const EnergySpec& spec) {
    jet.validate();
    const int n = jet.n;
    const std::vector<double> M = hx_of_hessian(spec, n, jet.hessian);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) s += M[static_cast<std::size_t>(k) * n + l] * jet.d3(i, k, l);
        w[i] = s;
    }
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r += M[static_cast<std::size_t>(i) * n + j] * w[i] * w[j];
    return r;
}

double residual_contracted(const DerivativeSource& src, const std::vector<double>& x,
                           const EnergySpec& spec) {
    const int n = src.dim();
    const std::vector<double> M = hx_of_hessian(spec, n, src.hessian_at(x));
    const double h = src.step();
    std::vector<double> grad(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double hp = h_of_hessian(spec, n, src.hessian_at(xp));
        const double hm = h_of_hessian(spec, n, src.hessian_at(xm));
        grad[i] = (hp - hm) / (2.0 * h);
    }
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r += M[static_cast<std::size_t>(i) * n + j] * grad[i] * grad[j];
    return r;
}

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

double energy_sup(const PiecewiseQuadratic& u, const EnergySpec& spec,
                  std::optional<std::pair<double, double>> region) {
    double lo = u.domain_left(), hi = u.domain_right();
    if (region) {
        lo = std::max(lo, region->first);
        hi = std::min(hi, region->second);
        if (!(lo < hi)) throw std::invalid_argument("energy_sup: empty region");
    }
    double best = 0.0;
    bool any = false;
    double xl = u.domain_left();
    for (std::size_t k = 0; k < u.pieces().size(); ++k) {
        const double xr = k < u.breakpoints().size() ? u.breakpoints()[k] : u.domain_right();
        if (xr > lo && xl < hi) {
            best = any ? std::max(best, h_curvature(spec, u.pieces()[k].c2))
                       : h_curvature(spec, u.pieces()[k].c2);
            any = true;
        }
        xl = xr;
    }
    return best;
}

namespace {

// Interior H(D^2 u) samples of a field plus trapezoid weights.
void field_h_samples(const ScalarField& f, const EnergySpec& spec,
                     std::vector<double>& hvals, std::vector<double>& weights) {
    hvals.clear();
    weights.clear();
    if (f.dimension == 1) {
        const int n = f.shape[0];
        if (n < 3) throw std::invalid_argument("field energy: need at least 3 samples");
        const double h = f.spacing[0];
        for (int i = 1; i + 1 < n; ++i) {
            const double d2 = (f.at(i - 1) - 2.0 * f.at(i) + f.at(i + 1)) / (h * h);
            hvals.push_back(h_of_hessian(spec, 1, {d2}));
            weights.push_back((i == 1 || i == n - 2) ? 0.5 : 1.0);
        }
        return;
    }
    const int n0 = f.shape[0], n1 = f.shape[1];
    if (n0 < 3 || n1 < 3) throw std::invalid_argument("field energy: grid too small");
    const double h0 = f.spacing[0], h1 = f.spacing[1];
    for (int i = 1; i + 1 < n0; ++i)
        for (int j = 1; j + 1 < n1; ++j) {
            const double uxx = (f.at(i - 1, j) - 2.0 * f.at(i, j) + f.at(i + 1, j)) / (h0 * h0);
            const double uyy = (f.at(i, j - 1) - 2.0 * f.at(i, j) + f.at(i, j + 1)) / (h1 * h1);
            const double uxy = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) +
                                f.at(i - 1, j - 1)) /
                               (4.0 * h0 * h1);
            hvals.push_back(h_of_hessian(spec, 2, {uxx, uxy, uxy, uyy}));
            const double wi = (i == 1 || i == n0 - 2) ? 0.5 : 1.0;
            const double wj = (j == 1 || j == n1 - 2) ? 0.5 : 1.0;
            weights.push_back(wi * wj);
        }
}

}  // namespace

double energy_sup(const ScalarField& u, const EnergySpec& spec) {
    std::vector<double> hvals, weights;
    field_h_samples(u, spec, hvals, weights);
    return *std::max_element(hvals.begin(), hvals.end());
}

double energy_lp(const PiecewiseQuadratic& u, const EnergySpec& spec, double p) {
    if (p < 1.0) throw std::invalid_argument("energy_lp: p must be >= 1");
    const double w = u.domain_right() - u.domain_left();
    // Stable averaged power mean: factor out the max of H over pieces.
    double hmax = 0.0;
    for (const auto& piece : u.pieces()) hmax = std::max(hmax, h_curvature(spec, piece.c2));
    if (hmax == 0.0) return 0.0;
    double acc = 0.0;
    double xl = u.domain_left();
    for (std::size_t k = 0; k < u.pieces().size(); ++k) {
        const double xr = k < u.breakpoints().size() ? u.breakpoints()[k] : u.domain_right();
        acc += (xr - xl) / w * std::pow(h_curvature(spec, u.pieces()[k].c2) / hmax, p);
        xl = xr;
    }
    return hmax * std::pow(acc, 1.0 / p);
}

double energy_lp(const ScalarField& u, const EnergySpec& spec, double p) {
    if (p < 1.0) throw std::invalid_argument("energy_lp: p must be >= 1");
    std::vector<double> hvals, weights;
    field_h_samples(u, spec, hvals, weights);
    const double hmax = *std::max_element(hvals.begin(), hvals.end());
    if (hmax == 0.0) return 0.0;
    double acc = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < hvals.size(); ++i) {
        acc += weights[i] * std::pow(hvals[i] / hmax, p);
        wsum += weights[i];
    }
    return hmax * std::pow(acc / wsum, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Flow identity
// ---------------------------------------------------------------------------

FlowIdentity flow_identity_residual(const DerivativeSource& src, const std::vector<double>& x,
                                    const EnergySpec& spec, double v_threshold) {
    const int n = src.dim();
    const std::vector<double> M = hx_of_hessian(spec, n, src.hessian_at(x));
    const double h = src.step();
    std::vector<double> grad(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        grad[i] = (h_of_hessian(spec, n, src.hessian_at(xp)) -
                   h_of_hessian(spec, n, src.hessian_at(xm))) /
                  (2.0 * h);
    }
    std::vector<double> V(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) V[i] += M[static_cast<std::size_t>(i) * n + j] * grad[j];
    double vnorm = 0.0;
    for (double v : V) vnorm += v * v;
    vnorm = std::sqrt(vnorm);
    if (vnorm <= v_threshold)
        throw std::domain_error("flow_identity_residual: critical point, V(x) vanishes");

    // Directional derivative of H(D^2 u) along sgn(V) = V/|V|.
    std::vector<double> xp = x, xm = x;
    for (int i = 0; i < n; ++i) {
        xp[i] += h * V[i] / vnorm;
        xm[i] -= h * V[i] / vnorm;
    }
    const double dpsi = (h_of_hessian(spec, n, src.hessian_at(xp)) -
                         h_of_hessian(spec, n, src.hessian_at(xm))) /
                        (2.0 * h);

    FlowIdentity out;
    out.lhs = vnorm * dpsi;
    out.rhs = residual_a2inf(src.jet(x), spec);
    return out;
}

// ---------------------------------------------------------------------------
// Constant-level certificate
// ---------------------------------------------------------------------------

namespace {

LevelCheck levelcheck_from_samples(const std::vector<double>& hvals,
                                   const std::vector<bool>& masked,
                                   const std::vector<double>& projections,
                                   bool has_projection, double tol) {
    std::vector<double> kept;
    for (std::size_t i = 0; i < hvals.size(); ++i)
        if (!masked[i]) kept.push_back(hvals[i]);
    if (kept.empty()) throw std::invalid_argument("dsolution_levelcheck: all samples masked");

    LevelCheck out;
    out.level = median_of(kept);
    out.max_deviation = 0.0;
    for (double v : kept) out.max_deviation = std::max(out.max_deviation, std::fabs(v - out.level));
    out.passes = out.max_deviation <= tol;

    if (has_projection) {
        std::vector<double> kept_proj;
        for (std::size_t i = 0; i < projections.size(); ++i)
            if (!masked[i]) kept_proj.push_back(projections[i]);
        std::sort(kept_proj.begin(), kept_proj.end());
        const double cluster_gap = 10.0 * tol + 1e-12;
        int clusters = kept_proj.empty() ? 0 : 1;
        for (std::size_t i = 1; i < kept_proj.size(); ++i)
            if (kept_proj[i] - kept_proj[i - 1] > cluster_gap) ++clusters;
        out.distinct_projection_values = clusters;
        out.projection_constant = clusters <= 1;
    }
    return out;
}

}  // namespace

LevelCheck dsolution_levelcheck(const PiecewiseQuadratic& u, const EnergySpec& spec, double tol) {
    // Sample on a uniform grid, masking two cells around each breakpoint.
    const int samples = 1024;
    const double a = u.domain_left(), b = u.domain_right();
    const double dx = (b - a) / samples;
    std::vector<double> hvals, proj;
    std::vector<bool> masked;
    const bool has_proj = std::holds_alternative<ProjectionSq>(spec);
    for (int i = 0; i <= samples; ++i) {
        const double x = a + i * dx;
        const double d2 = u.second(std::min(x, b));
        hvals.push_back(h_curvature(spec, d2));
        if (has_proj) proj.push_back(std::get<ProjectionSq>(spec).A[0] * d2);
        bool m = false;
        for (double bp : u.breakpoints())
            if (std::fabs(x - bp) <= 2.0 * dx) m = true;
        masked.push_back(m);
    }
    LevelCheck out = levelcheck_from_samples(hvals, masked, proj, has_proj, tol);
    for (const auto& piece : u.pieces())
        out.sign_pattern += piece.c2 > 0.0 ? '+' : (piece.c2 < 0.0 ? '-' : '0');
    return out;
}

LevelCheck dsolution_levelcheck(const ScalarField& u, const EnergySpec& spec, double tol) {
    std::vector<double> hvals, weights;
    field_h_samples(u, spec, hvals, weights);
    // Mask two cells around jumps of H between neighbouring samples.
    std::vector<double> habs(hvals.size());
    for (std::size_t i = 0; i < hvals.size(); ++i) habs[i] = std::fabs(hvals[i]);
    const double jump_tol = 0.5 * median_of(habs) + 1e-300;
    std::vector<bool> jump(hvals.size(), false);
    if (u.dimension == 1) {
        for (std::size_t i = 0; i + 1 < hvals.size(); ++i)
            if (std::fabs(hvals[i + 1] - hvals[i]) > jump_tol) jump[i] = jump[i + 1] = true;
    } else {
        const int m1 = u.shape[1] - 2;
        auto lin = [m1](int i, int j) { return static_cast<std::size_t>(i) * m1 + j; };
        for (int i = 0; i < u.shape[0] - 2; ++i)
            for (int j = 0; j < m1; ++j) {
                if (i + 1 < u.shape[0] - 2 &&
                    std::fabs(hvals[lin(i + 1, j)] - hvals[lin(i, j)]) > jump_tol)
                    jump[lin(i, j)] = jump[lin(i + 1, j)] = true;
                if (j + 1 < m1 && std::fabs(hvals[lin(i, j + 1)] - hvals[lin(i, j)]) > jump_tol)
                    jump[lin(i, j)] = jump[lin(i, j + 1)] = true;
            }
    }
    // Dilate the jump set by two cells (1D) / two rings (2D).
    std::vector<bool> masked = jump;
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<bool> next = masked;
        if (u.dimension == 1) {
            for (std::size_t i = 0; i < masked.size(); ++i)
                if (masked[i]) {
                    if (i > 0) next[i - 1] = true;
                    if (i + 1 < masked.size()) next[i + 1] = true;
                }
        } else {
            const int m0 = u.shape[0] - 2, m1 = u.shape[1] - 2;
            auto lin = [m1](int i, int j) { return static_cast<std::size_t>(i) * m1 + j; };
            for (int i = 0; i < m0; ++i)
                for (int j = 0; j < m1; ++j)
                    if (masked[lin(i, j)]) {
                        if (i > 0) next[lin(i - 1, j)] = true;
                        if (i + 1 < m0) next[lin(i + 1, j)] = true;
                        if (j > 0) next[lin(i, j - 1)] = true;
                        if (j + 1 < m1) next[lin(i, j + 1)] = true;
                    }
        }
        masked = std::move(next);
    }

    std::vector<double> proj;
    const bool has_proj = std::holds_alternative<ProjectionSq>(spec);
    if (has_proj) {
        const auto& p = std::get<ProjectionSq>(spec);
        if (u.dimension == 1) {
            const double h = u.spacing[0];
            for (int i = 1; i + 1 < u.shape[0]; ++i)
                proj.push_back(p.A[0] * (u.at(i - 1) - 2.0 * u.at(i) + u.at(i + 1)) / (h * h));
        } else {
            const double h0 = u.spacing[0], h1 = u.spacing[1];
            for (int i = 1; i + 1 < u.shape[0]; ++i)
                for (int j = 1; j + 1 < u.shape[1]; ++j) {
                    const double uxx = (u.at(i - 1, j) - 2.0 * u.at(i, j) + u.at(i + 1, j)) / (h0 * h0);
                    const double uyy = (u.at(i, j - 1) - 2.0 * u.at(i, j) + u.at(i, j + 1)) / (h1 * h1);
                    const double uxy = (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) +
                                        u.at(i - 1, j - 1)) /
                                       (4.0 * h0 * h1);
                    proj.push_back(p.A[0] * uxx + p.A[1] * uxy + p.A[2] * uxy + p.A[3] * uyy);
                }
        }
    }
    return levelcheck_from_samples(hvals, masked, proj, has_proj, tol);
}

}  // namespace linfty::residuals
