#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "barrierlab/barriers.hpp"
#include "barrierlab/grid.hpp"
#include "barrierlab/numerics.hpp"
#include "barrierlab/odi.hpp"
#include "barrierlab/report.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Node regions
// ---------------------------------------------------------------------------

struct RegionSpec {
    Vec2 center;
    double radius = 1.0;
    int clip_layers = 1;  // keep nodes this many layers away from the ring
};

inline std::vector<std::pair<int, int>> collect_region(const Grid& g, const RegionSpec& rs) {
    std::vector<std::pair<int, int>> keep;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            if (!g.inside(i, j)) continue;
            if (dist(g.pos(i, j), rs.center) > rs.radius) continue;
            bool clipped = false;
            for (int dj = -rs.clip_layers; dj <= rs.clip_layers && !clipped; ++dj)
                for (int di = -rs.clip_layers; di <= rs.clip_layers && !clipped; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny ||
                        !g.inside(ii, jj))
                        clipped = true;
                }
            if (!clipped) keep.emplace_back(i, j);
        }
    return keep;
}

// ---------------------------------------------------------------------------
// Decay sandwich (profile bounds on discrete solutions)
// ---------------------------------------------------------------------------

struct DecayBands {
    double m = 0.0;  // inf over the discrete band {r < d < 3r} within B(w, 6r)
    double M = 0.0;  // sup over B(w, 6r) inside the grid
};

inline DecayBands measure_bands(const GridSolution& sol, const Vec2& w, double r) {
    const Grid& g = *sol.grid;
    DecayBands out{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    size_t band_nodes = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.inside(i, j)) continue;
            const Vec2 x = g.pos(i, j);
            if (dist(x, w) > 6.0 * r) continue;
            out.M = std::max(out.M, sol.at(i, j));
            const double d = boundary_distance(g.domain, x);
            if (d > r && d < 3.0 * r) {
                out.m = std::min(out.m, sol.at(i, j));
                ++band_nodes;
            }
        }
    if (band_nodes == 0 || !std::isfinite(out.M))
        fail(ErrorCode::BandEmpty, "grid cannot host the 6r band geometry");
    return out;
}

/// Nodewise check of lower.h(d) - delta <= u <= upper.h(d) + delta on
/// B(w, r) inside the domain.
inline Report check_decay(const GridSolution& sol, const Vec2& w, double r,
                          const BarrierProfile& lower, const BarrierProfile& upper,
                          double delta) {
    const Grid& g = *sol.grid;
    Report rep;
    rep.id = "decay:" + sol.operator_id;
    double worst_lower = std::numeric_limits<double>::infinity();
    double worst_upper = std::numeric_limits<double>::infinity();
    size_t nodes = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.inside(i, j)) continue;
            const Vec2 x = g.pos(i, j);
            if (dist(x, w) > r) continue;
            const double d = std::min(boundary_distance(g.domain, x), r);
            const double u = sol.at(i, j);
            worst_lower = std::min(worst_lower, u - (lower.h(d) - delta));
            worst_upper = std::min(worst_upper, (upper.h(d) + delta) - u);
            ++nodes;
        }
    if (nodes == 0) fail(ErrorCode::BandEmpty, "no interior nodes in B(w, r)");
    rep.measure("nodes", double(nodes));
    rep.measure("worst_lower_slack", worst_lower);
    rep.measure("worst_upper_slack", worst_upper);
    rep.tolerance("delta", delta);
    rep.pass = worst_lower >= 0.0 && worst_upper >= 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary Harnack at grid level
// ---------------------------------------------------------------------------

/// Two-sided Harnack band: the continuum guarantee A^{-1} <= u1/u2 <= A plus
/// per-solution error budgets delta_i = tol_i + delta_budget gives the exact
/// discrete consequence u1 <= A u2 + (delta_1 + A delta_2) and symmetrically.
/// The relative band and its inflation delta_r are reported alongside.
inline Report check_bhi(const GridSolution& u1, const GridSolution& u2, const RegionSpec& region,
                        double A, double delta_budget) {
    const Grid& g = *u1.grid;
    Report rep;
    rep.id = "bhi";
    const auto nodes = collect_region(g, region);
    require(!nodes.empty(), ErrorCode::BandEmpty, "empty comparison region");
    double min_u2 = std::numeric_limits<double>::infinity();
    for (auto [i, j] : nodes) min_u2 = std::min(min_u2, u2.at(i, j));
    if (!(min_u2 > 10.0 * u2.tol))
        fail(ErrorCode::DivisionBand, "denominator solution sits below the noise floor");
    const double d1 = u1.tol + delta_budget, d2 = u2.tol + delta_budget;
    const double slack_up = d1 + A * d2;   // u1 <= A u2 + slack_up
    const double slack_dn = d2 + A * d1;   // u2 <= A u1 + slack_dn
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    size_t violations = 0;
    for (auto [i, j] : nodes) {
        const double a = u1.at(i, j), b = u2.at(i, j);
        rmin = std::min(rmin, a / b);
        rmax = std::max(rmax, a / b);
        if (a > A * b + slack_up || b > A * a + slack_dn) ++violations;
    }
    rep.measure("A", A);
    rep.measure("delta_r", (u1.tol + u2.tol + delta_budget * (1.0 + rmax)) / min_u2);
    rep.measure("ratio_min", rmin);
    rep.measure("ratio_max", rmax);
    rep.measure("band_margin_low", rmin - 1.0 / A);
    rep.measure("band_margin_high", A - rmax);
    rep.measure("violations", double(violations));
    rep.measure("nodes", double(nodes.size()));
    rep.tolerance("abs_slack_up", slack_up);
    rep.tolerance("abs_slack_down", slack_dn);
    rep.pass = violations == 0 && rmin >= 1.0 / A - 1e-12 && rmax <= A + 1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// Quotient increments (synthetic differentiable fields)
// ---------------------------------------------------------------------------

struct QuotientField {
    std::function<double(const Vec2&)> value;
    double c_K = 1.0;     // gradient Hoelder constant
    double alpha_K = 1.0; // gradient Hoelder exponent
};

/// Pair sampling over a ball with log-spaced separations; positions snap to
/// nothing (fields are analytic). Checks |f/d(x) - f/d(y)| <= 8 c_K |x-y|^a
/// and, when g is supplied, the two derived quotient bounds with
/// c1 = 8 c_K / c_L^2 and c2 = 8 c_K (c_L + C_U) / c_L^2.
inline Report quotient_increment_check(const QuotientField& f, const DomainSpec& domain,
                                   const Vec2& z, double r, int pairs = 10000,
                                   const QuotientField* gfield = nullptr, uint64_t seed = 11) {
    Report rep;
    rep.id = "quotient_increment";
    HaltonSampler hal(seed);
    auto quo = [&](const std::function<double(const Vec2&)>& fn, const Vec2& x) {
        return fn(x) / boundary_distance(domain, x);
    };
    double worst_f = -std::numeric_limits<double>::infinity();
    double c_L = std::numeric_limits<double>::infinity(), C_U = 0.0;
    std::vector<std::pair<Vec2, Vec2>> kept;
    kept.reserve(static_cast<size_t>(pairs));
    uint64_t i = 1;
    while (kept.size() < size_t(pairs) && i < 40u * size_t(pairs)) {
        const Vec2 u = hal.sample2(i);
        const double w1 = hal.sample1(i);
        ++i;
        const Vec2 x = z + Vec2{r * (u.x - 0.5), r * u.y * 0.5};
        if (signed_distance(domain, x) <= 1e-6 * r) continue;
        const double ang = 2.0 * kPi * w1;
        const double sep = r * std::pow(10.0, -3.0 * hal.sample1(i + 7919));
        const Vec2 y = x + Vec2{std::cos(ang), std::sin(ang)} * sep;
        if (dist(y, z) > r || signed_distance(domain, y) <= 1e-6 * r) continue;
        kept.emplace_back(x, y);
    }
    for (const auto& [x, y] : kept) {
        const double inc = std::abs(quo(f.value, x) - quo(f.value, y));
        const double bound = 8.0 * f.c_K * std::pow(dist(x, y), f.alpha_K);
        worst_f = std::max(worst_f, inc - bound);
        if (gfield) {
            c_L = std::min({c_L, quo(gfield->value, x), quo(gfield->value, y)});
            C_U = std::max({C_U, quo(f.value, x), quo(f.value, y)});
        }
    }
    rep.measure("pairs", double(kept.size()));
    rep.measure("worst_f_excess", worst_f);
    rep.tolerance("excess", 0.0);
    bool pass = kept.size() >= size_t(pairs) / 2 && worst_f <= 0.0;
    if (gfield) {
        const double c1 = 8.0 * f.c_K / (c_L * c_L);
        const double c2 = 8.0 * f.c_K * (c_L + C_U) / (c_L * c_L);
        double worst_inv = -std::numeric_limits<double>::infinity();
        double worst_ratio = -std::numeric_limits<double>::infinity();
        for (const auto& [x, y] : kept) {
            const double dx = boundary_distance(domain, x), dy = boundary_distance(domain, y);
            const double inv_inc = std::abs(dx / gfield->value(x) - dy / gfield->value(y));
            const double ratio_inc =
                std::abs(f.value(x) / gfield->value(x) - f.value(y) / gfield->value(y));
            const double sep_a = std::pow(dist(x, y), f.alpha_K);
            worst_inv = std::max(worst_inv, inv_inc - c1 * sep_a);
            worst_ratio = std::max(worst_ratio, ratio_inc - c2 * sep_a);
        }
        rep.measure("c_L", c_L);
        rep.measure("C_U", C_U);
        rep.measure("c1", c1);
        rep.measure("c2", c2);
        rep.measure("worst_inverse_excess", worst_inv);
        rep.measure("worst_ratio_excess", worst_ratio);
        pass = pass && worst_inv <= 0.0 && worst_ratio <= 0.0;
    }
    rep.pass = pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Hoelder exponent measurement for solution quotients
// ---------------------------------------------------------------------------

struct HolderFit {
    double alpha = 0.0;
    double constant = 0.0;
    double fit_rms_decades = 0.0;
    bool degenerate = false;  // all increments at the noise floor
    size_t pairs = 0;
};

/// Binned log-log envelope fit of |q(x) - q(y)| against |x - y| for the
/// nodewise quotient q = u/v on the region. Increments are grouped into
/// log-spaced distance bins; the per-bin maximum is regressed.
inline HolderFit holder_quotient_estimate(const GridSolution& u, const GridSolution& v,
                                          const RegionSpec& region, int pairs = 10000,
                                          uint64_t seed = 17) {
    const Grid& g = *u.grid;
    const auto nodes = collect_region(g, region);
    require(nodes.size() >= 16, ErrorCode::BandEmpty, "region too small for a quotient fit");
    std::vector<Vec2> pos(nodes.size());
    std::vector<double> q(nodes.size());
    double qscale = 0.0;
    for (size_t k = 0; k < nodes.size(); ++k) {
        auto [i, j] = nodes[k];
        pos[k] = g.pos(i, j);
        q[k] = u.at(i, j) / v.at(i, j);
        qscale = std::max(qscale, std::abs(q[k]));
    }
    HaltonSampler hal(seed);
    const double dist_max = 2.0 * region.radius;
    const double dist_min = std::max(g.h, dist_max * 1e-3);
    const int bins = 30;
    std::vector<double> bin_max(bins, 0.0);
    std::vector<double> bin_dist(bins, 0.0);
    size_t used = 0;
    for (uint64_t t = 1; used < size_t(pairs) && t < 40u * size_t(pairs); ++t) {
        const size_t a = size_t(hal.sample1(t) * double(nodes.size()));
        const size_t b = size_t(hal.radical_inverse(t + 7919, 7) * double(nodes.size()));
        if (a >= nodes.size() || b >= nodes.size() || a == b) continue;
        const double d = dist(pos[a], pos[b]);
        if (d < dist_min || d > dist_max) continue;
        const int bin = std::min(
            bins - 1, int(std::floor(bins * std::log(d / dist_min) / std::log(dist_max / dist_min))));
        const double inc = std::abs(q[a] - q[b]);
        if (inc > bin_max[size_t(bin)]) {
            bin_max[size_t(bin)] = inc;
            bin_dist[size_t(bin)] = d;
        }
        ++used;
    }
    HolderFit fit;
    fit.pairs = used;
    const double noise = 1e-10 * std::max(1.0, qscale);
    std::vector<double> xs, ys;
    for (int b = 0; b < bins; ++b)
        if (bin_max[size_t(b)] > noise) {
            xs.push_back(std::log10(bin_dist[size_t(b)]));
            ys.push_back(std::log10(bin_max[size_t(b)]));
        }
    if (xs.size() < 4) {
        fit.degenerate = true;  // quotient constant at this resolution
        fit.constant = nodes.empty() ? 0.0 : q[0];
        return fit;
    }
    const LineFit lf = fit_line(xs, ys);
    fit.alpha = lf.slope;
    fit.constant = std::pow(10.0, lf.intercept);
    fit.fit_rms_decades = lf.rms_residual;
    return fit;
}

// ---------------------------------------------------------------------------
// Odd reflection across the flat edge
// ---------------------------------------------------------------------------

struct ReflectionResult {
    GridSolution extended;
    Report report;
};

/// Odd extension of a converged solution on the half-box across its bottom
/// edge (exponent fields extend evenly). The whole-square residual of the
/// extension, including the reflection line, is certified against 2x the
/// original tolerance.
inline ReflectionResult schwarz_reflect(const GridSolution& sol, const ModelOperator& op) {
    const Grid& g = *sol.grid;
    const auto* hr = std::get_if<HalfRectangle>(&g.domain);
    require(hr != nullptr, ErrorCode::InvalidArgument,
            "reflection needs a half-rectangle solution");
    // trace must vanish on the reflection line
    for (int i = 0; i < g.nx; ++i)
        if (g.cls[g.idx(i, 0)] == NodeClass::Boundary && std::abs(g.bdata[g.idx(i, 0)]) > 1e-14)
            fail(ErrorCode::NonzeroTrace, "bottom edge data is not identically zero");

    Grid ext;
    ext.domain = Rectangle{{hr->w.x - hr->r, hr->w.y - hr->r}, {2.0 * hr->r, 2.0 * hr->r}};
    ext.lo = {g.lo.x, g.lo.y - (g.ny - 1) * g.h};
    ext.h = g.h;
    ext.nx = g.nx;
    ext.ny = 2 * g.ny - 1;
    ext.cls.assign(size_t(ext.nx) * ext.ny, NodeClass::Outside);
    ext.bdata.assign(size_t(ext.nx) * ext.ny, 0.0);

    std::vector<double> vals(size_t(ext.nx) * ext.ny, 0.0);
    const int joff = g.ny - 1;  // original row j maps to ext row j + joff
    for (int jext = -(g.ny - 1); jext <= g.ny - 1; ++jext)
        for (int i = 0; i < ext.nx; ++i) {
            const size_t ke = ext.idx(i, jext + joff);
            const int jorig = std::abs(jext);
            const double sgn = jext < 0 ? -1.0 : 1.0;
            const size_t ko = g.idx(i, jorig);
            // interior of the square (frame stays Dirichlet)
            const bool frame =
                i == 0 || i == ext.nx - 1 || jext == -(g.ny - 1) || jext == g.ny - 1;
            if (frame) {
                ext.cls[ke] = NodeClass::Boundary;
                const double base =
                    g.cls[ko] == NodeClass::Boundary ? g.bdata[ko] : sol.values[ko];
                ext.bdata[ke] = sgn * base;
                vals[ke] = ext.bdata[ke];
            } else {
                ext.cls[ke] = NodeClass::Inside;
                const double base =
                    g.cls[ko] == NodeClass::Boundary ? g.bdata[ko] : sol.values[ko];
                vals[ke] = sgn * base;
            }
        }

    DiscreteOp dop = discretize(op, ext);
    if (dop.id == SchemeId::PxLapNonDiv) {
        // even extension of the sampled exponent field; gradient from the
        // extended samples so the mirrored stencils match exactly
        for (int jext = -(g.ny - 1); jext <= g.ny - 1; ++jext)
            for (int i = 0; i < ext.nx; ++i)
                dop.p_node[ext.idx(i, jext + joff)] = dop.p_node[ext.idx(i, std::abs(jext) + joff)];
        for (int j = 0; j < ext.ny; ++j)
            for (int i = 0; i < ext.nx; ++i) {
                const size_t k = ext.idx(i, j);
                const int im = std::max(i - 1, 0), ip = std::min(i + 1, ext.nx - 1);
                const int jm = std::max(j - 1, 0), jp = std::min(j + 1, ext.ny - 1);
                dop.gp_x[k] =
                    (dop.p_node[ext.idx(ip, j)] - dop.p_node[ext.idx(im, j)]) / ((ip - im) * ext.h);
                dop.gp_y[k] =
                    (dop.p_node[ext.idx(i, jp)] - dop.p_node[ext.idx(i, jm)]) / ((jp - jm) * ext.h);
            }
    }

    auto ext_grid = std::make_shared<Grid>(std::move(ext));
    const double res = residual_sup(dop, *ext_grid, vals);

    ReflectionResult out;
    out.extended.grid = ext_grid;
    out.extended.values = std::move(vals);
    out.extended.operator_id = sol.operator_id;
    out.extended.scheme_id = sol.scheme_id;
    out.extended.residual = res;
    out.extended.tol = 2.0 * sol.tol;
    out.extended.converged = res <= 2.0 * sol.tol;
    out.report.id = "reflect:" + sol.operator_id;
    out.report.measure("original_residual", sol.residual);
    out.report.measure("extended_residual", res);
    out.report.tolerance("extended_residual", 2.0 * sol.tol);
    out.report.pass = res <= 2.0 * sol.tol;
    return out;
}

// ---------------------------------------------------------------------------
// Sector solutions r^k f(phi)
// ---------------------------------------------------------------------------

/// Radial exponent of the homogeneous sector solution.
inline double sector_exponent(double nu, double p) {
    require(nu > 0.5, ErrorCode::InvalidArgument, "need nu > 1/2");
    require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidArgument, "need finite p > 1");
    const double radicand = (1.0 - 2.0 * nu) * sq(p - 2.0) + sq(nu * p);
    if (radicand < 0.0) fail(ErrorCode::ComplexRadicand, "negative radicand in the exponent");
    return ((nu - 1.0) * std::sqrt(radicand) + (2.0 - p) * (1.0 - 2.0 * nu) + nu * nu * p) /
           (2.0 * (p - 1.0) * (2.0 * nu - 1.0));
}

struct SectorProfile {
    double nu = 1.0, p = 2.0, k = 1.0;
    HermiteSpline f;        // angular profile on [0, phi0], even in phi
    double f_end = 0.0;     // f(phi0); construction certifies ~0
    double fp_end = 0.0;
    double half_angle = 0.0;

    double value(double phi) const { return f.value(std::abs(phi)); }
    double derivative(double phi) const {
        const double d = f.derivative(std::abs(phi));
        return phi >= 0.0 ? d : -d;
    }
};

namespace detail_verify {

/// f'' from the homogeneity reduction of the p-Laplacian:
///   (G f')' + k((k-1)(p-1)+1) G f = 0, with G = (k^2 f^2 + f'^2)^{(p-2)/2}.
inline double sector_rhs(double p, double k, double f, double fp) {
    const double mc = k * ((k - 1.0) * (p - 1.0) + 1.0);
    const double k2 = k * k;
    const double num = (p - 2.0) * k2 * f * fp * fp + mc * (k2 * f * f + fp * fp) * f;
    const double den = k2 * f * f + (p - 1.0) * fp * fp;
    return -num / den;
}

inline SectorProfile integrate_sector(double nu, double p, double k, int mesh_points) {
    SectorProfile out;
    out.nu = nu;
    out.p = p;
    out.k = k;
    out.half_angle = kPi / (2.0 * nu);
    auto rhs = [p, k](double, double f, double fp) { return sector_rhs(p, k, f, fp); };
    const auto mesh = uniform_mesh(0.0, out.half_angle, mesh_points);
    std::vector<double> f(mesh.size()), fp(mesh.size());
    double y = 1.0, ypv = 0.0;
    f[0] = y;
    fp[0] = ypv;
    for (size_t j = 1; j < mesh.size(); ++j) {
        integrate_ode2(rhs, mesh[j - 1], mesh[j], y, ypv);
        f[j] = y;
        fp[j] = ypv;
    }
    out.f = HermiteSpline(mesh, f, fp);
    out.f_end = f.back();
    out.fp_end = fp.back();
    return out;
}

}  // namespace detail_verify

/// Angular profile of the separable solution: even IVP f(0) = 1, f'(0) = 0
/// integrated to the wall. With k from sector_exponent the profile vanishes
/// there; the residual of that vanishing certifies the exponent formula.
inline SectorProfile sector_profile(double nu, double p, int mesh_points = 4096) {
    const double k = sector_exponent(nu, p);
    auto prof = detail_verify::integrate_sector(nu, p, k, mesh_points);
    if (!(std::abs(prof.f_end) <= 1e-6))
        fail(ErrorCode::ShootingFailed,
             "profile does not vanish at the wall: f(phi0) = " + format_double(prof.f_end));
    return prof;
}

/// Independent route to the exponent: shoot on k until f(phi0) = 0.
inline double sector_exponent_by_shooting(double nu, double p, int mesh_points = 2048) {
    const double k0 = sector_exponent(nu, p);
    auto end_val = [&](double k) {
        return detail_verify::integrate_sector(nu, p, k, mesh_points).f_end;
    };
    double lo = 0.6 * k0, hi = 1.5 * k0 + 0.5;
    double flo = end_val(lo), fhi = end_val(hi);
    int guard = 0;
    while (flo * fhi > 0.0) {
        lo *= 0.8;
        hi *= 1.2;
        flo = end_val(lo);
        fhi = end_val(hi);
        if (++guard > 20) fail(ErrorCode::ShootingFailed, "no bracketing exponent found");
    }
    return bisect(end_val, lo, hi, flo, fhi, 1e-12);
}

// ---------------------------------------------------------------------------
// Flats
// ---------------------------------------------------------------------------

/// Decay exponent of |x'|^beta against an m-flat in R^n; infinity maps to 1.
inline double flat_exponent(double p, int n, int m) {
    require(m >= 1 && m < n, ErrorCode::InvalidArgument, "need 1 <= m < n");
    if (std::isinf(p)) return 1.0;
    require(p > 1.0, ErrorCode::InvalidArgument, "need p > 1");
    const double beta = (p - double(n) + double(m)) / (p - 1.0);
    if (beta <= 0.0)
        fail(ErrorCode::NonpositiveExponent,
             "exponent " + format_double(beta) + " is not positive");
    return beta;
}

// ---------------------------------------------------------------------------
// Nodal residual of an analytic field under a scheme (no solve)
// ---------------------------------------------------------------------------

/// Sup of |F_h(field)| over nodes whose full stencil lies in the admissible
/// set. Used for the explicit-solution residual criteria.
inline double nodal_residual(const ModelOperator& op, const DomainSpec& domain, Vec2 lo,
                             Vec2 extent, int cells,
                             const std::function<double(const Vec2&)>& field,
                             const std::function<bool(const Vec2&)>& admissible,
                             double* worst_pos = nullptr) {
    Grid g = build_grid(domain, lo, extent, cells, field);
    std::vector<double> u(g.cls.size(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.cls[g.idx(i, j)] != NodeClass::Outside) u[g.idx(i, j)] = field(g.pos(i, j));
    DiscreteOp dop = discretize(op, g);
    double worst = 0.0;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            if (!g.inside(i, j)) continue;
            bool ok = admissible(g.pos(i, j));
            for (int dj = -1; dj <= 1 && ok; ++dj)
                for (int di = -1; di <= 1 && ok; ++di)
                    ok = g.cls[g.idx(i + di, j + dj)] != NodeClass::Outside &&
                         admissible(g.pos(i + di, j + dj));
            if (!ok) continue;
            const double res = std::abs(scheme_eval(dop, g, u, i, j));
            if (res > worst) {
                worst = res;
                if (worst_pos) *worst_pos = res;
            }
        }
    return worst;
}

// ---------------------------------------------------------------------------
// Growth fits and uniqueness proxies
// ---------------------------------------------------------------------------

struct GrowthSample {
    double scale = 1.0;
    double value = 0.0;
};

/// Fit value ~ scale^e on pre-normalized samples; pass iff the fitted
/// exponent is within 0.1 of the prediction and the compensated ratios
/// value/scale^e spread by at most 3x.
inline Report measure_growth(const std::vector<GrowthSample>& samples, double predicted) {
    require(samples.size() >= 3, ErrorCode::InvalidArgument, "need at least 3 growth samples");
    Report rep;
    rep.id = "growth";
    std::vector<double> xs, ys;
    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    for (const auto& s : samples) {
        require(s.value > 0.0 && s.scale > 0.0, ErrorCode::InvalidArgument,
                "growth samples must be positive");
        xs.push_back(std::log(s.scale));
        ys.push_back(std::log(s.value));
        const double ratio = s.value / std::pow(s.scale, predicted);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    const LineFit lf = fit_line(xs, ys);
    rep.measure("fitted_exponent", lf.slope);
    rep.measure("predicted_exponent", predicted);
    rep.measure("ratio_spread", ratio_max / ratio_min);
    rep.tolerance("exponent_gap", 0.1);
    rep.tolerance("ratio_spread", 3.0);
    rep.pass = std::abs(lf.slope - predicted) <= 0.1 && ratio_max / ratio_min <= 3.0;
    return rep;
}

/// |grad u| vs u / d(flat) nodewise; returns the measured two-sided constant.
inline double gradient_bound_constant(const GridSolution& sol, const RegionSpec& region) {
    const Grid& g = *sol.grid;
    const auto* hr = std::get_if<HalfRectangle>(&g.domain);
    require(hr != nullptr, ErrorCode::InvalidArgument, "gradient bound runs on half-rectangles");
    const auto nodes = collect_region(g, region);
    require(!nodes.empty(), ErrorCode::BandEmpty, "empty gradient-bound region");
    double cmax = 0.0;
    for (auto [i, j] : nodes) {
        const Vec2 x = g.pos(i, j);
        const double dn = x.y - hr->w.y;
        const double u = sol.at(i, j);
        if (!(u > 10.0 * sol.tol) || dn <= 0.0) continue;
        const double gx = (sol.at(i + 1, j) - sol.at(i - 1, j)) / (2.0 * g.h);
        const double gy = (sol.at(i, j + 1) - sol.at(i, j - 1)) / (2.0 * g.h);
        const double ratio = std::hypot(gx, gy) / (u / dn);
        require(ratio > 0.0, ErrorCode::InvalidArgument, "zero gradient in the region");
        cmax = std::max({cmax, ratio, 1.0 / ratio});
    }
    require(cmax > 0.0, ErrorCode::BandEmpty, "no usable nodes for the gradient bound");
    return cmax;
}

struct DriftResult {
    double C = 0.0;      // normalization matched at the anchor
    double drift = 0.0;  // sup |u/model - C| / C over the region
};

/// Deviation of u from a multiple of the model solution over a window.
inline DriftResult uniqueness_drift(const GridSolution& sol,
                                    const std::function<double(const Vec2&)>& model,
                                    const RegionSpec& region, const Vec2& anchor) {
    const Grid& g = *sol.grid;
    const int ia = std::clamp(int(std::round((anchor.x - g.lo.x) / g.h)), 1, g.nx - 2);
    const int ja = std::clamp(int(std::round((anchor.y - g.lo.y) / g.h)), 1, g.ny - 2);
    require(g.inside(ia, ja), ErrorCode::InvalidArgument, "anchor must be an interior node");
    const Vec2 xa = g.pos(ia, ja);
    const double ma = model(xa);
    require(std::abs(ma) > 0.0, ErrorCode::InvalidArgument, "model vanishes at the anchor");
    DriftResult out;
    out.C = sol.at(ia, ja) / ma;
    const auto nodes = collect_region(g, region);
    require(!nodes.empty(), ErrorCode::BandEmpty, "empty drift region");
    for (auto [i, j] : nodes) {
        const double mv = model(g.pos(i, j));
        if (std::abs(mv) < 1e-12) continue;
        out.drift = std::max(out.drift, std::abs(sol.at(i, j) / mv - out.C) / std::abs(out.C));
    }
    return out;
}

}  // namespace barrierlab
