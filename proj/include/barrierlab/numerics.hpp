#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "barrierlab/common.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Meshes and quadrature
// ---------------------------------------------------------------------------

/// Graded mesh t_j = r (j/N)^power on [0, r]. power = 2 clusters nodes at the
/// left endpoint, where vanishing ellipticity or gradient blow-up lives.
inline std::vector<double> graded_mesh(double r, int n, double power = 2.0) {
    std::vector<double> t(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) t[static_cast<size_t>(j)] = r * std::pow(double(j) / n, power);
    t.front() = 0.0;
    t.back() = r;
    return t;
}

inline std::vector<double> uniform_mesh(double a, double b, int n) {
    std::vector<double> t(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) t[static_cast<size_t>(j)] = a + (b - a) * double(j) / n;
    return t;
}

/// Cumulative integral of f on the given mesh: composite Simpson per interval
/// (midpoint-refined). Returns I with I[j] = int_{t0}^{tj} f.
inline std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                               const std::vector<double>& t) {
    std::vector<double> acc(t.size(), 0.0);
    for (size_t j = 1; j < t.size(); ++j) {
        const double a = t[j - 1], b = t[j];
        const double m = 0.5 * (a + b);
        acc[j] = acc[j - 1] + (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    }
    return acc;
}

/// Adaptive Simpson on [a, b]. Terminates on the requested tolerance or the
/// round-off floor of the panel estimates, whichever is hit first.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-12, int max_depth = 28) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = std::abs(left + right - whole);
            const double floor =
                64.0 * std::numeric_limits<double>::epsilon() *
                (std::abs(left) + std::abs(right) + std::abs(whole));
            if (depth <= 0 || delta <= std::max(15.0 * tol, floor))
                return left + right + (left + right - whole) / 15.0;
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } rec{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec.run(a, b, fa, fm, fb, whole, tol, max_depth);
}

// ---------------------------------------------------------------------------
// ODE integration (2nd-order scalar IVP) with step-doubling error control
// ---------------------------------------------------------------------------

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double min_step = 1e-300;
    long max_steps = 10'000'000;
};

/// One classical RK4 step for y'' = rhs(t, y, y').
inline void rk4_step2(const std::function<double(double, double, double)>& rhs, double t, double dt,
                      double& y, double& yp) {
    const double k1y = yp;
    const double k1p = rhs(t, y, yp);
    const double k2y = yp + 0.5 * dt * k1p;
    const double k2p = rhs(t + 0.5 * dt, y + 0.5 * dt * k1y, yp + 0.5 * dt * k1p);
    const double k3y = yp + 0.5 * dt * k2p;
    const double k3p = rhs(t + 0.5 * dt, y + 0.5 * dt * k2y, yp + 0.5 * dt * k2p);
    const double k4y = yp + dt * k3p;
    const double k4p = rhs(t + dt, y + dt * k3y, yp + dt * k3p);
    y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yp += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

/// Integrate y'' = rhs from t0 to t1 with adaptive step doubling; returns the
/// endpoint state. Throws StiffnessFailure when the controller underflows.
inline void integrate_ode2(const std::function<double(double, double, double)>& rhs, double t0,
                           double t1, double& y, double& yp, const OdeOptions& opt = {}) {
    double t = t0;
    double dt = (t1 - t0) / 16.0;
    long steps = 0;
    while (t < t1) {
        if (++steps > opt.max_steps) fail(ErrorCode::StiffnessFailure, "step budget exhausted");
        dt = std::min(dt, t1 - t);
        // full step vs two half steps
        double y1 = y, p1 = yp;
        rk4_step2(rhs, t, dt, y1, p1);
        double y2 = y, p2 = yp;
        rk4_step2(rhs, t, 0.5 * dt, y2, p2);
        rk4_step2(rhs, t + 0.5 * dt, 0.5 * dt, y2, p2);
        const double scale = opt.abs_tol + opt.rel_tol * std::max({std::abs(y2), std::abs(p2), 1.0});
        const double err = std::max(std::abs(y1 - y2), std::abs(p1 - p2));
        if (!std::isfinite(err) || err > scale) {
            dt *= 0.5;
            if (dt < opt.min_step) fail(ErrorCode::StiffnessFailure, "step size underflow");
            continue;
        }
        // accept the Richardson-extrapolated state
        y = y2 + (y2 - y1) / 15.0;
        yp = p2 + (p2 - p1) / 15.0;
        t += dt;
        if (err < 0.03 * scale) dt *= 2.0;
    }
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Bisection on [lo, hi] for increasing-or-decreasing f with a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double flo, double fhi, double xtol, int max_iter = 200) {
    require((flo <= 0.0) != (fhi <= 0.0) || flo == 0.0 || fhi == 0.0, ErrorCode::InvalidArgument,
            "bisect: no sign change in bracket");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Least squares in the plane (used for exponent fits)
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;  // in the ordinate's units
    size_t count = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit out;
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) ss += sq(ys[i] - (out.intercept + out.slope * xs[i]));
    out.rms_residual = std::sqrt(ss / n);
    out.count = n;
    return out;
}

// ---------------------------------------------------------------------------
// Low-discrepancy sampling (seeded, reproducible)
// ---------------------------------------------------------------------------

/// Halton sequence with a seed-dependent leap offset; deterministic for a
/// given (seed, index).
class HaltonSampler {
  public:
    explicit HaltonSampler(uint64_t seed = 0) : offset_(1 + (seed % 65536) * 7) {}

    double radical_inverse(uint64_t i, uint64_t base) const {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= double(base);
            r += f * double(i % base);
            i /= base;
        }
        return r;
    }

    /// Point in [0,1)^2 at sequence index i.
    Vec2 sample2(uint64_t i) const {
        const uint64_t k = i + offset_;
        return {radical_inverse(k, 2), radical_inverse(k, 3)};
    }

    /// Scalar in [0,1) from a third base, independent of sample2 coordinates.
    double sample1(uint64_t i) const { return radical_inverse(i + offset_, 5); }

  private:
    uint64_t offset_;
};

/// FNV-1a over bytes; used for report input fingerprints.
inline uint64_t fnv1a(const std::string& data, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Cubic Hermite evaluation on a sorted mesh with nodal values and slopes.
class HermiteSpline {
  public:
    HermiteSpline() = default;
    HermiteSpline(std::vector<double> t, std::vector<double> v, std::vector<double> d)
        : t_(std::move(t)), v_(std::move(v)), d_(std::move(d)) {}

    double value(double x) const {
        const size_t j = locate(x);
        const double h = t_[j + 1] - t_[j];
        const double s = (x - t_[j]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * v_[j] + (s3 - 2 * s2 + s) * h * d_[j] +
               (-2 * s3 + 3 * s2) * v_[j + 1] + (s3 - s2) * h * d_[j + 1];
    }

    double derivative(double x) const {
        const size_t j = locate(x);
        const double h = t_[j + 1] - t_[j];
        const double s = (x - t_[j]) / h;
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * v_[j] + (3 * s2 - 4 * s + 1) * h * d_[j] +
                (-6 * s2 + 6 * s) * v_[j + 1] + (3 * s2 - 2 * s) * h * d_[j + 1]) /
               h;
    }

    double second_derivative(double x) const {
        const size_t j = locate(x);
        const double h = t_[j + 1] - t_[j];
        const double s = (x - t_[j]) / h;
        return ((12 * s - 6) * v_[j] + (6 * s - 4) * h * d_[j] + (-12 * s + 6) * v_[j + 1] +
                (6 * s - 2) * h * d_[j + 1]) /
               (h * h);
    }

    const std::vector<double>& mesh() const { return t_; }

  private:
    size_t locate(double x) const {
        auto it = std::upper_bound(t_.begin(), t_.end(), x);
        size_t j = (it == t_.begin()) ? 0 : size_t(it - t_.begin()) - 1;
        return std::min(j, t_.size() - 2);
    }

    std::vector<double> t_, v_, d_;
};

}  // namespace barrierlab
