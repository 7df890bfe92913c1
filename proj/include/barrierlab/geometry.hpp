#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "barrierlab/common.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Domain catalog. Every variant has a closed-form distance; no meshed or
// approximated geometry enters the verification path.
// ---------------------------------------------------------------------------

/// {x_axis > 0}; boundary is the hyperplane through the origin.
struct HalfPlane {
    int normal_axis = 2;  // 1 or 2; the coordinate that is positive inside
};

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

/// Upper half of a disk: {|x-c| < R, x2 > c2}.
struct HalfDisk {
    Vec2 center;
    double radius = 1.0;
};

struct Annulus {
    Vec2 center;
    double r_in = 0.5;
    double r_out = 1.0;
};

struct Rectangle {
    Vec2 corner;  // lower-left
    Vec2 widths;
};

/// Q^+ box: (w1-r, w1+r) x (w2, w2+r); the bottom edge is the reflection line.
struct HalfRectangle {
    Vec2 w;  // midpoint of the bottom edge
    double r = 1.0;
};

/// Planar wedge of half-opening pi/(2 nu) about the +x1 axis from the apex.
struct Sector {
    Vec2 apex;
    double nu = 1.0;  // nu >= 1/2
    double half_angle() const { return kPi / (2.0 * nu); }
};

/// Complement of an m-flat inside R^n, shown in its 2-D chart:
///   n - m == 1 : the flat is the x2-axis of the chart,
///   n - m == 2 : the flat appears as the chart origin.
struct FlatComplement {
    int m = 1;
    int n = 2;
    int chart_codim() const { return n - m; }
};

using DomainSpec =
    std::variant<HalfPlane, Disk, HalfDisk, Annulus, Rectangle, HalfRectangle, Sector,
                 FlatComplement>;

inline void validate(const DomainSpec& d) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                require(v.normal_axis == 1 || v.normal_axis == 2, ErrorCode::InvalidArgument,
                        "half-plane axis must be 1 or 2");
            } else if constexpr (std::is_same_v<T, Disk> || std::is_same_v<T, HalfDisk>) {
                require(v.radius > 0.0, ErrorCode::InvalidArgument, "radius must be positive");
            } else if constexpr (std::is_same_v<T, Annulus>) {
                require(v.r_in > 0.0 && v.r_in < v.r_out, ErrorCode::InvalidArgument,
                        "annulus needs 0 < r_in < r_out");
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                require(v.widths.x > 0.0 && v.widths.y > 0.0, ErrorCode::InvalidArgument,
                        "rectangle widths must be positive");
            } else if constexpr (std::is_same_v<T, HalfRectangle>) {
                require(v.r > 0.0, ErrorCode::InvalidArgument, "half-rectangle r must be positive");
            } else if constexpr (std::is_same_v<T, Sector>) {
                require(v.nu >= 0.5, ErrorCode::InvalidArgument, "sector needs nu >= 1/2");
            } else if constexpr (std::is_same_v<T, FlatComplement>) {
                require(v.m >= 1 && v.m < v.n, ErrorCode::InvalidArgument, "need 1 <= m < n");
                require(v.n - v.m <= 2, ErrorCode::InvalidArgument,
                        "chart supports codimension 1 or 2 only");
            }
        },
        d);
}

namespace detail {

inline Vec2 closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(x - a) / ab.norm2(), 0.0, 1.0);
    return a + ab * t;
}

inline Vec2 closest_on_ray(const Vec2& apex, const Vec2& dir, const Vec2& x) {
    const double t = std::max(0.0, dir.dot(x - apex));
    return apex + dir * t;
}

/// Closest point on the arc {c + R(cos a, sin a), a in [a0, a1]} (a1 - a0 <= 2 pi).
inline Vec2 closest_on_arc(const Vec2& c, double R, double a0, double a1, const Vec2& x) {
    const Vec2 v = x - c;
    double ang = std::atan2(v.y, v.x);
    // normalize into [a0, a0 + 2 pi)
    while (ang < a0) ang += 2.0 * kPi;
    while (ang >= a0 + 2.0 * kPi) ang -= 2.0 * kPi;
    if (ang <= a1) return c + Vec2{std::cos(ang), std::sin(ang)} * R;
    const Vec2 e0 = c + Vec2{std::cos(a0), std::sin(a0)} * R;
    const Vec2 e1 = c + Vec2{std::cos(a1), std::sin(a1)} * R;
    return dist(x, e0) <= dist(x, e1) ? e0 : e1;
}

/// All boundary-piece nearest-point candidates for a domain at x.
inline std::vector<Vec2> boundary_candidates(const DomainSpec& d, const Vec2& x) {
    std::vector<Vec2> out;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                out.push_back(v.normal_axis == 2 ? Vec2{x.x, 0.0} : Vec2{0.0, x.y});
            } else if constexpr (std::is_same_v<T, Disk>) {
                const Vec2 rel = x - v.center;
                const double rho = rel.norm();
                if (rho == 0.0) {
                    // full rotational symmetry: distance is well defined, the
                    // projection is not; two representatives force the tie
                    out.push_back(v.center + Vec2{v.radius, 0.0});
                    out.push_back(v.center - Vec2{v.radius, 0.0});
                } else {
                    out.push_back(v.center + rel * (v.radius / rho));
                }
            } else if constexpr (std::is_same_v<T, HalfDisk>) {
                out.push_back(closest_on_segment(v.center - Vec2{v.radius, 0.0},
                                                 v.center + Vec2{v.radius, 0.0}, x));
                out.push_back(closest_on_arc(v.center, v.radius, 0.0, kPi, x));
            } else if constexpr (std::is_same_v<T, Annulus>) {
                const Vec2 rel = x - v.center;
                const double rho = rel.norm();
                if (rho == 0.0) {
                    out.push_back(v.center + Vec2{v.r_in, 0.0});
                    out.push_back(v.center - Vec2{v.r_in, 0.0});
                } else {
                    out.push_back(v.center + rel * (v.r_in / rho));
                    out.push_back(v.center + rel * (v.r_out / rho));
                }
            } else if constexpr (std::is_same_v<T, Rectangle> || std::is_same_v<T, HalfRectangle>) {
                Vec2 lo, hi;
                if constexpr (std::is_same_v<T, Rectangle>) {
                    lo = v.corner;
                    hi = v.corner + v.widths;
                } else {
                    lo = {v.w.x - v.r, v.w.y};
                    hi = {v.w.x + v.r, v.w.y + v.r};
                }
                out.push_back(closest_on_segment({lo.x, lo.y}, {hi.x, lo.y}, x));
                out.push_back(closest_on_segment({lo.x, hi.y}, {hi.x, hi.y}, x));
                out.push_back(closest_on_segment({lo.x, lo.y}, {lo.x, hi.y}, x));
                out.push_back(closest_on_segment({hi.x, lo.y}, {hi.x, hi.y}, x));
            } else if constexpr (std::is_same_v<T, Sector>) {
                const double phi0 = v.half_angle();
                out.push_back(
                    closest_on_ray(v.apex, {std::cos(phi0), std::sin(phi0)}, x));
                out.push_back(
                    closest_on_ray(v.apex, {std::cos(phi0), -std::sin(phi0)}, x));
            } else if constexpr (std::is_same_v<T, FlatComplement>) {
                if (v.chart_codim() == 1)
                    out.push_back(Vec2{0.0, x.y});
                else
                    out.push_back(Vec2{0.0, 0.0});
            }
        },
        d);
    return out;
}

inline bool inside(const DomainSpec& d, const Vec2& x) {
    return std::visit(
        [&](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return (v.normal_axis == 2 ? x.y : x.x) > 0.0;
            } else if constexpr (std::is_same_v<T, Disk>) {
                return dist(x, v.center) < v.radius;
            } else if constexpr (std::is_same_v<T, HalfDisk>) {
                return dist(x, v.center) < v.radius && x.y > v.center.y;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                const double rho = dist(x, v.center);
                return rho > v.r_in && rho < v.r_out;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return x.x > v.corner.x && x.x < v.corner.x + v.widths.x && x.y > v.corner.y &&
                       x.y < v.corner.y + v.widths.y;
            } else if constexpr (std::is_same_v<T, HalfRectangle>) {
                return x.x > v.w.x - v.r && x.x < v.w.x + v.r && x.y > v.w.y && x.y < v.w.y + v.r;
            } else if constexpr (std::is_same_v<T, Sector>) {
                const Vec2 rel = x - v.apex;
                if (rel.norm() == 0.0) return false;
                return std::abs(std::atan2(rel.y, rel.x)) < v.half_angle();
            } else if constexpr (std::is_same_v<T, FlatComplement>) {
                return v.chart_codim() == 1 ? x.x != 0.0 : x.norm2() != 0.0;
            }
        },
        d);
}

}  // namespace detail

/// Exact distance to the boundary set of the domain (always >= 0).
inline double boundary_distance(const DomainSpec& d, const Vec2& x) {
    require(x.finite(), ErrorCode::InvalidArgument, "point must be finite");
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& c : detail::boundary_candidates(d, x)) best = std::min(best, dist(x, c));
    return best;
}

/// Signed distance: positive inside the domain, negative outside.
inline double signed_distance(const DomainSpec& d, const Vec2& x) {
    const double dd = boundary_distance(d, x);
    return detail::inside(d, x) ? dd : -dd;
}

/// Unique nearest boundary point. Throws AmbiguousProjection on the ridge set
/// (two boundary pieces tie, or a rotational center).
inline Vec2 nearest_boundary_point(const DomainSpec& d, const Vec2& x) {
    const auto cands = detail::boundary_candidates(d, x);
    double best = std::numeric_limits<double>::infinity();
    Vec2 arg;
    for (const Vec2& c : cands) {
        const double dd = dist(x, c);
        if (dd < best) {
            best = dd;
            arg = c;
        }
    }
    // ridge detection: a second candidate at (numerically) the same distance
    // but a different location is a genuine ambiguity, never tie-broken.
    const double scale = std::max(1.0, x.norm() + best);
    for (const Vec2& c : cands) {
        if (dist(x, c) <= best + 1e-12 * scale && dist(c, arg) > 1e-9 * scale)
            fail(ErrorCode::AmbiguousProjection, "point is equidistant to multiple boundary points");
    }
    return arg;
}

/// Inward unit normal at a boundary point w (throws NotSatisfied at corners
/// such as the sector apex or rectangle vertices).
inline Vec2 inward_normal(const DomainSpec& d, const Vec2& w) {
    return std::visit(
        [&](const auto& v) -> Vec2 {
            using T = std::decay_t<decltype(v)>;
            const double tol = 1e-9;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                return v.normal_axis == 2 ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
            } else if constexpr (std::is_same_v<T, Disk>) {
                return (v.center - w) / dist(v.center, w);
            } else if constexpr (std::is_same_v<T, HalfDisk>) {
                const bool on_flat = std::abs(w.y - v.center.y) <= tol;
                const bool on_arc = std::abs(dist(w, v.center) - v.radius) <= tol;
                if (on_flat && on_arc)
                    fail(ErrorCode::NotSatisfied, "corner of the half-disk has no normal");
                if (on_flat) return {0.0, 1.0};
                return (v.center - w) / dist(v.center, w);
            } else if constexpr (std::is_same_v<T, Annulus>) {
                const double rho = dist(w, v.center);
                const Vec2 u = (w - v.center) / rho;
                return std::abs(rho - v.r_in) < std::abs(rho - v.r_out) ? u : -u;
            } else if constexpr (std::is_same_v<T, Rectangle> || std::is_same_v<T, HalfRectangle>) {
                Vec2 lo, hi;
                if constexpr (std::is_same_v<T, Rectangle>) {
                    lo = v.corner;
                    hi = v.corner + v.widths;
                } else {
                    lo = {v.w.x - v.r, v.w.y};
                    hi = {v.w.x + v.r, v.w.y + v.r};
                }
                int hits = 0;
                Vec2 n;
                if (std::abs(w.x - lo.x) <= tol) { n = {1.0, 0.0}; ++hits; }
                if (std::abs(w.x - hi.x) <= tol) { n = {-1.0, 0.0}; ++hits; }
                if (std::abs(w.y - lo.y) <= tol) { n = {0.0, 1.0}; ++hits; }
                if (std::abs(w.y - hi.y) <= tol) { n = {0.0, -1.0}; ++hits; }
                if (hits != 1) fail(ErrorCode::NotSatisfied, "box corner has no normal");
                return n;
            } else if constexpr (std::is_same_v<T, Sector>) {
                const Vec2 rel = w - v.apex;
                if (rel.norm() <= tol)
                    fail(ErrorCode::NotSatisfied, "sector apex is a corner");
                const double phi0 = v.half_angle();
                const double ang = std::atan2(rel.y, rel.x);
                // normal of the touched ray, pointing into |phi| < phi0
                if (std::abs(ang - phi0) < std::abs(ang + phi0))
                    return {std::sin(phi0), -std::cos(phi0)};
                return {std::sin(phi0), std::cos(phi0)};
            } else if constexpr (std::is_same_v<T, FlatComplement>) {
                if (v.chart_codim() == 1) return {1.0, 0.0};  // convention: +x1 side
                return {1.0, 0.0};
            }
        },
        d);
}

// ---------------------------------------------------------------------------
// Sphere witnesses
// ---------------------------------------------------------------------------

enum class SphereKind { Interior, Exterior };

struct SphereWitness {
    SphereKind kind = SphereKind::Interior;
    Vec2 touching_point;
    Vec2 center;
    double radius = 0.0;
};

/// Tangent-ball witness at a boundary point. The candidate center is placed
/// along the (inward or outward) normal and validated against the exact
/// signed distance, so the containment invariant holds to 1e-12.
inline SphereWitness sphere_witness(const DomainSpec& dom, const Vec2& w, double radius,
                                    SphereKind kind) {
    require(radius > 0.0, ErrorCode::InvalidArgument, "witness radius must be positive");
    require(boundary_distance(dom, w) <= 1e-9 * std::max(1.0, w.norm()), ErrorCode::InvalidArgument,
            "witness point must lie on the boundary");
    if (std::holds_alternative<FlatComplement>(dom) && kind == SphereKind::Exterior)
        fail(ErrorCode::NotSatisfied, "a flat's complement has no exterior balls");
    const Vec2 n = inward_normal(dom, w);
    const Vec2 eta = (kind == SphereKind::Interior) ? w + n * radius : w - n * radius;
    const double sd = signed_distance(dom, eta);
    const double tol = 1e-12 * std::max(1.0, radius);
    if (kind == SphereKind::Interior) {
        if (sd < radius - tol)
            fail(ErrorCode::NotSatisfied, "no interior ball of this radius fits at the point");
    } else {
        if (-sd < radius - tol)
            fail(ErrorCode::NotSatisfied, "no exterior ball of this radius fits at the point");
    }
    return {kind, w, eta, radius};
}

inline std::string domain_name(const DomainSpec& d) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HalfPlane>) return "half_plane";
            else if constexpr (std::is_same_v<T, Disk>) return "disk";
            else if constexpr (std::is_same_v<T, HalfDisk>) return "half_disk";
            else if constexpr (std::is_same_v<T, Annulus>) return "annulus";
            else if constexpr (std::is_same_v<T, Rectangle>) return "rectangle";
            else if constexpr (std::is_same_v<T, HalfRectangle>) return "half_rectangle";
            else if constexpr (std::is_same_v<T, Sector>) return "sector";
            else return "flat_complement";
        },
        d);
}

}  // namespace barrierlab
