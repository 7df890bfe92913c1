#pragma once

#include <cmath>
#include <array>
#include <memory>
#include <ostream>
#include <vector>

#include "barrierlab/common.hpp"
#include "barrierlab/geometry.hpp"
#include "barrierlab/odi.hpp"
#include "barrierlab/pucci.hpp"
#include "barrierlab/report.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Radial lift of a 1-D profile. InteriorSub evaluates h(2r - |x - y|) on the
// annulus r < |x-y| < 2r (strict classical subsolution there); ExteriorSuper
// evaluates h(|x - y| - r), additionally restricted to d(x, w) >= |x-y| - r.
// ---------------------------------------------------------------------------

enum class BarrierOrientation { InteriorSub, ExteriorSuper };

struct RadialBarrier {
    Vec2 center;  // y
    double r = 1.0;
    std::shared_ptr<const BarrierProfile> profile;
    BarrierOrientation orientation = BarrierOrientation::InteriorSub;
    Vec2 anchor;  // w; constrains the ExteriorSuper admissible set

    double radial_argument(const Vec2& x) const {
        const double rho = dist(x, center);
        return orientation == BarrierOrientation::InteriorSub ? 2.0 * r - rho : rho - r;
    }
};

inline RadialBarrier make_barrier(Vec2 center, double r, BarrierProfile profile,
                                  BarrierOrientation orientation, Vec2 anchor = {}) {
    require((orientation == BarrierOrientation::InteriorSub) ==
                (profile.side == OdiSide::Lower),
            ErrorCode::InvalidArgument,
            "profile side must match the barrier orientation (lower <-> interior sub)");
    RadialBarrier b;
    b.center = center;
    b.r = r;
    b.profile = std::make_shared<BarrierProfile>(std::move(profile));
    b.orientation = orientation;
    b.anchor = anchor;
    return b;
}

struct BarrierEval {
    double value = 0.0;
    Vec2 gradient;
    SymMat2 hessian;
};

/// Value, gradient and Hessian of the radial barrier at x. The gradient norm
/// is h' of the radial argument; the Hessian splits into the rank-one radial
/// part and the tangential part scaled by h'/|x-y|.
inline BarrierEval eval_with_derivatives(const RadialBarrier& b, const Vec2& x) {
    const double rho = dist(x, b.center);
    if (!(rho > b.r && rho < 2.0 * b.r))
        fail(ErrorCode::OutOfAnnulus, "evaluation point must satisfy r < |x-y| < 2r");
    const Vec2 nu = (x - b.center) / rho;
    const SymMat2 radial = SymMat2::outer(nu);
    const SymMat2 tangential = SymMat2::identity() - radial;
    const double arg = b.radial_argument(x);
    BarrierEval out;
    const auto& p = *b.profile;
    if (b.orientation == BarrierOrientation::InteriorSub) {
        out.value = p.h(arg);
        out.gradient = nu * (-p.hp(arg));
        out.hessian = radial * p.hpp(arg) - tangential * (p.hp(arg) / rho);
    } else {
        out.value = p.h(arg);
        out.gradient = nu * p.hp(arg);
        out.hessian = radial * p.hpp(arg) + tangential * (p.hp(arg) / rho);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strict sub/supersolution margins
// ---------------------------------------------------------------------------

struct MarginSampleSpec {
    int radii = 64;
    int angles = 128;
    int interior = 1000;
    uint64_t seed = 2024;
    bool collect = false;  // retain per-sample rows for CSV export
};

struct MarginResult {
    double worst_margin = 0.0;       // closest to zero over all samples
    double worst_slack = 0.0;        // margin magnitude minus the guaranteed gap (min over samples)
    size_t samples = 0;
    size_t rejected = 0;  // ExteriorSuper constraint-set rejections
    bool pass = false;
    std::vector<std::array<double, 4>> records;  // x, y, margin, guaranteed gap
};

inline void export_csv(const MarginResult& mr, std::ostream& os) {
    os << "x,y,margin,guaranteed\n";
    for (const auto& row : mr.records)
        os << format_double(row[0]) << ',' << format_double(row[1]) << ','
           << format_double(row[2]) << ',' << format_double(row[3]) << '\n';
}

/// Worst signed margin of the strict inequality over annulus samples:
/// InteriorSub wants Phi^+(d, U, |DU|) + P^+_{lam(d),Lam(d)}(D^2 U) < 0,
/// ExteriorSuper wants Phi^-(t, V, |DV|) + P^-_{lam(d_w),Lam(d_w)}(D^2 V) > 0.
/// The guaranteed gap h'(arg) Lambda(arg) (n/r - (n-1)/|x-y|) from the proof
/// chain is checked sample-by-sample.
inline MarginResult strict_margin(const RadialBarrier& b, const StructuralEnvelope& env,
                                  const DomainSpec& domain, const MarginSampleSpec& spec = {}) {
    const bool interior_sub = b.orientation == BarrierOrientation::InteriorSub;
    MarginResult out;
    out.worst_margin = interior_sub ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
    out.worst_slack = std::numeric_limits<double>::infinity();

    auto probe = [&](const Vec2& x) {
        const double rho = dist(x, b.center);
        if (!(rho > b.r * (1.0 + 1e-9) && rho < 2.0 * b.r * (1.0 - 1e-9))) return;
        const double d_bdry = boundary_distance(domain, x);
        const double arg = b.radial_argument(x);
        const auto ev = eval_with_derivatives(b, x);
        if (!(b.profile->hp(arg) > 0.0))
            fail(ErrorCode::HypothesisViolated, "barrier profile is not increasing");
        double margin;
        if (interior_sub) {
            // hypothesis chain: the radial argument never exceeds d(x, bdry)
            if (arg > d_bdry * (1.0 + 1e-9) + 1e-12)
                fail(ErrorCode::HypothesisViolated,
                     "interior barrier: radial argument exceeds the boundary distance");
            margin = env.phi_plus(d_bdry, ev.value, ev.gradient.norm()) +
                     pucci_plus(ev.hessian, env.pair.lam(d_bdry), env.pair.Lam(d_bdry));
        } else {
            const double d_w = dist(x, b.anchor);
            if (d_w < arg * (1.0 - 1e-9) - 1e-12) {
                ++out.rejected;  // outside the admissible constraint set
                return;
            }
            if (d_bdry > arg * (1.0 + 1e-9) + 1e-12)
                fail(ErrorCode::HypothesisViolated,
                     "exterior barrier: boundary distance exceeds the radial argument");
            const double t_phi =
                env.phi_minus_arg == DistanceArg::Boundary ? d_bdry : d_w;
            margin = env.phi_minus(t_phi, ev.value, ev.gradient.norm()) +
                     pucci_minus(ev.hessian, env.pair.lam(d_w), env.pair.Lam(d_w));
        }
        const double guaranteed = b.profile->hp(arg) * env.pair.Lam(arg) *
                                  (double(env.n) / b.r - double(env.n - 1) / rho);
        const double scale = std::max(1.0, std::abs(margin));
        if (spec.collect) out.records.push_back({x.x, x.y, margin, guaranteed});
        if (interior_sub) {
            out.worst_margin = std::max(out.worst_margin, margin);
            out.worst_slack = std::min(out.worst_slack, -margin - (guaranteed - 1e-12 * scale));
        } else {
            out.worst_margin = std::min(out.worst_margin, margin);
            out.worst_slack = std::min(out.worst_slack, margin - (guaranteed - 1e-12 * scale));
        }
        ++out.samples;
    };

    for (int i = 0; i < spec.radii; ++i) {
        const double rho = b.r * (1.0 + (i + 0.5) / spec.radii);
        for (int j = 0; j < spec.angles; ++j) {
            const double ang = 2.0 * kPi * (j + 0.5) / spec.angles;
            const Vec2 x = b.center + Vec2{std::cos(ang), std::sin(ang)} * rho;
            if (signed_distance(domain, x) > 0.0) probe(x);
        }
    }
    HaltonSampler hal(spec.seed);
    for (int i = 0; i < spec.interior; ++i) {
        const Vec2 u = hal.sample2(static_cast<uint64_t>(i) + 1);
        const double rho = b.r * (1.0 + 1e-6 + (1.0 - 2e-6) * u.x);
        const double ang = 2.0 * kPi * u.y;
        const Vec2 x = b.center + Vec2{std::cos(ang), std::sin(ang)} * rho;
        if (signed_distance(domain, x) > 0.0) probe(x);
    }
    require(out.samples > 0, ErrorCode::InvalidArgument, "no admissible samples hit the annulus");
    out.pass = (interior_sub ? out.worst_margin < 0.0 : out.worst_margin > 0.0) &&
               out.worst_slack >= 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Geometric placement
// ---------------------------------------------------------------------------

/// Center at distance 2r from the boundary along the inward normal through x,
/// so that 2r - |x - center| equals d(x, boundary) exactly.
inline RadialBarrier place_interior_barrier(const DomainSpec& domain, const Vec2& x, double r,
                                            BarrierProfile profile) {
    const double d = signed_distance(domain, x);
    require(d > 0.0 && d <= r, ErrorCode::InvalidArgument,
            "point must lie inside within distance r of the boundary");
    const Vec2 foot = nearest_boundary_point(domain, x);
    const auto witness = sphere_witness(domain, foot, 2.0 * r, SphereKind::Interior);
    return make_barrier(witness.center, r, std::move(profile), BarrierOrientation::InteriorSub);
}

struct ExteriorBarrierPair {
    RadialBarrier at_foot;    // centered at eta^e_r (exterior ball under x's foot point)
    RadialBarrier at_anchor;  // companion centered at eta^w_r
};

/// Exterior supersolution pair per the upper-estimate construction: one ball
/// under the foot point of x, one under the anchor w; on the constraint set
/// the anchor barrier lies below the foot barrier.
inline ExteriorBarrierPair place_exterior_barrier(const DomainSpec& domain, const Vec2& x,
                                                  const Vec2& w, double r,
                                                  const BarrierProfile& profile) {
    const double d = signed_distance(domain, x);
    require(d > 0.0 && d <= r, ErrorCode::InvalidArgument,
            "point must lie inside within distance r of the boundary");
    const Vec2 foot = nearest_boundary_point(domain, x);
    const auto we = sphere_witness(domain, foot, r, SphereKind::Exterior);
    const auto ww = sphere_witness(domain, w, r, SphereKind::Exterior);
    ExteriorBarrierPair out{
        make_barrier(we.center, r, profile, BarrierOrientation::ExteriorSuper, w),
        make_barrier(ww.center, r, profile, BarrierOrientation::ExteriorSuper, w)};
    return out;
}

/// Triangle-inequality ordering |y - eta^w_r| <= |y - eta^e_r| on sampled
/// constraint-set points; returns the worst (most negative) gap.
inline double exterior_ordering_gap(const ExteriorBarrierPair& pair, const DomainSpec& domain,
                                    int samples = 2000, uint64_t seed = 7) {
    HaltonSampler hal(seed);
    double worst = std::numeric_limits<double>::infinity();
    int kept = 0;
    uint64_t i = 1;
    while (kept < samples && i < 100000) {
        const Vec2 u = hal.sample2(i++);
        const double rho = pair.at_foot.r * (1.0 + 1e-3 + (1.0 - 2e-3) * u.x);
        const double ang = 2.0 * kPi * u.y;
        const Vec2 y = pair.at_foot.center + Vec2{std::cos(ang), std::sin(ang)} * rho;
        if (signed_distance(domain, y) <= 0.0) continue;
        const double zeta = rho - pair.at_foot.r;
        const double dw = dist(y, pair.at_foot.anchor);
        if (std::abs(dw - zeta) > 1e-3 * pair.at_foot.r) continue;  // boundary of the set Gamma
        worst = std::min(worst, dist(y, pair.at_foot.center) - dist(y, pair.at_anchor.center));
        ++kept;
    }
    return worst;
}

}  // namespace barrierlab
