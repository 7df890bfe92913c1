#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "barrierlab/common.hpp"
#include "barrierlab/geometry.hpp"
#include "barrierlab/report.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Extremal operators. Sign convention, fixed once for the whole project:
// F(x, u, Du, D^2u) with P+-(X) = -lambda tr(X+) + Lambda tr(X-) (and its
// inf counterpart); a subsolution satisfies F <= 0 at touching points. In
// particular the Laplace instance is F = -tr(X).
// ---------------------------------------------------------------------------

inline double pucci_plus(const SymMat2& X, double lambda, double Lambda) {
    require(0.0 < lambda && lambda <= Lambda, ErrorCode::InvalidArgument,
            "need 0 < lambda <= Lambda");
    const auto [e1, e2] = X.eigenvalues();
    return -lambda * (pos_part(e1) + pos_part(e2)) + Lambda * (neg_part(e1) + neg_part(e2));
}

inline double pucci_minus(const SymMat2& X, double lambda, double Lambda) {
    require(0.0 < lambda && lambda <= Lambda, ErrorCode::InvalidArgument,
            "need 0 < lambda <= Lambda");
    const auto [e1, e2] = X.eigenvalues();
    return -Lambda * (pos_part(e1) + pos_part(e2)) + lambda * (neg_part(e1) + neg_part(e2));
}

/// 1-D specialization (used by the profile-side algebra).
inline double pucci_plus_1d(double x, double lambda, double Lambda) {
    return x >= 0.0 ? -lambda * x : -Lambda * x;
}
inline double pucci_minus_1d(double x, double lambda, double Lambda) {
    return x >= 0.0 ? -Lambda * x : -lambda * x;
}

// ---------------------------------------------------------------------------
// Parametric ellipticity families lambda(t) <= Lambda(t)
// ---------------------------------------------------------------------------

/// Which distance feeds the ellipticity argument t.
enum class DistanceArg { Boundary, Anchor };

struct EllipticityFn {
    enum class Kind { Constant, Power } kind = Kind::Constant;
    double value = 1.0;     // Constant level
    double exponent = 0.0;  // Power: t^exponent (coefficient 1)

    static EllipticityFn constant(double v) { return {Kind::Constant, v, 0.0}; }
    static EllipticityFn power(double a) { return {Kind::Power, 1.0, a}; }

    double operator()(double t) const {
        return kind == Kind::Constant ? value : std::pow(t, exponent);
    }
    bool is_constant() const { return kind == Kind::Constant; }
};

struct EllipticityPair {
    EllipticityFn lambda = EllipticityFn::constant(1.0);
    EllipticityFn Lambda = EllipticityFn::constant(1.0);
    DistanceArg arg = DistanceArg::Boundary;

    double lam(double t) const { return lambda(t); }
    double Lam(double t) const { return Lambda(t); }
    bool constant() const { return lambda.is_constant() && Lambda.is_constant(); }

    void validate(double r) const {
        require(r > 0.0, ErrorCode::InvalidArgument, "working radius must be positive");
        // lambda nondecreasing, Lambda nonincreasing
        if (lambda.kind == EllipticityFn::Kind::Power)
            require(lambda.exponent > 0.0 && lambda.exponent < 1.0, ErrorCode::InvalidArgument,
                    "lambda power exponent must be in (0,1)");
        if (Lambda.kind == EllipticityFn::Kind::Power)
            require(Lambda.exponent < 0.0, ErrorCode::InvalidArgument,
                    "Lambda power exponent must be negative");
        if (lambda.is_constant())
            require(lambda.value > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
        if (Lambda.is_constant())
            require(Lambda.value > 0.0, ErrorCode::InvalidArgument, "Lambda must be positive");
        for (int j = 1; j <= 64; ++j) {
            const double t = r * double(j) / 64.0;
            require(lam(t) <= Lam(t) * (1.0 + 1e-12), ErrorCode::InvalidArgument,
                    "need lambda(t) <= Lambda(t) on (0, r]");
        }
    }
};

// ---------------------------------------------------------------------------
// Lower-order terms Phi(t, s, |p|)
// ---------------------------------------------------------------------------

enum class SignClass { NonNegative, NonPositive };

struct LowerOrderTerm {
    enum class Kind { Zero, Constant, GradientPower, QuadraticDrift } kind = Kind::Zero;
    SignClass sign = SignClass::NonNegative;
    double c0 = 0.0;        // Constant level (sign must match the class)
    double exponent = 1.0;  // GradientPower: sign * q^exponent, exponent >= 1
    double mu = 0.0;        // QuadraticDrift: mu (q + q^2)
    double c_omega = 0.0;   // QuadraticDrift: + c_omega sqrt(s) on the nonnegative side

    static LowerOrderTerm zero() { return {}; }
    static LowerOrderTerm constant(double c) {
        LowerOrderTerm t;
        t.kind = Kind::Constant;
        t.c0 = c;
        t.sign = c >= 0.0 ? SignClass::NonNegative : SignClass::NonPositive;
        return t;
    }
    static LowerOrderTerm gradient_power(double signum, double k) {
        require(k >= 1.0, ErrorCode::InvalidArgument, "gradient power exponent must be >= 1");
        LowerOrderTerm t;
        t.kind = Kind::GradientPower;
        t.exponent = k;
        t.sign = signum >= 0.0 ? SignClass::NonNegative : SignClass::NonPositive;
        return t;
    }
    static LowerOrderTerm quadratic_drift(double mu, double c_omega, SignClass sign) {
        require(mu >= 0.0 && c_omega >= 0.0, ErrorCode::InvalidArgument,
                "drift coefficients must be nonnegative");
        LowerOrderTerm t;
        t.kind = Kind::QuadraticDrift;
        t.mu = mu;
        t.c_omega = c_omega;
        t.sign = sign;
        return t;
    }

    bool is_zero() const { return kind == Kind::Zero; }

    /// Phi(t, s, q); constant in t for every catalog variant, which makes the
    /// monotonicity-in-t hypotheses hold in both lower and upper roles.
    double operator()(double /*t*/, double s, double q) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return c0;
            case Kind::GradientPower:
                return (sign == SignClass::NonNegative ? 1.0 : -1.0) * std::pow(q, exponent);
            case Kind::QuadraticDrift: {
                const double core = mu * (q + q * q);
                if (sign == SignClass::NonNegative) return core + c_omega * std::sqrt(std::max(s, 0.0));
                return -core;
            }
        }
        return 0.0;
    }
};

// ---------------------------------------------------------------------------
// Model operators
// ---------------------------------------------------------------------------

/// Exponent field p(x) = c0 + c1 x1 + c2 x2 + cq x1^2 with validated bounds.
struct ExponentField {
    double c0 = 2.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double cq = 0.0;
    double p_min = 1.5;  // declared bounds on the working box
    double p_max = 3.0;
    double lipschitz = 0.0;

    double operator()(const Vec2& x) const { return c0 + c1 * x.x + c2 * x.y + cq * x.x * x.x; }
    Vec2 grad(const Vec2& x) const { return {c1 + 2.0 * cq * x.x, c2}; }

    void validate_on(const Vec2& lo, const Vec2& hi) {
        double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin, lip = 0.0;
        for (int i = 0; i <= 16; ++i)
            for (int j = 0; j <= 16; ++j) {
                const Vec2 x{lo.x + (hi.x - lo.x) * i / 16.0, lo.y + (hi.y - lo.y) * j / 16.0};
                pmin = std::min(pmin, (*this)(x));
                pmax = std::max(pmax, (*this)(x));
                lip = std::max(lip, grad(x).norm());
            }
        require(pmin > 1.0, ErrorCode::InvalidArgument, "exponent field must stay > 1");
        p_min = pmin;
        p_max = pmax;
        lipschitz = lip;
    }
};

struct LaplaceOp {};
struct InfinityLaplaceOp {};
struct PLaplaceOp {
    double p = 2.0;
};
struct PxLaplaceOp {
    ExponentField field;
};
/// F = Phi(t, s, |p|) + P^{+/-}_{lambda(t), Lambda(t)}(X); the operators that
/// saturate the structural envelopes. Carries its own geometry so t resolves.
struct PucciEnvelopeOp {
    bool plus = true;  // which extremal operator
    EllipticityPair pair;
    LowerOrderTerm phi;
    DomainSpec domain = HalfPlane{};
    Vec2 anchor;  // w, used when pair.arg == DistanceArg::Anchor
};
/// F = c + P^+ (c = +1) or c + P^- (c = -1), constant ellipticity.
struct PucciConstRhsOp {
    double lambda = 1.0;
    double Lambda = 1.0;
    double c = 1.0;  // in {-1, +1}
};

using ModelOperator =
    std::variant<LaplaceOp, InfinityLaplaceOp, PLaplaceOp, PxLaplaceOp, PucciEnvelopeOp,
                 PucciConstRhsOp>;

inline std::string operator_name(const ModelOperator& op) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LaplaceOp>) return "laplace";
            else if constexpr (std::is_same_v<T, InfinityLaplaceOp>) return "infinity_laplace";
            else if constexpr (std::is_same_v<T, PLaplaceOp>) return "p_laplace";
            else if constexpr (std::is_same_v<T, PxLaplaceOp>) return "px_laplace";
            else if constexpr (std::is_same_v<T, PucciEnvelopeOp>)
                return v.plus ? "pucci_plus_envelope" : "pucci_minus_envelope";
            else return "pucci_const_rhs";
        },
        op);
}

/// Unnormalized infinity Laplacian sum p_i p_j X_ij (no gradient division).
inline double infinity_form(const Vec2& p, const SymMat2& X) { return X.quad(p); }

/// F(x, s, p, X) under the project sign convention.
inline double eval_operator(const ModelOperator& op, const Vec2& x, double s, const Vec2& p,
                            const SymMat2& X) {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LaplaceOp>) {
                (void)v;
                return -X.trace();
            } else if constexpr (std::is_same_v<T, InfinityLaplaceOp>) {
                (void)v;
                return -infinity_form(p, X);
            } else if constexpr (std::is_same_v<T, PLaplaceOp>) {
                if (v.p == 2.0) return -X.trace();
                const double g2 = p.norm2();
                if (g2 == 0.0)
                    fail(ErrorCode::DegenerateGradient, "p-Laplace undefined at zero gradient");
                return -(X.trace() + (v.p - 2.0) * X.quad(p) / g2);
            } else if constexpr (std::is_same_v<T, PxLaplaceOp>) {
                const double g2 = p.norm2();
                const double px = v.field(x);
                if (g2 == 0.0) {
                    if (px == 2.0 && v.field.grad(x).norm() == 0.0) return -X.trace();
                    fail(ErrorCode::DegenerateGradient, "p(x)-Laplace undefined at zero gradient");
                }
                const double gn = std::sqrt(g2);
                return -(X.trace() + (px - 2.0) * X.quad(p) / g2 +
                         v.field.grad(x).dot(p) * std::log(gn));
            } else if constexpr (std::is_same_v<T, PucciEnvelopeOp>) {
                double t = 0.0;
                if (v.pair.arg == DistanceArg::Boundary)
                    t = boundary_distance(v.domain, x);
                else
                    t = dist(x, v.anchor);
                const double lam = v.pair.lam(t), Lam = v.pair.Lam(t);
                const double extremal = v.plus ? pucci_plus(X, lam, Lam) : pucci_minus(X, lam, Lam);
                return v.phi(t, s, p.norm()) + extremal;
            } else {  // PucciConstRhsOp
                return v.c + (v.c >= 0.0 ? pucci_plus(X, v.lambda, v.Lambda)
                                         : pucci_minus(X, v.lambda, v.Lambda));
            }
        },
        op);
}

// ---------------------------------------------------------------------------
// Structural envelope:  Phi^-(t-, s, |p|) + P^-_{lam(t^), Lam(t^)}(X)
//                          <= F(x, s, p, X) <=
//                       Phi^+(t*, s, |p|) + P^+_{lam(t*), Lam(t*)}(X)
// with t* = d(x, boundary) on the lower-estimate side and t^ = d(x, w) on the
// upper-estimate side (Phi^-'s own argument follows its monotonicity mode).
// ---------------------------------------------------------------------------

struct StructuralEnvelope {
    EllipticityPair pair;
    LowerOrderTerm phi_plus = LowerOrderTerm::zero();
    LowerOrderTerm phi_minus = LowerOrderTerm::zero();
    /// Phi^- argument: nonincreasing mode uses d(x, boundary), nondecreasing
    /// mode uses d(x, w).
    DistanceArg phi_minus_arg = DistanceArg::Boundary;
    int n = 2;
    double r = 1.0;
    Vec2 anchor;  // w on the boundary
    DomainSpec domain = HalfPlane{};

    void validate() const {
        require(n >= 1, ErrorCode::InvalidArgument, "dimension must be >= 1");
        pair.validate(r);
    }
};

struct EnvelopeSample {
    Vec2 x;
    double s = 0.0;
    Vec2 p;
    SymMat2 X;
};

/// Default sample box for an envelope: points in the boundary band of w,
/// values/gradients/Hessians over a moderate range. Deterministic in seed.
inline std::vector<EnvelopeSample> envelope_samples(const StructuralEnvelope& env, int count,
                                                    uint64_t seed) {
    HaltonSampler hal(seed);
    std::vector<EnvelopeSample> out;
    out.reserve(static_cast<size_t>(count));
    const Vec2 nrm = inward_normal(env.domain, env.anchor);
    const Vec2 tang{-nrm.y, nrm.x};
    uint64_t i = 1;
    while (out.size() < static_cast<size_t>(count)) {
        const Vec2 u = hal.sample2(i);
        const Vec2 q = hal.sample2(i + 7919);
        const double w1 = hal.sample1(i);
        const double w2 = hal.sample1(i + 104729);
        ++i;
        const Vec2 x = env.anchor + nrm * (env.r * (0.02 + 0.96 * u.x)) +
                       tang * (env.r * (u.y - 0.5));
        if (signed_distance(env.domain, x) <= 1e-9) continue;
        EnvelopeSample smp;
        smp.x = x;
        smp.s = 2.0 * w1 + 1e-6;
        const double ang = 2.0 * kPi * q.x;
        const double mag = 0.05 + 3.0 * q.y;
        smp.p = {mag * std::cos(ang), mag * std::sin(ang)};
        smp.X = SymMat2{4.0 * (w2 - 0.5) * 2.0, 4.0 * (q.y - 0.5), 4.0 * (u.x - 0.5) * 2.0};
        out.push_back(smp);
    }
    return out;
}

/// Max violation of both envelope inequalities over the samples; pass iff
/// both are <= 0 within 1e-12 of the sample scale.
inline Report envelope_check(const StructuralEnvelope& env, const ModelOperator& op,
                             const std::vector<EnvelopeSample>& samples) {
    env.validate();
    Report rep;
    rep.id = "envelope:" + operator_name(op);
    double worst_upper = -std::numeric_limits<double>::infinity();
    double worst_lower = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (const auto& smp : samples) {
        const double t_bdry = boundary_distance(env.domain, smp.x);
        const double t_anchor = dist(smp.x, env.anchor);
        const double F = eval_operator(op, smp.x, smp.s, smp.p, smp.X);
        const double up = env.phi_plus(t_bdry, smp.s, smp.p.norm()) +
                          pucci_plus(smp.X, env.pair.lam(t_bdry), env.pair.Lam(t_bdry));
        const double t_phi_minus =
            env.phi_minus_arg == DistanceArg::Boundary ? t_bdry : t_anchor;
        const double lo = env.phi_minus(t_phi_minus, smp.s, smp.p.norm()) +
                          pucci_minus(smp.X, env.pair.lam(t_anchor), env.pair.Lam(t_anchor));
        worst_upper = std::max(worst_upper, F - up);
        worst_lower = std::max(worst_lower, lo - F);
        scale = std::max({scale, std::abs(F), std::abs(up), std::abs(lo)});
    }
    const double tol = 1e-12 * scale;
    rep.measure("max_upper_violation", worst_upper);
    rep.measure("max_lower_violation", worst_lower);
    rep.measure("samples", double(samples.size()));
    rep.tolerance("violation", tol);
    rep.pass = worst_upper <= tol && worst_lower <= tol;
    return rep;
}

}  // namespace barrierlab
