#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "barrierlab/pucci.hpp"

using namespace barrierlab;

namespace {

SymMat2 random_sym(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

Vec2 random_vec(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("extremal operator values") {
    CHECK(pucci_plus(SymMat2::zero(), 1.0, 2.0) == 0.0);
    // diag(1,-1), lambda=1, Lambda=2: eigenvalues +-1, -1*1 + 2*1 = 1
    CHECK(pucci_plus(SymMat2::diag(1, -1), 1, 2) == Catch::Approx(1.0));
    // diag(1,1): no negative part, -lambda tr = -2
    CHECK(pucci_plus(SymMat2::diag(1, 1), 1, 2) == Catch::Approx(-2.0));
    // inf side: -2*1 + 1*1 = -1
    CHECK(pucci_minus(SymMat2::diag(1, -1), 1, 2) == Catch::Approx(-1.0));
}

TEST_CASE("extremal operator algebra on random matrices") {
    std::mt19937_64 rng(101);
    for (int s = 0; s < 2000; ++s) {
        const SymMat2 X = random_sym(rng);
        const SymMat2 Y = random_sym(rng);
        const double lam = 0.5 + 0.001 * (s % 7), Lam = lam + 1.0;
        // P+(X) = -P-(-X)
        CHECK(std::abs(pucci_plus(X, lam, Lam) + pucci_minus(X * -1.0, lam, Lam)) < 1e-12);
        // inf over the same coefficient set never exceeds the sup
        CHECK(pucci_minus(X, lam, Lam) <= pucci_plus(X, lam, Lam) + 1e-12);
        // sublinearity of the sup
        CHECK(pucci_plus(X + Y, lam, Lam) <=
              pucci_plus(X, lam, Lam) + pucci_plus(Y, lam, Lam) + 1e-12);
    }
}

TEST_CASE("operator evaluations") {
    // infinity Laplacian weights only the gradient direction
    CHECK(eval_operator(InfinityLaplaceOp{}, {0, 0}, 0.0, {0.0, 1.0}, SymMat2::diag(5, 0)) ==
          Catch::Approx(0.0));
    CHECK(eval_operator(LaplaceOp{}, {0, 0}, 0.0, {1, 0}, SymMat2::diag(1, -1)) ==
          Catch::Approx(0.0));
    // cone |x|: p = x/|x|, D^2 = (I - p p^T)/|x|, so the gradient direction is
    // annihilated and the infinity Laplacian vanishes
    std::mt19937_64 rng(5);
    for (int s = 0; s < 200; ++s) {
        const Vec2 x = random_vec(rng) + Vec2{3.0, 0.0};
        const double nrm = x.norm();
        const Vec2 p = x / nrm;
        const SymMat2 X = (SymMat2::identity() - SymMat2::outer(p)) * (1.0 / nrm);
        CHECK(std::abs(eval_operator(InfinityLaplaceOp{}, x, 0.0, p, X)) < 1e-12);
    }
    CHECK_THROWS_AS(eval_operator(PLaplaceOp{3.0}, {0, 0}, 0.0, {0, 0}, SymMat2::identity()),
                    Error);
}

TEST_CASE("degenerate ellipticity and properness across the catalog") {
    std::mt19937_64 rng(4242);
    PucciEnvelopeOp env_op;
    env_op.pair.lambda = EllipticityFn::constant(1.0);
    env_op.pair.Lambda = EllipticityFn::constant(2.0);
    env_op.phi = LowerOrderTerm::quadratic_drift(0.5, 0.3, SignClass::NonNegative);
    env_op.domain = HalfPlane{2};
    PxLaplaceOp px;
    px.field.c0 = 2.0;
    px.field.cq = 0.25;
    const std::vector<ModelOperator> ops = {LaplaceOp{},      InfinityLaplaceOp{},
                                            PLaplaceOp{3.0},  PxLaplaceOp{px},
                                            ModelOperator{env_op}, PucciConstRhsOp{1, 2, 1}};
    for (const auto& op : ops) {
        for (int s = 0; s < 400; ++s) {
            const Vec2 x{0.3, 0.4 + 0.2 * (s % 5)};
            const Vec2 p = random_vec(rng) + Vec2{0.05, 0.0};
            const SymMat2 X = random_sym(rng);
            const Vec2 t = random_vec(rng);
            const SymMat2 Y = X + SymMat2::outer(t);  // Y >= X
            const double sv = 0.5 + 0.2 * (s % 3);
            // nonincreasing in the Hessian slot
            CHECK(eval_operator(op, x, sv, p, Y) <= eval_operator(op, x, sv, p, X) + 1e-12);
            // nondecreasing in the value slot where it enters
            CHECK(eval_operator(op, x, sv + 0.5, p, X) >=
                  eval_operator(op, x, sv, p, X) - 1e-12);
        }
    }
}

TEST_CASE("p = 2 collapses to the Laplacian") {
    std::mt19937_64 rng(33);
    for (int s = 0; s < 500; ++s) {
        const Vec2 p = random_vec(rng) + Vec2{0.01, 0.0};
        const SymMat2 X = random_sym(rng);
        CHECK(eval_operator(PLaplaceOp{2.0}, {0, 0}, 0.0, p, X) ==
              Catch::Approx(eval_operator(LaplaceOp{}, {0, 0}, 0.0, p, X)));
    }
}

TEST_CASE("structural envelope checks") {
    StructuralEnvelope env;
    env.pair.lambda = EllipticityFn::constant(1.0);
    env.pair.Lambda = EllipticityFn::constant(1.0);
    env.n = 2;
    env.r = 0.5;
    env.domain = HalfPlane{2};
    env.anchor = {0.0, 0.0};
    const auto samples = envelope_samples(env, 500, 1);

    SECTION("Laplace saturates the unit-ellipticity envelope") {
        const Report r = envelope_check(env, LaplaceOp{}, samples);
        CHECK(r.pass);
        CHECK(std::abs(r.measured_value("max_upper_violation")) < 1e-12);
    }
    SECTION("constant forcing fits the +-1 envelope") {
        StructuralEnvelope env2 = env;
        env2.pair.Lambda = EllipticityFn::constant(2.0);
        env2.phi_plus = LowerOrderTerm::constant(1.0);
        env2.phi_minus = LowerOrderTerm::constant(-1.0);
        const Report r =
            envelope_check(env2, PucciConstRhsOp{1.0, 2.0, 1.0}, envelope_samples(env2, 500, 2));
        CHECK(r.pass);
    }
    SECTION("infinity Laplacian escapes every uniformly elliptic envelope") {
        // p = (1,0), X = diag(0,-1): F = 0 while the lower envelope keeps
        // lambda * tr(X^-) = lambda > 0
        std::vector<EnvelopeSample> bad = samples;
        EnvelopeSample s;
        s.x = {0.0, 0.25};
        s.s = 1.0;
        s.p = {1.0, 0.0};
        s.X = SymMat2::diag(0.0, -1.0);
        bad.push_back(s);
        const Report r = envelope_check(env, InfinityLaplaceOp{}, bad);
        CHECK_FALSE(r.pass);
        CHECK(r.measured_value("max_lower_violation") >= 1.0 - 1e-12);
    }
}

TEST_CASE("ellipticity pair validation") {
    EllipticityPair bad;
    bad.lambda = EllipticityFn::constant(2.0);
    bad.Lambda = EllipticityFn::constant(1.0);
    CHECK_THROWS_AS(bad.validate(1.0), Error);
    EllipticityPair vanishing;
    vanishing.lambda = EllipticityFn::power(0.5);
    vanishing.Lambda = EllipticityFn::constant(1.0);
    CHECK_NOTHROW(vanishing.validate(1.0));
}
