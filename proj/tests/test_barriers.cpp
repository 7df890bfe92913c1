#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "barrierlab/barriers.hpp"

using namespace barrierlab;

namespace {

OdiSpec unit_spec(OdiSide side, double lambda = 1.0, double Lambda = 1.0, double r = 1.0,
                  LowerOrderTerm phi = LowerOrderTerm::zero()) {
    OdiSpec s;
    s.side = side;
    s.pair.lambda = EllipticityFn::constant(lambda);
    s.pair.Lambda = EllipticityFn::constant(Lambda);
    s.phi = phi;
    s.n = 2;
    s.r = r;
    return s;
}

}  // namespace

TEST_CASE("radial evaluation identities") {
    auto prof = analytic_profile(unit_spec(OdiSide::Lower), 1.0);
    const auto hp = prof.hp, hpp = prof.hpp;
    auto b = make_barrier({0.0, 0.0}, 1.0, std::move(prof), BarrierOrientation::InteriorSub);
    const Vec2 x{1.5, 0.0};
    const auto ev = eval_with_derivatives(b, x);
    // radial argument 2r - |x - y| = 0.5
    CHECK(ev.gradient.norm() == Catch::Approx(hp(0.5)));
    CHECK(ev.hessian.trace() == Catch::Approx(hpp(0.5) - hp(0.5) / 1.5));

    auto prof_up = analytic_profile(unit_spec(OdiSide::Upper), 1.0);
    const auto hp_up = prof_up.hp, hpp_up = prof_up.hpp;
    auto bu =
        make_barrier({0.0, 0.0}, 1.0, std::move(prof_up), BarrierOrientation::ExteriorSuper,
                     {0.0, 1.0});
    const auto evu = eval_with_derivatives(bu, x);
    CHECK(evu.hessian.trace() == Catch::Approx(hpp_up(0.5) + hp_up(0.5) / 1.5));

    // outer sphere carries the profile's zero boundary value, the inner
    // sphere its comparison value h(r)
    const auto ev2 = eval_with_derivatives(b, {1.9999999, 0.0});
    CHECK(std::abs(ev2.value) < 1e-6);
    const auto ev3 = eval_with_derivatives(b, {1.0000001, 0.0});
    CHECK(ev3.value == Catch::Approx(b.profile->hr).margin(1e-6));
    CHECK_THROWS_AS(eval_with_derivatives(b, {0.5, 0.0}), Error);
    CHECK_THROWS_AS(eval_with_derivatives(b, {2.5, 0.0}), Error);
}

TEST_CASE("derivatives match central differences at second order") {
    auto prof = analytic_profile(unit_spec(OdiSide::Lower, 1.0, 2.0, 0.5), 1.0);
    auto b = make_barrier({0.0, 1.1}, 0.5, std::move(prof), BarrierOrientation::InteriorSub);
    auto value = [&](const Vec2& x) { return eval_with_derivatives(b, x).value; };
    auto worst_grad_err = [&](double step) {
        double worst = 0.0;
        for (int s = 0; s < 16; ++s) {
            const double ang = 2.0 * kPi * s / 16.0;
            const Vec2 x = b.center + Vec2{std::cos(ang), std::sin(ang)} * (b.r * 1.5);
            const auto ev = eval_with_derivatives(b, x);
            const double gx = (value(x + Vec2{step, 0}) - value(x - Vec2{step, 0})) / (2 * step);
            const double gy = (value(x + Vec2{0, step}) - value(x - Vec2{0, step})) / (2 * step);
            worst = std::max({worst, std::abs(gx - ev.gradient.x), std::abs(gy - ev.gradient.y)});
        }
        return worst;
    };
    const double e1 = worst_grad_err(1e-4);
    const double e2 = worst_grad_err(5e-5);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("strict margins carry the guaranteed gap") {
    StructuralEnvelope env;
    env.pair.lambda = EllipticityFn::constant(1.0);
    env.pair.Lambda = EllipticityFn::constant(1.0);
    env.n = 2;
    env.r = 0.25;
    env.domain = HalfPlane{2};
    env.anchor = {0.0, 0.0};

    auto prof = analytic_profile(unit_spec(OdiSide::Lower, 1, 1, 0.25), 0.5);
    auto b = place_interior_barrier(HalfPlane{2}, {0.0, 0.1}, 0.25, std::move(prof));
    const auto mr = strict_margin(b, env, HalfPlane{2});
    CHECK(mr.pass);
    CHECK(mr.worst_margin < 0.0);
    CHECK(mr.worst_slack >= 0.0);

    // vanishing ellipticity keeps the same sign structure
    StructuralEnvelope env2 = env;
    env2.pair.lambda = EllipticityFn::power(0.5);
    OdiSpec v;
    v.side = OdiSide::Lower;
    v.pair = env2.pair;
    v.n = 2;
    v.r = 0.25;
    auto b2 = place_interior_barrier(HalfPlane{2}, {0.0, 0.1}, 0.25, analytic_profile(v, 0.5));
    const auto mr2 = strict_margin(b2, env2, HalfPlane{2});
    CHECK(mr2.pass);

    // a profile with flipped slope breaks the hypothesis chain
    auto bad_prof = analytic_profile(unit_spec(OdiSide::Lower, 1, 1, 0.25), 0.5);
    const auto hp0 = bad_prof.hp;
    bad_prof.hp = [hp0](double t) { return -hp0(t); };
    auto b3 = make_barrier(b.center, 0.25, std::move(bad_prof), BarrierOrientation::InteriorSub);
    CHECK_THROWS_AS(strict_margin(b3, env, HalfPlane{2}), Error);
}

TEST_CASE("interior placement geometry") {
    auto prof = analytic_profile(unit_spec(OdiSide::Lower, 1, 1, 0.5), 1.0);
    auto b = place_interior_barrier(HalfPlane{2}, {0.0, 0.3}, 0.5, std::move(prof));
    CHECK(b.center.x == Catch::Approx(0.0).margin(1e-14));
    CHECK(b.center.y == Catch::Approx(1.0));
    // the radial argument reproduces the boundary distance through x
    CHECK(2.0 * b.r - dist(Vec2{0.0, 0.3}, b.center) == Catch::Approx(0.3));

    auto prof2 = analytic_profile(unit_spec(OdiSide::Lower, 1, 1, 0.05), 1.0);
    auto b2 = place_interior_barrier(Disk{{0, 0}, 1.0}, {0.96, 0.0}, 0.05, std::move(prof2));
    CHECK(b2.center.x == Catch::Approx(0.9));
    CHECK(b2.center.y == Catch::Approx(0.0).margin(1e-14));

    auto prof3 = analytic_profile(unit_spec(OdiSide::Lower, 1, 1, 0.1), 1.0);
    CHECK_THROWS_AS(place_interior_barrier(HalfPlane{2}, {0.0, 0.5}, 0.1, std::move(prof3)),
                    Error);  // deeper than r
}

TEST_CASE("exterior placement pair and ordering") {
    auto prof = analytic_profile(unit_spec(OdiSide::Upper, 1, 1, 0.5), 1.0);
    const Vec2 w{0.0, 0.0};
    auto pair = place_exterior_barrier(HalfPlane{2}, {0.2, 0.3}, w, 0.5, prof);
    CHECK(pair.at_foot.center.x == Catch::Approx(0.2));
    CHECK(pair.at_foot.center.y == Catch::Approx(-0.5));
    CHECK(pair.at_anchor.center.x == Catch::Approx(0.0).margin(1e-14));
    CHECK(pair.at_anchor.center.y == Catch::Approx(-0.5));
    CHECK(exterior_ordering_gap(pair, HalfPlane{2}) >= -1e-12);

    // disk: outward radius placement
    auto prof2 = analytic_profile(unit_spec(OdiSide::Upper, 1, 1, 0.1), 1.0);
    auto pair2 =
        place_exterior_barrier(Disk{{0, 0}, 1.0}, {0.0, -0.92}, {0.0, -1.0}, 0.1, prof2);
    CHECK(pair2.at_foot.center.y == Catch::Approx(-1.1));
    CHECK(pair2.at_foot.center.x == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("monotone family hypothesis chain") {
    // the radial argument never exceeds the boundary distance, so the
    // parametric families order correctly: lambda up, Lambda down, Phi+ down
    EllipticityPair pair;
    pair.lambda = EllipticityFn::power(0.5);
    pair.Lambda = EllipticityFn::constant(1.0);
    const LowerOrderTerm phi = LowerOrderTerm::constant(1.0);
    for (int j = 1; j <= 64; ++j) {
        const double xi = 0.25 * j / 64.0;
        for (int i = 0; i <= 8; ++i) {
            const double d = xi + (0.5 - xi) * i / 8.0;  // d >= xi
            CHECK(pair.lam(d) >= pair.lam(xi) - 1e-15);
            CHECK(pair.Lam(d) <= pair.Lam(xi) + 1e-15);
            CHECK(phi(d, 1.0, 1.0) <= phi(xi, 1.0, 1.0) + 1e-15);
        }
    }
}
