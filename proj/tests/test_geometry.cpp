#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "barrierlab/geometry.hpp"

using namespace barrierlab;

TEST_CASE("signed distance closed forms") {
    CHECK(signed_distance(HalfPlane{2}, {0.0, 0.5}) == Catch::Approx(0.5));
    CHECK(signed_distance(Disk{{0.0, 0.0}, 1.0}, {0.5, 0.0}) == Catch::Approx(0.5));
    // the 1-flat seen edge-on in the plane is the x2-axis of the chart
    CHECK(signed_distance(FlatComplement{1, 2}, {0.3, 7.0}) == Catch::Approx(0.3));
    CHECK(signed_distance(HalfPlane{2}, {2.0, -0.25}) == Catch::Approx(-0.25));
    CHECK(signed_distance(Annulus{{0, 0}, 0.5, 1.0}, {0.75, 0.0}) == Catch::Approx(0.25));
    CHECK(signed_distance(HalfDisk{{0, 0}, 1.0}, {0.0, 0.25}) == Catch::Approx(0.25));
    CHECK(signed_distance(HalfDisk{{0, 0}, 1.0}, {0.0, 0.9}) == Catch::Approx(0.1));
    CHECK(signed_distance(Sector{{0, 0}, 1.0}, {0.5, 0.0}) == Catch::Approx(0.5));
}

TEST_CASE("nearest boundary point") {
    const Vec2 a = nearest_boundary_point(HalfPlane{2}, {3.0, 0.5});
    CHECK(a.x == Catch::Approx(3.0));
    CHECK(a.y == Catch::Approx(0.0));
    const Vec2 b = nearest_boundary_point(Disk{{0, 0}, 1.0}, {0.5, 0.0});
    CHECK(b.x == Catch::Approx(1.0));
    CHECK(b.y == Catch::Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(nearest_boundary_point(Disk{{0, 0}, 1.0}, {0.0, 0.0}), Error);
    // annulus mid-circle ties between both boundary circles
    CHECK_THROWS_AS(nearest_boundary_point(Annulus{{0, 0}, 0.5, 1.0}, {0.75, 0.0}), Error);
}

TEST_CASE("sphere witnesses") {
    const auto w1 = sphere_witness(HalfPlane{2}, {0.0, 0.0}, 1.0, SphereKind::Interior);
    CHECK(w1.center.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(w1.center.y == Catch::Approx(1.0));
    const auto w2 = sphere_witness(Disk{{0, 0}, 1.0}, {1.0, 0.0}, 0.25, SphereKind::Interior);
    CHECK(w2.center.x == Catch::Approx(0.75));
    // sector apex is a corner: no interior tangent ball for nu > 1
    CHECK_THROWS_AS(sphere_witness(Sector{{0, 0}, 2.0}, {0.0, 0.0}, 0.1, SphereKind::Interior),
                    Error);
    // the complement of a flat has no exterior balls
    CHECK_THROWS_AS(sphere_witness(FlatComplement{1, 2}, {0.0, 0.3}, 0.1, SphereKind::Exterior),
                    Error);
}

static Vec2 random_interior(const DomainSpec& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int tries = 0; tries < 10000; ++tries) {
        const Vec2 x{u(rng), u(rng)};
        if (signed_distance(d, x) > 1e-3) return x;
    }
    FAIL("no interior sample found");
    return {};
}

TEST_CASE("distance equals gap to the nearest boundary point") {
    std::mt19937_64 rng(20240);
    const std::vector<DomainSpec> domains = {
        HalfPlane{2},         Disk{{0.1, -0.2}, 1.2},       HalfDisk{{0, 0}, 1.0},
        Annulus{{0, 0}, 0.4, 1.3}, Rectangle{{-1, -1}, {2, 1.5}}, HalfRectangle{{0, 0}, 1.2},
        Sector{{0, 0}, 1.5},  FlatComplement{1, 2}};
    for (const auto& d : domains) {
        for (int s = 0; s < 200; ++s) {
            const Vec2 x = random_interior(d, rng);
            try {
                const Vec2 nb = nearest_boundary_point(d, x);
                CHECK(std::abs(signed_distance(d, x) - dist(x, nb)) < 1e-12);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::AmbiguousProjection);  // ridge hit
            }
        }
    }
}

TEST_CASE("interior witness center sits at witness depth") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int s = 0; s < 100; ++s) {
        const Vec2 w{u(rng), 0.0};
        const double rho = 0.05 + 0.4 * std::abs(u(rng));
        const auto wit = sphere_witness(HalfPlane{2}, w, rho, SphereKind::Interior);
        CHECK(std::abs(signed_distance(HalfPlane{2}, wit.center) - rho) < 1e-12);
        // disk: admissible up to the disk radius
        const double ang = kPi * u(rng);
        const Vec2 wd{std::cos(ang), std::sin(ang)};
        const auto wit2 = sphere_witness(Disk{{0, 0}, 1.0}, wd, 0.3, SphereKind::Interior);
        CHECK(std::abs(signed_distance(Disk{{0, 0}, 1.0}, wit2.center) - 0.3) < 1e-12);
        const auto wit3 = sphere_witness(Disk{{0, 0}, 1.0}, wd, 0.7, SphereKind::Exterior);
        CHECK(std::abs(-signed_distance(Disk{{0, 0}, 1.0}, wit3.center) - 0.7) < 1e-12);
    }
}

TEST_CASE("half-plane and half-rectangle agree away from the side walls") {
    const HalfRectangle hr{{0.0, 0.0}, 1.0};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int s = 0; s < 300; ++s) {
        // points whose nearest rectangle wall is the bottom edge
        const Vec2 x{u(rng), 0.02 + 0.4 * std::abs(u(rng))};
        if (x.y > 1.0 - std::abs(x.x)) continue;
        if (std::min(1.0 - std::abs(x.x), 1.0 - x.y) <= x.y) continue;
        CHECK(signed_distance(hr, x) == Catch::Approx(signed_distance(HalfPlane{2}, x)));
    }
}
