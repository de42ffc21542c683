#include <doctest.h>

#include <cmath>
#include <random>

#include "fbflow/geometry.hpp"

using namespace fbflow;

TEST_CASE("signed distance: analytic values") {
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    CHECK(disc.signed_distance({2, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(disc.signed_distance({0, 0}) == doctest::Approx(2.0));
    CHECK(disc.signed_distance({3, 0}) == doctest::Approx(-1.0));

    BarrierDomain half(HalfplaneShape{{1, 0}, 0.0}, Mode::planar);
    for (double y : {-3.0, 0.0, 7.5})
        CHECK(half.signed_distance({0.3, y}) == doctest::Approx(0.3));

    BarrierDomain ann(AnnulusShape{{0, 0}, 1.0, 4.0}, Mode::planar);
    CHECK(ann.signed_distance({2.5, 0}) == doctest::Approx(1.5));
    CHECK(ann.signed_distance({1.0, 0}) == doctest::Approx(0.0));
    CHECK(ann.signed_distance({0.5, 0}) == doctest::Approx(-0.5));
}

TEST_CASE("eikonal property away from the medial axis") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double h = 1e-4;
    auto grad_norm = [&](const BarrierDomain& dom, Vec2 p) {
        double gx = (dom.signed_distance({p.x + h, p.y}) -
                     dom.signed_distance({p.x - h, p.y})) /
                    (2 * h);
        double gy = (dom.signed_distance({p.x, p.y + h}) -
                     dom.signed_distance({p.x, p.y - h})) /
                    (2 * h);
        return std::hypot(gx, gy);
    };
    BarrierDomain disc(DiscShape{{0.3, -0.2}, 1.5}, Mode::planar);
    for (int k = 0; k < 200; ++k) {
        Vec2 p{0.3 + 1.2 * uni(rng), -0.2 + 1.2 * uni(rng)};
        if ((p - Vec2{0.3, -0.2}).norm() < 0.2) continue;  // medial center
        CHECK(grad_norm(disc, p) == doctest::Approx(1.0).epsilon(1e-6));
    }
    BarrierDomain dumb(DumbbellShape{{-1.8, 0}, {1.8, 0}, 1.0, 0.35},
                       Mode::planar);
    for (int k = 0; k < 200; ++k) {
        Vec2 p{0.5 * uni(rng), 0.32 * uni(rng)};
        if (std::abs(p.y) < 0.1) continue;  // capsule axis is its medial set
        CHECK(grad_norm(dumb, p) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("reflection across the wall") {
    BarrierDomain half(HalfplaneShape{{1, 0}, 0.0}, Mode::planar);
    Vec2 m = half.reflect({0.3, 0.0});
    CHECK(m.x == doctest::Approx(-0.3));
    CHECK(m.y == doctest::Approx(0.0));

    BarrierDomain disc(DiscShape{{0, 0}, 1.0}, Mode::planar);
    Vec2 m2 = disc.reflect({0.5, 0.0});
    CHECK(m2.x == doctest::Approx(1.5));
    CHECK(m2.y == doctest::Approx(0.0).epsilon(1e-12));

    // wall points are fixed
    Vec2 onwall = disc.reflect({1.0, 0.0});
    CHECK((onwall - Vec2{1.0, 0.0}).norm() == doctest::Approx(0.0));
}

TEST_CASE("reflection is an involution on the collar") {
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ang(0, 2 * M_PI);
    std::uniform_real_distribution<double> rad(1.5, 1.98);
    for (int k = 0; k < 100; ++k) {
        double a = ang(rng), r = rad(rng);
        Vec2 p{r * std::cos(a), r * std::sin(a)};
        Vec2 q = disc.reflect(disc.reflect(p));
        CHECK((q - p).norm() < 1e-10);
    }
    CHECK_THROWS_AS(disc.reflect({0.01, 0.0}), MedialAxisError);
}

TEST_CASE("wall curvature convention") {
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    CHECK(disc.wall_curvature({2, 0}) == doctest::Approx(0.5));
    CHECK(disc.wall_curvature({0, -2}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(disc.wall_curvature({1.5, 0}), NotOnBoundaryError);

    BarrierDomain half(HalfplaneShape{{0, 1}, 0.0}, Mode::planar);
    CHECK(half.wall_curvature({3.7, 0}) == doctest::Approx(0.0));

    BarrierDomain ann(AnnulusShape{{0, 0}, 1.0, 4.0}, Mode::planar);
    CHECK(ann.wall_curvature({1, 0}) == doctest::Approx(-1.0));
    CHECK(ann.wall_curvature({0, 4}) == doctest::Approx(0.25));
    CHECK(ann.curvature_bound() == doctest::Approx(1.0));
    CHECK_FALSE(ann.wall_mean_convex());
}

TEST_CASE("corner bending: angle condition and monotonicity") {
    BarrierDomain half(HalfplaneShape{{0, 1}, 0.0}, Mode::planar);
    InitialRegion K(RegionDisc{{0, 0}, 0.5});

    // tau -> 0 recovers K (Hausdorff via the level values)
    InitialRegion bent_small = bend_corners(K, half, 1e-4);
    for (double x : {0.1, 0.3, 0.45})
        for (double y : {0.01, 0.2, 0.4})
            CHECK(std::abs(bent_small.level({x, y}, half) -
                           K.level({x, y}, half)) < 2e-4);

    // measured junction normal satisfies <nu, N> <= -tau/2
    double tau = 0.2;
    InitialRegion bent = bend_corners(K, half, tau);
    const double fd = 1e-5;
    Vec2 p{0, 0};
    {
        // walk to the bent boundary along +x at height y = 0.02
        double y = 0.02, lo = 0.0, hi = 0.6;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (bent.level({mid, y}, half) > 0 ? lo : hi) = mid;
        }
        p = {0.5 * (lo + hi), y};
    }
    double gx = (bent.level({p.x + fd, p.y}, half) -
                 bent.level({p.x - fd, p.y}, half)) /
                (2 * fd);
    double gy = (bent.level({p.x, p.y + fd}, half) -
                 bent.level({p.x, p.y - fd}, half)) /
                (2 * fd);
    Vec2 nu = Vec2{-gx, -gy}.normalized();  // outward from K^tau
    Vec2 N = half.outward_normal(p);
    CHECK(nu.dot(N) <= -tau / 2 + 1e-6);

    // monotone in tau
    InitialRegion b1 = bend_corners(K, half, 0.1);
    InitialRegion b2 = bend_corners(K, half, 0.2);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.0, 0.5);
    for (int k = 0; k < 300; ++k) {
        Vec2 q{ux(rng), uy(rng)};
        if (b2.level(q, half) >= 0) CHECK(b1.level(q, half) >= -1e-12);
    }

    // region away from the wall is untouched
    BarrierDomain far_wall(HalfplaneShape{{0, 1}, -5.0}, Mode::planar);
    InitialRegion no_contact = bend_corners(K, far_wall, 0.3);
    for (double x : {-0.2, 0.0, 0.4})
        CHECK(no_contact.level({x, 0.1}, far_wall) ==
              doctest::Approx(K.level({x, 0.1}, far_wall)));
}

TEST_CASE("ambient extension agrees on the wall and dies off") {
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    AmbientExtension ext(disc, 0.5);
    Vec2 y{0, -2};
    CHECK((ext.normal(y) - disc.outward_normal(y)).norm() < 1e-10);
    CHECK(ext.curvature(y) == doctest::Approx(0.5));
    // vanishes outside the collar
    CHECK(ext.curvature({0.1, 0.1}) == doctest::Approx(0.0));
    CHECK(ext.normal({0.1, 0.1}).norm() == doctest::Approx(0.0));
    // second-order agreement approaching the wall
    double e1 = std::abs(ext.curvature({0, -1.99}) - 0.5);
    double e2 = std::abs(ext.curvature({0, -1.995}) - 0.5);
    CHECK(e2 < 0.3 * e1 + 1e-9);
}

TEST_CASE("half-torus profile attaches orthogonally to the ball") {
    BarrierDomain ball(BallAxisymShape{1.0}, Mode::axisym);
    InitialRegion K(RegionHalfTorusProfile{0.6, 0.15});
    // profile-center distance from the origin satisfies d^2 = R^2 + r^2
    double zc = std::sqrt(1.0 + 0.15 * 0.15 - 0.36);
    Vec2 c{0.6, zc};
    CHECK(c.norm() == doctest::Approx(std::sqrt(1.0 + 0.0225)));
    // boundary circle of the profile crosses the wall
    CHECK(K.level(c, ball) == doctest::Approx(0.15));
    CHECK(ball.signed_distance(c) < 0);  // center sits just outside the ball
}
