#include <doctest.h>

#include <cmath>
#include <iostream>

#include "fbflow/diagnostics.hpp"
#include "fbflow/interface.hpp"
#include "fbflow/levelset.hpp"

using namespace fbflow;

namespace {

double planar_radius(const GridField& phi, const BarrierDomain& dom) {
    return std::sqrt(region_measure(phi, dom) / M_PI);
}

FlowTrajectory shrink_circle(double h, double r0, double horizon) {
    BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
    InitialRegion K(RegionDisc{{0, 0}, r0});
    Grid2 grid = make_grid({-1.0, -1.0}, {1.0, 1.0}, h, Mode::planar);
    RunConfig cfg;
    cfg.horizon = horizon;
    cfg.n_snapshots = 10;
    return run_flow(K, dom, grid, cfg);
}

}  // namespace

TEST_CASE("shrinking circle follows the closed-form radius law") {
    const double h = 1.0 / 48, r0 = 0.5;
    BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
    FlowTrajectory traj = shrink_circle(h, r0, 0.16);

    CHECK(traj.extinct());
    CHECK(traj.t_extinct == doctest::Approx(r0 * r0 / 2).epsilon(0.05));

    double max_err = 0;
    for (const auto& snap : traj.snapshots) {
        double expect2 = r0 * r0 - 2 * snap.t;
        if (expect2 < std::pow(5 * h, 2)) continue;
        double r = planar_radius(snap.phi, dom);
        max_err = std::max(max_err, std::abs(r - std::sqrt(expect2)));
    }
    CHECK(max_err <= 3 * h);

    // single interior singular event near the center at extinction
    int n_sing = 0;
    for (const auto& ev : traj.events)
        if (ev.kind == Event::singularity) {
            ++n_sing;
            CHECK(ev.pos.norm() < 6 * h);
            CHECK(ev.t == doctest::Approx(traj.t_extinct).epsilon(0.08));
            CHECK_FALSE(ev.boundary);
        }
    CHECK(n_sing == 1);
}

TEST_CASE("grid refinement at least halves the radius error") {
    auto radius_err = [](double h) {
        BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
        FlowTrajectory traj = shrink_circle(h, 0.5, 0.1);
        double worst = 0;
        for (const auto& snap : traj.snapshots) {
            double expect2 = 0.25 - 2 * snap.t;
            if (expect2 < std::pow(6 * h, 2)) continue;
            double r = planar_radius(snap.phi, dom);
            worst = std::max(worst, std::abs(r - std::sqrt(expect2)));
        }
        return worst;
    };
    double e1 = radius_err(1.0 / 24);
    double e2 = radius_err(1.0 / 48);
    std::cout << "[refine] err(1/24)=" << e1 << " err(1/48)=" << e2 << "\n";
    // first-order bound with a quadratic-noise floor
    CHECK(e2 <= 0.5 * e1 + 4.0 / (48.0 * 48.0));
    CHECK(e1 <= 0.15 / 24);
    CHECK(e2 <= 0.15 / 48);
}

TEST_CASE("free-boundary half-circle: radius law and orthogonal contact") {
    const double h = 1.0 / 48, r0 = 0.5;
    BarrierDomain dom(HalfplaneShape{{0, 1}, 0.0}, Mode::planar);
    InitialRegion K(RegionDisc{{0, 0}, r0});
    Grid2 grid = make_grid({-0.75, -6 * h}, {0.75, 0.75}, h, Mode::planar);
    RunConfig cfg;
    cfg.horizon = 0.16;
    cfg.n_snapshots = 10;
    FlowTrajectory traj = run_flow(K, dom, grid, cfg);

    CHECK(traj.extinct());
    CHECK(traj.t_extinct == doctest::Approx(r0 * r0 / 2).epsilon(0.05));
    double worst_angle = 0, max_err = 0;
    for (const auto& snap : traj.snapshots) {
        double expect2 = r0 * r0 - 2 * snap.t;
        if (expect2 < std::pow(5 * h, 2)) continue;
        double r = std::sqrt(2 * region_measure(snap.phi, dom) / M_PI);
        max_err = std::max(max_err, std::abs(r - std::sqrt(expect2)));
        if (expect2 >= std::pow(10 * h, 2))
            worst_angle = std::max(
                worst_angle, max_contact_angle_error(snap.phi, dom, 2.5 * h));
    }
    CHECK(max_err <= 3 * h);
    CHECK(worst_angle <= 0.05);
}

TEST_CASE("static line orthogonal to the wall stays put") {
    const double h = 1.0 / 32;
    BarrierDomain dom(HalfplaneShape{{0, 1}, 0.0}, Mode::planar);
    InitialRegion K(RegionHalfspace{{1, 0}, 0.0}, false);
    Grid2 grid = make_grid({-0.5, -6 * h}, {0.5, 0.5}, h, Mode::planar);
    RunConfig cfg;
    cfg.mean_convex = false;
    LevelSetFlow flow(K, dom, grid, cfg);
    GridField before = flow.state().phi;
    flow.step();
    double worst = 0;
    for (int c = 0; c < grid.size(); ++c)
        worst = std::max(worst, std::abs(flow.state().phi[c] - before[c]));
    CHECK(worst <= 10 * h * h);
}

TEST_CASE("axisymmetric sphere: extinction at r0^2/4 and A/H ratio") {
    const double h = 1.0 / 48, r0 = 0.5;
    BarrierDomain dom(BallAxisymShape{0.9}, Mode::axisym);
    InitialRegion K(RegionDisc{{0, 0}, r0});
    Grid2 grid = make_grid({0, -1.0}, {1.0, 1.0}, h, Mode::axisym);
    RunConfig cfg;
    cfg.horizon = 0.08;
    cfg.n_snapshots = 8;
    FlowTrajectory traj = run_flow(K, dom, grid, cfg);

    CHECK(traj.extinct());
    CHECK(traj.t_extinct == doctest::Approx(r0 * r0 / 4).epsilon(0.05));

    for (const auto& snap : traj.snapshots) {
        double expect2 = r0 * r0 - 4 * snap.t;
        if (expect2 < std::pow(6 * h, 2)) continue;
        double vol = region_measure(snap.phi, dom);
        double r = std::cbrt(3 * vol / (4 * M_PI));
        CHECK(std::abs(r - std::sqrt(expect2)) <= 3 * h);
        CurvatureReport rep = curvature_quantities(snap.phi, dom, h, 8 * h);
        double expect_H = 2 / std::sqrt(expect2);
        CHECK(rep.max_h == doctest::Approx(expect_H).epsilon(0.08));
        CHECK(rep.max_ah == doctest::Approx(1.0 / std::sqrt(2)).epsilon(0.05));
    }
}

TEST_CASE("axis regularity: dphi/dr vanishes at r = 0") {
    const double h = 1.0 / 48;
    BarrierDomain dom(BallAxisymShape{0.9}, Mode::axisym);
    InitialRegion K(RegionDisc{{0, 0}, 0.5});
    Grid2 grid = make_grid({0, -1.0}, {1.0, 1.0}, h, Mode::axisym);
    RunConfig cfg;
    cfg.horizon = 0.02;
    FlowTrajectory traj = run_flow(K, dom, grid, cfg);
    const GridField& phi = traj.snapshots.back().phi;
    // mirrored one-sided difference at the first column, near the interface
    for (int j = 1; j + 1 < grid.ny; ++j) {
        if (std::abs(phi(0, j)) > 4 * h) continue;
        double dr = (phi(1, j) - phi(0, j)) / grid.h;
        CHECK(std::abs(dr) <= 20 * h);
    }
}

TEST_CASE("avoidance of two disjoint shrinking discs") {
    const double h = 1.0 / 32;
    BarrierDomain dom(DiscShape{{0, 0}, 1.4}, Mode::planar);
    Grid2 grid = make_grid({-1.5, -1.5}, {1.5, 1.5}, h, Mode::planar);
    RunConfig cfg;
    cfg.horizon = 0.02;
    cfg.n_snapshots = 6;
    InitialRegion A(RegionDisc{{-0.6, 0}, 0.35});
    InitialRegion B(RegionDisc{{0.6, 0}, 0.35});
    FlowTrajectory ta = run_flow(A, dom, grid, cfg);
    FlowTrajectory tb = run_flow(B, dom, grid, cfg);
    AvoidanceReport rep = avoidance_check(ta, tb, dom);
    CHECK(rep.disjoint_input);
    CHECK(rep.pass);
    CHECK(rep.min_distance >= 0.5 - 3 * h);
    CHECK(rep.max_monotonicity_violation <= h);

    AvoidanceReport same = avoidance_check(ta, ta, dom);
    CHECK_FALSE(same.disjoint_input);
}

TEST_CASE("nesting and monotone inclusion") {
    const double h = 1.0 / 32;
    BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
    Grid2 grid = make_grid({-1.0, -1.0}, {1.0, 1.0}, h, Mode::planar);
    RunConfig cfg;
    cfg.horizon = 0.05;
    cfg.n_snapshots = 6;
    InitialRegion Ks(RegionDisc{{0, 0}, 0.3});
    InitialRegion Kl(RegionDisc{{0, 0}, 0.5});
    FlowTrajectory ts = run_flow(Ks, dom, grid, cfg);
    FlowTrajectory tl = run_flow(Kl, dom, grid, cfg);

    CHECK(nesting_check(tl).pass);

    // K subset L initially implies phi_K <= phi_L + h at matched times
    double worst = 0;
    for (size_t k = 0; k < std::min(ts.snapshots.size(), tl.snapshots.size());
         ++k)
        for (int c = 0; c < grid.size(); ++c)
            worst = std::max(
                worst, ts.snapshots[k].phi[c] - tl.snapshots[k].phi[c]);
    CHECK(worst <= h);
}

TEST_CASE("arrival time residual is small away from the center") {
    auto residual = [](double h) {
        BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
        FlowTrajectory traj = shrink_circle(h, 0.5, 0.16);
        return arrival_time_residual(traj, dom).max_abs;
    };
    double r1 = residual(1.0 / 32), r2 = residual(1.0 / 64);
    std::cout << "[arrival] res(1/32)=" << r1 << " res(1/64)=" << r2 << "\n";
    CHECK(r1 < 1.0);
    CHECK(r2 <= 0.75 * r1 + 0.02);
}

TEST_CASE("CFL guard rejects oversized steps") {
    BarrierDomain dom(DiscShape{{0, 0}, 0.9}, Mode::planar);
    InitialRegion K(RegionDisc{{0, 0}, 0.5});
    Grid2 grid = make_grid({-1, -1}, {1, 1}, 1.0 / 32, Mode::planar);
    RunConfig cfg;
    cfg.dt_factor = 0.4;
    CHECK_THROWS_AS(LevelSetFlow(K, dom, grid, cfg), CFLViolationError);
}
