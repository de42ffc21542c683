#include <doctest.h>

#include <cmath>
#include <iostream>
#include <map>
#include <random>

#include "fbflow/elliptic.hpp"
#include "fbflow/interface.hpp"
#include "fbflow/levelset.hpp"
#include "oracles.hpp"

using namespace fbflow;

namespace {

struct HalfDisc {
    BarrierDomain dom{HalfplaneShape{{0, 1}, 0.0}, Mode::planar};
    InitialRegion K{RegionDisc{{0, 0}, 0.5}};
    Grid2 grid = make_grid({-0.6, -7.0 / 96}, {0.6, 0.6}, 1.0 / 96,
                           Mode::planar);
};

TranslatorParams params(double eps, double sigma, double tau) {
    TranslatorParams p;
    p.eps = eps;
    p.sigma = sigma;
    p.tau = tau;
    return p;
}

}  // namespace

TEST_CASE("continuation: trivial start, sup bound at every step") {
    HalfDisc s;
    TranslatorSolution sol =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1));
    CHECK(sol.kappa == doctest::Approx(1.0));
    CHECK(sol.residual_norm <= 1e-8);
    REQUIRE(!sol.trace.empty());
    CHECK(sol.trace.front().kappa == doctest::Approx(0.0));
    CHECK(sol.trace.front().max_u == doctest::Approx(0.0));
    for (const auto& rec : sol.trace) CHECK(rec.bound_ok);
    double max_u = 0;
    for (int c : sol.cells) max_u = std::max(max_u, sol.u[c]);
    CHECK(max_u <= 10.0 + 1e-9);
    CHECK(max_u > 0.01);  // nontrivial solution
}

TEST_CASE("1d degenerate problem matches the shooting oracle") {
    BarrierDomain dom(SlabShape{{0, 1}, 0.0, 0.0625}, Mode::planar);
    InitialRegion K(RegionSlab{{1, 0}, 0.0, 0.5});
    const double h = 1.0 / 256;
    Grid2 grid = make_grid({-0.55, -0.09}, {0.55, 0.09}, h, Mode::planar);
    TranslatorParams p = params(0.5, 1.0, 0.0);
    TranslatorSolution sol = solve_continuation(K, dom, grid, p);

    oracles::Shooting1D oracle{0.5, 1.0, 1.0, 1.0};
    oracle.solve();

    double worst = 0;
    for (int c : sol.cells) {
        Vec2 q = grid.center(c);
        if (std::abs(q.y) > 0.02) continue;  // compare along the centerline
        worst = std::max(worst, std::abs(sol.u[c] - oracle.at(q.x)));
    }
    std::cout << "[1d oracle] max diff = " << worst << "\n";
    CHECK(worst <= 1e-4);
}

TEST_CASE("rotationally symmetric shell matches the radial oracle") {
    BarrierDomain dom(DiscShape{{0, 0}, 2.0}, Mode::planar);
    InitialRegion K(RegionAnnulusShell{{0, 0}, 0.5, 0.9}, false);
    const double h = 1.0 / 128;
    Grid2 grid = make_grid({-1.0, -1.0}, {1.0, 1.0}, h, Mode::planar);
    TranslatorParams p = params(0.3, 1.0, 0.0);
    TranslatorSolution sol = solve_continuation(K, dom, grid, p);

    oracles::Radial oracle{0.3, 1.0, 1.0, 0.5, 0.9};
    oracle.solve();

    double worst_vs_oracle = 0;
    std::map<int, std::pair<double, double>> by_ring;
    for (int c : sol.cells) {
        Vec2 q = grid.center(c);
        double r = q.norm();
        if (r < 0.56 || r > 0.84) continue;
        worst_vs_oracle =
            std::max(worst_vs_oracle, std::abs(sol.u[c] - oracle.at(r)));
        int ring = (int)std::floor(r / (2 * h));
        auto it = by_ring.find(ring);
        if (it == by_ring.end())
            by_ring[ring] = {sol.u[c], sol.u[c]};
        else {
            it->second.first = std::min(it->second.first, sol.u[c]);
            it->second.second = std::max(it->second.second, sol.u[c]);
        }
    }
    double asym = 0;
    for (const auto& [ring, mm] : by_ring)
        asym = std::max(asym, mm.second - mm.first);
    std::cout << "[radial] vs oracle = " << worst_vs_oracle << " asym = "
              << asym << "\n";
    CHECK(worst_vs_oracle <= 2e-3);
    CHECK(asym <= 1e-3);
}

TEST_CASE("sigma monotonicity and kappa monotonicity") {
    HalfDisc s;
    TranslatorSolution lo =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 0.5, 0.1));
    TranslatorSolution hi =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1));
    CHECK(sigma_monotonicity_violation(lo, hi) <= s.grid.h);

    TranslatorParams half = params(0.1, 1.0, 0.1);
    half.kappa_target = 0.5;
    TranslatorSolution mid = solve_continuation(s.K, s.dom, s.grid, half);
    double worst = 0;
    for (int c : mid.cells)
        if (hi.cell_of[c] >= 0) worst = std::max(worst, mid.u[c] - hi.u[c]);
    CHECK(worst <= s.grid.h);
}

TEST_CASE("two continuation paths agree (uniqueness probe)") {
    HalfDisc s;
    TranslatorParams p5 = params(0.1, 1.0, 0.1);
    p5.kappa_steps = 5;
    TranslatorParams p10 = params(0.1, 1.0, 0.1);
    TranslatorSolution a = solve_continuation(s.K, s.dom, s.grid, p5);
    TranslatorSolution b = solve_continuation(s.K, s.dom, s.grid, p10);
    double worst = 0;
    for (int c : a.cells) worst = std::max(worst, std::abs(a.u[c] - b.u[c]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("newton linearization matches finite differences") {
    HalfDisc s;
    double m1 = jacobian_fd_mismatch(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1),
                                     1e-4, 4, 99);
    std::cout << "[jacobian] central-difference mismatch = " << m1 << "\n";
    CHECK(m1 <= 1e-5);
}

TEST_CASE("geometric identity H + sigma u = kappa V") {
    HalfDisc s;
    TranslatorSolution sol =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1));
    double worst = 0;
    for (int c : sol.cells) {
        if (sol.near_dirichlet[c] || sol.near_wall[c]) continue;
        double lhs = sol.h_field[c] + sol.params.sigma * sol.u[c];
        worst = std::max(worst, std::abs(lhs - sol.kappa * sol.v_field[c]));
    }
    std::cout << "[identity] worst residual = " << worst << " (h = "
              << s.grid.h << ")\n";
    CHECK(worst <= 10 * s.grid.h);
}

TEST_CASE("V lower bound: flat and disc barriers, corrupted negative control") {
    HalfDisc s;
    TranslatorSolution sol =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1));
    VBoundReport rep = check_V_lower_bound(sol, s.dom);
    CHECK(rep.pass);
    CHECK(rep.slack_form1 > 0);
    CHECK(rep.slack_form2 > 0);

    // disc barrier with orthogonal contact
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    InitialRegion K(RegionDisc{{0, -std::sqrt(4.0 + 0.64)}, 0.8});
    Grid2 grid = make_grid({-0.85, -2.1}, {0.85, -1.2}, 1.0 / 96,
                           Mode::planar);
    TranslatorSolution sol2 =
        solve_continuation(K, disc, grid, params(0.1, 1.0, 0.1));
    VBoundReport rep2 = check_V_lower_bound(sol2, disc);
    CHECK(rep2.pass);

    // corrupt the solution with noise; the bound must notice
    TranslatorSolution bad = sol;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double amp = 0.15;
    for (int c : bad.cells) bad.u_ext[c] += amp * uni(rng);
    const Grid2& g = bad.grid;
    for (int c : bad.cells) {
        int i = c % g.nx, j = c / g.nx;
        if (i < 1 || i + 1 >= g.nx || j < 1 || j + 1 >= g.ny) continue;
        double ux = (bad.u_ext(i + 1, j) - bad.u_ext(i - 1, j)) / (2 * g.h);
        double uy = (bad.u_ext(i, j + 1) - bad.u_ext(i, j - 1)) / (2 * g.h);
        bad.v_field[c] =
            1.0 / std::sqrt(bad.params.eps * bad.params.eps + ux * ux +
                            uy * uy);
    }
    VBoundReport rep3 = check_V_lower_bound(bad, s.dom);
    CHECK_FALSE(rep3.pass);
}

TEST_CASE("H lower bound: fitted c positive and stable under eps halving") {
    HalfDisc s;
    TranslatorSolution a =
        solve_continuation(s.K, s.dom, s.grid, params(0.1, 1.0, 0.1));
    TranslatorSolution b =
        solve_continuation(s.K, s.dom, s.grid, params(0.05, 1.0, 0.1));
    HLowerReport ra = check_H_lower(a, s.dom);
    HLowerReport rb = check_H_lower(b, s.dom);
    std::cout << "[H lower] c(eps=0.1)=" << ra.fitted_c
              << " c(eps=0.05)=" << rb.fitted_c << "\n";
    CHECK(ra.pass);
    CHECK(rb.pass);
    CHECK(ra.fitted_c / rb.fitted_c <= 2.0);
    CHECK(rb.fitted_c / ra.fitted_c <= 2.0);

    // at the u = 0 slice the bound reads H >= c; compare with the smallest
    // boundary curvature seen by the discrete graph
    double min_boundary_h = kInf;
    for (int c : a.cells)
        if (a.near_dirichlet[c])
            min_boundary_h = std::min(min_boundary_h, a.h_field[c]);
    CHECK(ra.fitted_c <= min_boundary_h * 1.15);

    // non-mean-convex shell: fitted c collapses
    BarrierDomain disc(DiscShape{{0, 0}, 2.0}, Mode::planar);
    InitialRegion shell(RegionAnnulusShell{{0, 0}, 0.5, 0.9}, false);
    Grid2 grid = make_grid({-1.0, -1.0}, {1.0, 1.0}, 1.0 / 96, Mode::planar);
    TranslatorSolution sc =
        solve_continuation(shell, disc, grid, params(0.1, 1.0, 0.0));
    HLowerReport rc = check_H_lower(sc, disc);
    std::cout << "[H lower] shell c=" << rc.fitted_c << "\n";
    CHECK(rc.fitted_c < 0.2 * ra.fitted_c);
}

TEST_CASE("sigma to zero: divergence region appears, boundary stays bounded") {
    BarrierDomain dom(SlabShape{{0, 1}, 0.0, 0.0625}, Mode::planar);
    InitialRegion K(RegionSlab{{1, 0}, 0.0, 0.5});
    Grid2 grid = make_grid({-0.55, -0.09}, {0.55, 0.09}, 1.0 / 128,
                           Mode::planar);
    double prev_center = -1;
    for (double sigma : {1.0, 0.3, 0.1}) {
        TranslatorParams p = params(0.2, sigma, 0.0);
        TranslatorSolution sol = solve_continuation(K, dom, grid, p);
        double center = 0, near_bd = 0;
        int diverged = 0;
        double cap = p.sup_bound(1.0);
        for (int c : sol.cells) {
            Vec2 q = grid.center(c);
            if (std::abs(q.x) < 0.05) center = std::max(center, sol.u[c]);
            if (std::abs(std::abs(q.x) - 0.45) < 0.02)
                near_bd = std::max(near_bd, sol.u[c]);
            if (sol.u[c] > 0.5 * cap) ++diverged;
        }
        CHECK(center > prev_center - grid.h);
        prev_center = center;
        CHECK(near_bd <= 2.0);
        if (sigma <= 0.1) CHECK(diverged > 0);
    }
}

TEST_CASE("near-boundary sup is uniform across the sweep") {
    HalfDisc s;
    RunConfig rc;
    rc.horizon = 0.16;
    rc.n_snapshots = 8;
    FlowTrajectory traj = run_flow(s.K, s.dom, s.grid, rc);

    std::vector<TranslatorSolution> sweep;
    for (double eps : {0.2, 0.1, 0.05})
        for (double sigma : {1.0, 0.5, 0.25})
            sweep.push_back(solve_continuation(s.K, s.dom, s.grid,
                                               params(eps, sigma, 0.1)));
    NearBoundarySupReport rep =
        check_near_boundary_sup(sweep, traj, s.dom, 0.04);
    std::cout << "[nearbd] spread = " << rep.spread << "\n";
    CHECK(rep.pass);

    // the delta ladder degrades no faster than the 1/delta supersolution
    std::vector<TranslatorSolution> one;
    one.push_back(std::move(sweep[4]));  // eps 0.1, sigma 0.5
    double prev = 0;
    for (double delta : {0.08, 0.04, 0.02}) {
        NearBoundarySupReport r =
            check_near_boundary_sup(one, traj, s.dom, delta);
        double sup = r.sup_per_solution[0];
        CHECK(sup <= 1.3 / delta);
        CHECK(sup >= prev - s.grid.h);
        prev = sup;
    }
}

TEST_CASE("one-sided minimization against squeezed competitors") {
    HalfDisc s;
    RunConfig rc;
    rc.horizon = 0.16;
    rc.n_snapshots = 8;
    FlowTrajectory traj = run_flow(s.K, s.dom, s.grid, rc);
    double t = 0.06;

    std::vector<Competitor> comps;
    {
        Competitor same;
        same.name = "identity";
        same.level = traj.nearest_snapshot(t).phi;
        comps.push_back(same);
        Competitor init;
        init.name = "initial";
        init.level = traj.snapshots.front().phi;
        comps.push_back(init);
    }
    auto bumps = make_bump_competitors(traj, s.dom, s.K, t, 10, 321);
    CHECK(bumps.size() == 10);
    for (auto& b : bumps) comps.push_back(std::move(b));

    OneSidedReport rep = one_sided_min_check(traj, s.dom, t, comps);
    CHECK(rep.pass);
    for (const auto& [name, perim] : rep.competitor_perimeters) {
        if (name == "identity")
            CHECK(std::abs(perim - rep.perimeter_kt) <= 1e-12);
        else
            CHECK(perim >= rep.perimeter_kt - 4 * s.grid.h);
    }

    // a competitor that fails the squeeze is rejected
    Competitor bad;
    bad.name = "outside-K";
    bad.level = GridField(s.grid, 1.0);
    CHECK_THROWS_AS(one_sided_min_check(traj, s.dom, t, {bad}),
                    InvalidCompetitorError);
}

TEST_CASE("translator level sets track the flow interface") {
    HalfDisc s;
    RunConfig rc;
    rc.horizon = 0.16;
    rc.n_snapshots = 8;
    FlowTrajectory traj = run_flow(s.K, s.dom, s.grid, rc);
    const double t = 0.05;
    auto flow_segs = traj.interface_at(s.dom, t, {0, 0.2}, kInf);
    std::vector<Vec2> flow_pts;
    for (const auto& seg : flow_segs) flow_pts.push_back(seg.mid());

    std::vector<std::pair<double, double>> ladder = {
        {0.2, 1.0}, {0.1, 0.5}, {0.05, 0.25}};
    std::vector<double> dists;
    for (auto [eps, sigma] : ladder) {
        TranslatorSolution sol =
            solve_continuation(s.K, s.dom, s.grid, params(eps, sigma, 0.05));
        GridField shifted = sol.u;
        for (int c = 0; c < s.grid.size(); ++c) shifted[c] -= t;
        auto segs =
            extract_interface(shifted, s.dom, 0.0, [&](int i, int j) {
                return sol.cell_of[s.grid.idx(i, j)] >= 0;
            });
        std::vector<Vec2> pts;
        for (const auto& seg : segs) pts.push_back(seg.mid());
        dists.push_back(hausdorff_distance(pts, flow_pts));
    }
    std::cout << "[levelsets] hausdorff ladder: " << dists[0] << " "
              << dists[1] << " " << dists[2] << "\n";
    CHECK(dists[2] < dists[0]);
    CHECK(dists[1] <= dists[0] * 1.1);
    CHECK(dists[2] <= dists[1] * 1.1);
}

TEST_CASE("resolution guards") {
    HalfDisc s;
    Grid2 coarse = make_grid({-0.6, -0.1}, {0.6, 0.6}, 1.0 / 32, Mode::planar);
    CHECK_THROWS_AS(
        solve_continuation(s.K, s.dom, coarse, params(0.1, 1.0, 0.1)),
        ResolutionError);
    CHECK_THROWS_AS(
        solve_translator(s.K, s.dom, s.grid, params(0.1, 1.0, 0.2)),
        ResolutionError);
}

TEST_CASE("tau extrapolation pair") {
    HalfDisc s;
    Grid2 fine = make_grid({-0.6, -9.0 / 160}, {0.6, 0.6}, 1.0 / 160,
                           Mode::planar);
    auto [sol, diff] =
        solve_translator(s.K, s.dom, fine, params(0.1, 1.0, 0.1));
    CHECK(sol.params.tau == doctest::Approx(0.05));
    CHECK(sol.residual_norm <= 1e-8);
    std::cout << "[tau pair] extrapolation diff = " << diff << "\n";
    CHECK(diff < 0.2);  // bending only moves the collar, not the bulk
    CHECK(diff > 0);
}
