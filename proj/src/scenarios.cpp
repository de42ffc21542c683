#include "fbflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <sstream>

#include "fbflow/blowup.hpp"
#include "fbflow/diagnostics.hpp"
#include "fbflow/snapshot.hpp"

namespace fbflow {

namespace {

const std::map<std::string, const char*>& builtin_table() {
    static const std::map<std::string, const char*> table = {
        {"circle", R"(
[scenario]
name = circle
mode = planar
[domain]
shape = disc
center = 0,0
radius = 2
[region]
shape = disc
center = 0,0
radius = 0.5
[grid]
h = 0.0078125
box_lo = -2.2,-2.2
box_hi = 2.2,2.2
[run]
horizon = 0.16
n_snapshots = 10
)"},
        {"halfcircle", R"(
[scenario]
name = halfcircle
mode = planar
[domain]
shape = halfplane
normal = 0,1
offset = 0
[region]
shape = disc
center = 0,0
radius = 0.5
[grid]
h = 0.0078125
box_lo = -0.75,-0.08
box_hi = 0.75,0.75
[run]
horizon = 0.16
n_snapshots = 10
)"},
        {"sphere", R"(
[scenario]
name = sphere
mode = axisym
[domain]
shape = ball
radius = 1
[region]
shape = disc
center = 0,0
radius = 0.5
[grid]
h = 0.0078125
box_lo = 0,-1.1
box_hi = 1.1,1.1
[run]
horizon = 0.08
n_snapshots = 10
)"},
        {"halftorus", R"(
[scenario]
name = halftorus
mode = axisym
[domain]
shape = ball
radius = 1
[region]
shape = half_torus
ring_radius = 0.6
tube_radius = 0.15
[grid]
h = 0.005208333333333333
box_lo = 0,-1.08
box_hi = 1.08,1.08
[run]
horizon = 0.02
n_snapshots = 16
)"},
        {"annulus-pop", R"(
[scenario]
name = annulus-pop
mode = planar
[domain]
shape = annulus
center = 0,0
r_in = 1
r_out = 4
[region]
shape = disc
center = 0,0
radius = 2
[grid]
h = 0.015625
box_lo = -4.2,-4.2
box_hi = 4.2,4.2
[run]
horizon = 1.8
n_snapshots = 14
)"},
        {"dumbbell-twosheet", R"(
[scenario]
name = dumbbell-twosheet
mode = planar
[domain]
shape = dumbbell
c1 = -1.8,0
c2 = 1.8,0
bulb_radius = 1
neck_radius = 0.35
[region]
shape = slab
normal = 1,0
mid = 0
halfwidth = 0.08
mean_convex = false
[grid]
h = 0.015625
box_lo = -2.9,-1.1
box_hi = 2.9,1.1
[run]
horizon = 5
n_snapshots = 8
)"},
        {"dumbbell-onesheet", R"(
[scenario]
name = dumbbell-onesheet
mode = planar
[domain]
shape = dumbbell
c1 = -1.8,0
c2 = 1.8,0
bulb_radius = 1
neck_radius = 0.35
[region]
shape = halfspace
normal = 1,0
offset = 0.08
mean_convex = false
[grid]
h = 0.015625
box_lo = -2.9,-1.1
box_hi = 2.9,1.1
[run]
horizon = 5
n_snapshots = 8
)"},
        {"expanding-hole", R"(
[scenario]
name = expanding-hole
mode = planar
[domain]
shape = disc
center = 0,0
radius = 1
[region]
shape = slab
normal = 0,1
mid = 0
halfwidth = 0.05
mean_convex = false
hole_center = 0,0
hole_radius = 0.1
[grid]
h = 0.00390625
box_lo = -1.05,-1.05
box_hi = 1.05,1.05
[run]
horizon = 0.015
n_snapshots = 8
)"},
        {"static-line", R"(
[scenario]
name = static-line
mode = planar
[domain]
shape = disc
center = 0,0
radius = 1
[region]
shape = halfspace
normal = 0,1
offset = 0
mean_convex = false
[grid]
h = 0.0078125
box_lo = -1.08,-1.08
box_hi = 1.08,1.08
[run]
horizon = 0.01
n_snapshots = 4
)"},
        {"translator-halfdisc", R"(
[scenario]
name = translator-halfdisc
mode = planar
[domain]
shape = halfplane
normal = 0,1
offset = 0
[region]
shape = disc
center = 0,0
radius = 0.5
[grid]
h = 0.010416666666666666
box_lo = -0.6,-0.07
box_hi = 0.6,0.6
[run]
horizon = 0.16
[translator]
eps = 0.1
sigma = 1
tau = 0.1
sweep_eps = 0.2,0.1,0.05
sweep_sigma = 1,0.5,0.25
)"},
        {"translator-discbarrier", R"(
[scenario]
name = translator-discbarrier
mode = planar
[domain]
shape = disc
center = 0,0
radius = 2
[region]
shape = disc
center = 0,-2.154065923073226
radius = 0.8
[grid]
h = 0.010416666666666666
box_lo = -0.85,-2.1
box_hi = 0.85,-1.2
[run]
horizon = 0.16
[translator]
eps = 0.1
sigma = 1
tau = 0.1
)"},
        {"translator-strip1d", R"(
[scenario]
name = translator-strip1d
mode = planar
[domain]
shape = slab
normal = 0,1
mid = 0
halfwidth = 0.0625
[region]
shape = slab
normal = 1,0
mid = 0
halfwidth = 0.5
[grid]
h = 0.00390625
box_lo = -0.55,-0.09
box_hi = 0.55,0.09
[run]
horizon = 0.16
[translator]
eps = 0.5
sigma = 1
tau = 0
)"},
    };
    return table;
}

std::string ensure_dir(const std::string& out_root, const std::string& name,
                       const std::string& stamp) {
    std::filesystem::path dir =
        std::filesystem::path(out_root) / name / stamp;
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : builtin_table()) out.push_back(k);
    return out;
}

std::string builtin_scenario_text(const std::string& name) {
    auto it = builtin_table().find(name);
    if (it == builtin_table().end())
        throw ValidationError("unknown builtin scenario: " + name);
    return it->second;
}

ScenarioConfig get_scenario(const std::string& name_or_path) {
    auto it = builtin_table().find(name_or_path);
    if (it != builtin_table().end())
        return parse_scenario_text(it->second);
    return load_scenario(name_or_path);
}

ScenarioSetup setup_scenario(const ScenarioConfig& cfg) {
    ScenarioSetup s;
    s.cfg = cfg;
    s.dom = std::make_unique<BarrierDomain>(cfg.make_domain());
    s.region = cfg.make_region(*s.dom);
    s.grid = cfg.make_grid();
    return s;
}

// ---------------------------------------------------------------------------

ScenarioOutput run_scenario(const ScenarioConfig& cfg,
                            const std::string& out_root,
                            const std::string& stamp) {
    ScenarioOutput out;
    out.out_dir = ensure_dir(out_root, cfg.name, stamp);
    ScenarioSetup s = setup_scenario(cfg);
    write_text_file(out.out_dir + "/config.txt", cfg.echo());

    FlowTrajectory traj = run_flow(s.region, *s.dom, s.grid, cfg.run);
    std::filesystem::create_directories(out.out_dir + "/snapshots");
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "/snapshots/snap_%04zu.bin", k);
        write_snapshot(out.out_dir + name, traj.snapshots[k].phi,
                       traj.snapshots[k].t);
    }
    write_series_csv(out.out_dir + "/series.csv", traj.series);

    CheckRecord ext;
    ext.check = "extinction";
    ext.scenario = cfg.name;
    ext.measured["t_extinct"] =
        traj.extinct() ? traj.t_extinct : -1.0;
    ext.measured["events"] = (double)traj.events.size();
    ext.pass = true;
    out.report.add(ext);

    if (cfg.run.mean_convex) {
        NestingReport nest = nesting_check(traj);
        CheckRecord rec;
        rec.check = "nesting";
        rec.scenario = cfg.name;
        rec.pass = nest.pass;
        rec.measured["worst_violation"] = nest.worst_violation;
        rec.thresholds["limit"] = s.grid.h;
        out.report.add(rec);
    }
    {
        double worst = 0;
        for (const auto& row : traj.series)
            worst = std::max(worst, row.contact_err);
        CheckRecord rec;
        rec.check = "contact-angle";
        rec.scenario = cfg.name;
        rec.pass = worst <= 0.05;
        rec.measured["max_deviation_rad"] = worst;
        rec.thresholds["limit_rad"] = 0.05;
        out.report.add(rec);
    }
    for (const auto& ev : traj.events) {
        CheckRecord rec;
        rec.check = ev.kind == Event::popping ? "event-popping"
                                              : "event-singularity";
        rec.scenario = cfg.name;
        rec.pass = true;
        rec.measured["t"] = ev.t;
        rec.measured["x"] = ev.pos.x;
        rec.measured["y"] = ev.pos.y;
        rec.measured["boundary"] = ev.boundary ? 1.0 : 0.0;
        out.report.add(rec);
    }
    write_text_file(out.out_dir + "/report.json", out.report.to_json());
    return out;
}

ScenarioOutput run_translator_scenario(const ScenarioConfig& cfg,
                                       const std::string& out_root,
                                       const std::string& stamp) {
    ScenarioOutput out;
    out.out_dir = ensure_dir(out_root, cfg.name, stamp);
    ScenarioSetup s = setup_scenario(cfg);
    write_text_file(out.out_dir + "/config.txt", cfg.echo());

    std::vector<double> eps_list = cfg.sweep_eps.empty()
                                       ? std::vector<double>{cfg.translator.eps}
                                       : cfg.sweep_eps;
    std::vector<double> sig_list =
        cfg.sweep_sigma.empty() ? std::vector<double>{cfg.translator.sigma}
                                : cfg.sweep_sigma;

    std::vector<SweepRow> rows;
    TranslatorSolution main_sol;
    bool have_main = false;
    for (double eps : eps_list)
        for (double sig : sig_list) {
            TranslatorParams p = cfg.translator;
            p.eps = eps;
            p.sigma = sig;
            TranslatorSolution sol =
                solve_continuation(s.region, *s.dom, s.grid, p);
            VBoundReport vb = check_V_lower_bound(sol, *s.dom);
            HLowerReport hl = check_H_lower(sol, *s.dom);
            bool bounds_ok = true;
            for (const auto& tr : sol.trace) bounds_ok &= tr.bound_ok;
            double max_u = 0, min_v = kInf;
            for (int c : sol.cells) {
                max_u = std::max(max_u, sol.u[c]);
                min_v = std::min(min_v, sol.v_field[c]);
            }
            rows.push_back({eps, sig, p.tau, max_u, min_v, hl.fitted_c,
                            vb.pass && bounds_ok});
            if (eps == cfg.translator.eps && sig == cfg.translator.sigma) {
                main_sol = sol;
                have_main = true;
            }

            CheckRecord rec;
            rec.check = "translator-bounds";
            rec.scenario = cfg.name;
            rec.pass = vb.pass && bounds_ok && sol.residual_norm <= 1e-8;
            rec.measured["eps"] = eps;
            rec.measured["sigma"] = sig;
            rec.measured["residual"] = sol.residual_norm;
            rec.measured["max_u"] = max_u;
            rec.measured["sup_bound"] = p.sup_bound(1.0);
            rec.measured["v_slack_1"] = vb.slack_form1;
            rec.measured["v_slack_2"] = vb.slack_form2;
            rec.measured["fitted_c"] = hl.fitted_c;
            rec.thresholds["residual"] = 1e-8;
            out.report.add(rec);
        }
    write_sweep_csv(out.out_dir + "/sweep.csv", rows);
    if (have_main) {
        write_snapshot(out.out_dir + "/solution.bin", main_sol.u, 0.0);
        AmbientExtension ext(*s.dom, cfg.resolved_r_ext(*s.dom));
        MonitorReport mon =
            monitor_f(main_sol, *s.dom, ext, main_sol.params);
        CheckRecord rec;
        rec.check = "monitor-f";
        rec.scenario = cfg.name;
        rec.pass = mon.pass;
        rec.measured["f_max"] = mon.f_max;
        rec.measured["argmax_location"] = (double)mon.argmax_location;
        out.report.add(rec);
    }
    write_text_file(out.out_dir + "/report.json", out.report.to_json());
    return out;
}

ScenarioOutput run_blowup_scenario(const ScenarioConfig& cfg, Vec2 center,
                                   double t_star, double lambda,
                                   const std::string& out_root,
                                   const std::string& stamp) {
    ScenarioOutput out;
    out.out_dir = ensure_dir(out_root, cfg.name + "-blowup", stamp);
    ScenarioSetup s = setup_scenario(cfg);
    write_text_file(out.out_dir + "/config.txt", cfg.echo());

    FlowTrajectory traj = run_flow(s.region, *s.dom, s.grid, cfg.run);
    if (t_star < 0) {
        if (!traj.extinct())
            throw WindowError("no extinction; pass an explicit center time");
        t_star = traj.t_extinct;
        if (!traj.events.empty()) {
            center = traj.events.back().pos;
            t_star = traj.events.back().t;
        }
    }
    if (lambda <= 0) lambda = 0.25 / s.grid.h;
    RescaledFrame frame = rescale(traj, *s.dom, center, t_star, lambda);
    TangentModel model = classify_tangent(frame);

    std::vector<double> ladder;
    for (double r = 0.3; r >= 3 * s.grid.h; r *= 0.5) {
        if (t_star - r * r < 0) continue;
        ladder.push_back(r);
    }
    DensityLadder dl;
    if (ladder.size() >= 2)
        dl = density_monotonicity_check(traj, *s.dom, center, t_star, ladder);

    CheckRecord rec;
    rec.check = "tangent-classification";
    rec.scenario = cfg.name;
    rec.pass = model.kind != TangentModel::unclassified;
    rec.measured["residual"] = model.residual;
    rec.measured["theoretical_density"] = model.theoretical_density;
    rec.measured["multiplicity"] = (double)model.multiplicity;
    rec.measured["lambda"] = lambda;
    out.report.add(rec);
    CheckRecord rec2;
    rec2.check = "density-ladder";
    rec2.scenario = cfg.name;
    rec2.pass = dl.pass;
    rec2.measured["entropy"] = dl.entropy;
    rec2.measured["max_violation"] = dl.max_violation;
    out.report.add(rec2);

    std::ostringstream csv;
    csv << "r,theta\n";
    for (size_t k = 0; k < dl.r.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", dl.r[k], dl.theta[k]);
        csv << buf;
    }
    write_text_file(out.out_dir + "/ladder.csv", csv.str());
    std::ostringstream q;
    q << "{\n  \"kind\": \"" << tangent_kind_name(model.kind)
      << "\",\n  \"residual\": " << model.residual
      << ",\n  \"multiplicity\": " << model.multiplicity
      << ",\n  \"theta\": " << model.theoretical_density << "\n}\n";
    write_text_file(out.out_dir + "/classification.json", q.str());
    write_text_file(out.out_dir + "/report.json", out.report.to_json());
    return out;
}

// ---------------------------------------------------------------------------

namespace {

ScenarioConfig with_resolution(ScenarioConfig cfg, double h) {
    cfg.h = h;
    return cfg;
}

VerificationReport verify_one(const std::string& name,
                              const std::string& out_root,
                              const std::string& stamp) {
    ScenarioConfig cfg = get_scenario(name);
    if (name == "circle" || name == "halfcircle")
        cfg = with_resolution(cfg, 1.0 / 64);

    if (name.rfind("translator", 0) == 0)
        return run_translator_scenario(cfg, out_root, stamp).report;
    VerificationReport rep = run_scenario(cfg, out_root, stamp).report;

    // closed-form extinction checks for the round scenarios
    if (name == "circle" || name == "halfcircle" || name == "sphere") {
        double r0 = cfg.region_radius;
        double expected =
            cfg.mode == Mode::planar ? r0 * r0 / 2 : r0 * r0 / 4;
        double measured = -1;
        for (const auto& r : rep.records)
            if (r.check == "extinction") measured = r.measured.at("t_extinct");
        CheckRecord rec;
        rec.check = "extinction-closed-form";
        rec.scenario = cfg.name;
        rec.measured["t_extinct"] = measured;
        rec.measured["expected"] = expected;
        rec.thresholds["rel_tol"] = 0.05;
        rec.pass = measured > 0 &&
                   std::abs(measured - expected) <= 0.05 * expected;
        rep.add(rec);
    }
    return rep;
}

}  // namespace

VerificationReport verify_all(const std::string& selector,
                              const std::string& out_root,
                              const std::string& stamp, bool parallel) {
    std::vector<std::string> names;
    if (selector == "fast") {
        names = {"circle", "halfcircle", "translator-halfdisc"};
    } else if (selector == "full") {
        names = {"circle",        "halfcircle",
                 "sphere",        "halftorus",
                 "annulus-pop",   "dumbbell-twosheet",
                 "dumbbell-onesheet", "static-line",
                 "translator-halfdisc", "translator-discbarrier",
                 "translator-strip1d"};
    } else {
        throw ValidationError("verify selector must be 'fast' or 'full'");
    }
    VerificationReport total;
    if (parallel) {
        std::vector<std::future<VerificationReport>> futs;
        for (const auto& n : names)
            futs.push_back(std::async(std::launch::async, verify_one, n,
                                      out_root, stamp));
        for (auto& f : futs) total.merge(f.get());
    } else {
        for (const auto& n : names)
            total.merge(verify_one(n, out_root, stamp));
    }
    std::filesystem::create_directories(out_root);
    write_text_file(out_root + "/verify-" + selector + ".json",
                    total.to_json());
    return total;
}

}  // namespace fbflow
