#include "fbflow/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fbflow/diagnostics.hpp"

namespace fbflow {

namespace {

double default_dt_factor(Mode m) { return m == Mode::planar ? 0.2 : 0.12; }

}  // namespace

const SnapshotRec& FlowTrajectory::nearest_snapshot(double t) const {
    if (snapshots.empty()) throw WindowError("trajectory has no snapshots");
    const SnapshotRec* best = &snapshots.front();
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
    return *best;
}

std::vector<Segment> FlowTrajectory::interface_at(const BarrierDomain& dom,
                                                  double t, Vec2 center,
                                                  double radius,
                                                  double snap_tol) const {
    const double clip = 0.75 * grid.h;
    if (mean_convex && !arrival.data.empty()) {
        GridField v(grid, -1.0);
        const double big = 4.0 * grid.h;  // crossings only matter near zero
        for (int c = 0; c < grid.size(); ++c) {
            double u = arrival[c];
            if (std::isnan(u)) {
                v[c] = -big;
            } else if (std::isinf(u)) {
                v[c] = big;
            } else {
                v[c] = std::clamp(u - t, -big, big);
            }
        }
        // Neumann-extend across the wall so junction segments are clean
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                Vec2 p = grid.center(i, j);
                double d = dom.signed_distance(p);
                if (d < 0 && d > -3 * grid.h) {
                    try {
                        v(i, j) = v.sample(dom.reflect(p));
                    } catch (const MedialAxisError&) {
                    }
                }
            }
        return extract_interface_window(v, dom, clip, center, radius);
    }
    const SnapshotRec& snap = nearest_snapshot(t);
    if (std::abs(snap.t - t) > snap_tol)
        throw WindowError("no snapshot close enough to requested time");
    return extract_interface_window(snap.phi, dom, clip, center, radius);
}

// ---------------------------------------------------------------------------

LevelSetFlow::LevelSetFlow(const InitialRegion& region,
                           const BarrierDomain& dom, const Grid2& grid,
                           const RunConfig& cfg)
    : dom_(&dom), grid_(grid), cfg_(cfg) {
    double h = grid_.h;
    double f = cfg_.dt_factor > 0 ? cfg_.dt_factor : default_dt_factor(grid_.mode);
    if (f > cfg_.cfl_limit + 1e-12)
        throw CFLViolationError("dt_factor exceeds the CFL limit");
    dt_ = f * h * h;
    delta_ = cfg_.delta_reg > 0 ? cfg_.delta_reg : h;
    cap_ = (cfg_.band_width + 2) * h;
    axis_left_ = grid_.mode == Mode::axisym && std::abs(grid_.origin.x) < 1e-9 * h;

    dist_.resize(grid_.size());
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i)
            dist_[grid_.idx(i, j)] = dom_->signed_distance(grid_.center(i, j));

    // reflection stencils for the wall collar
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            int c = grid_.idx(i, j);
            if (dist_[c] >= 0 || dist_[c] <= -3 * h) continue;
            Vec2 p = grid_.center(i, j);
            Vec2 m;
            try {
                m = dom_->reflect(p);
            } catch (const MedialAxisError&) {
                continue;
            }
            double fx = (m.x - grid_.origin.x) / h - 0.5;
            double fy = (m.y - grid_.origin.y) / h - 0.5;
            int i0 = std::clamp((int)std::floor(fx), 0, grid_.nx - 2);
            int j0 = std::clamp((int)std::floor(fy), 0, grid_.ny - 2);
            double ax = std::clamp(fx - i0, 0.0, 1.0);
            double ay = std::clamp(fy - j0, 0.0, 1.0);
            GhostStencil gs;
            gs.cell = c;
            gs.src[0] = grid_.idx(i0, j0);
            gs.src[1] = grid_.idx(i0 + 1, j0);
            gs.src[2] = grid_.idx(i0, j0 + 1);
            gs.src[3] = grid_.idx(i0 + 1, j0 + 1);
            gs.w[0] = (1 - ax) * (1 - ay);
            gs.w[1] = ax * (1 - ay);
            gs.w[2] = (1 - ax) * ay;
            gs.w[3] = ax * ay;
            ghosts_.push_back(gs);
            if (dist_[c] > -1.5 * h &&
                dom_->wall_curvature_nearest(p) < -0.01) {
                // cells hugging a wall that curves away from D; popping watch
            }
        }
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            int c = grid_.idx(i, j);
            if (dist_[c] < 0 || dist_[c] > 1.5 * h) continue;
            if (dom_->wall_curvature_nearest(grid_.center(i, j)) < -0.01)
                concave_wall_cells_.push_back(c);
        }

    state_.t = 0;
    state_.step_index = 0;
    state_.phi = GridField(grid_);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            double v = region.level(grid_.center(i, j), dom);
            state_.phi(i, j) = std::clamp(v, -cap_, cap_);
        }
    fill_ghosts(state_.phi.data);
    buf_.resize(grid_.size());

    traj_.grid = grid_;
    traj_.mean_convex = cfg_.mean_convex;
    traj_.band_h = cfg_.band_width * h;
    traj_.horizon = cfg_.horizon;
    traj_.arrival = GridField(grid_, kNaN);

    rebuild_band();
    reinitialize();
    reinitialize();
    rebuild_band();
}

void LevelSetFlow::set_state(const GridField& phi, double t) {
    state_.phi = phi;
    state_.t = t;
    for (double& v : state_.phi.data) v = std::clamp(v, -cap_, cap_);
    fill_ghosts(state_.phi.data);
    state_.band.clear();  // skip the overflow check against the stale band
    rebuild_band();
}

double LevelSetFlow::at(const std::vector<double>& v, int i, int j) const {
    i = mirror_i(i);
    i = std::clamp(i, 0, grid_.nx - 1);
    j = std::clamp(j, 0, grid_.ny - 1);
    return v[grid_.idx(i, j)];
}

void LevelSetFlow::fill_ghosts(std::vector<double>& v) const {
    for (const auto& g : ghosts_) {
        v[g.cell] = g.w[0] * v[g.src[0]] + g.w[1] * v[g.src[1]] +
                    g.w[2] * v[g.src[2]] + g.w[3] * v[g.src[3]];
    }
}

void LevelSetFlow::step() {
    const double h = grid_.h, inv2h = 0.5 / h, invh2 = 1.0 / (h * h);
    const double d2 = delta_ * delta_;
    const int nx = grid_.nx, ny = grid_.ny;
    std::vector<double>& phi = state_.phi.data;
    fill_ghosts(phi);

    double band_max = -kInf;
    for (int c : state_.band) {
        if (dist_[c] < 0) continue;
        int i = c % nx, j = c / nx;
        double P = phi[c];
        double E, W, N, S, NE, NW, SE, SW;
        if (i > 0 && i < nx - 1 && j > 0 && j < ny - 1) {
            E = phi[c + 1];
            W = phi[c - 1];
            N = phi[c + nx];
            S = phi[c - nx];
            NE = phi[c + nx + 1];
            NW = phi[c + nx - 1];
            SE = phi[c - nx + 1];
            SW = phi[c - nx - 1];
        } else {
            E = at(phi, i + 1, j);
            W = at(phi, i - 1, j);
            N = at(phi, i, j + 1);
            S = at(phi, i, j - 1);
            NE = at(phi, i + 1, j + 1);
            NW = at(phi, i - 1, j + 1);
            SE = at(phi, i + 1, j - 1);
            SW = at(phi, i - 1, j - 1);
        }
        double dx = (E - W) * inv2h, dy = (N - S) * inv2h;
        double dxx = (E - 2 * P + W) * invh2, dyy = (N - 2 * P + S) * invh2;
        double dxy = (NE - NW - SE + SW) * 0.25 * invh2;
        double g2 = dx * dx + dy * dy;
        double w2 = d2 + g2;
        double curv = (dxx * (d2 + dy * dy) - 2 * dxy * dx * dy +
                       dyy * (d2 + dx * dx)) /
                      (w2 * std::sqrt(w2));
        double speed = curv;
        if (grid_.mode == Mode::axisym) {
            double r = std::max(grid_.rcoord(i), 0.5 * h);
            speed += dx / (r * std::sqrt(w2));
        }
        double nv = P + dt_ * std::sqrt(g2) * speed;
        nv = std::clamp(nv, -cap_, cap_);
        buf_[c] = nv;
        if (nv > band_max) band_max = nv;
    }

    double tn = state_.t + dt_;
    for (int c : state_.band) {
        if (dist_[c] < 0) continue;
        double old = phi[c], nv = buf_[c];
        if (old > 0 && nv <= 0)
            traj_.arrival[c] = state_.t + dt_ * old / (old - nv);
        phi[c] = nv;
    }
    state_.t = tn;
    state_.step_index++;

    double interior_max = stale_inside_ > 0 ? cap_ : band_max;
    if (!std::isfinite(traj_.t_extinct) && prev_interior_max_ > 0 &&
        interior_max <= 0) {
        double frac = prev_interior_max_ / (prev_interior_max_ - interior_max);
        traj_.t_extinct = state_.t - dt_ + dt_ * std::clamp(frac, 0.0, 1.0);
    }
    prev_interior_max_ = interior_max;
}

void LevelSetFlow::reinitialize() {
    const double h = grid_.h;
    const int nx = grid_.nx;
    std::vector<double>& phi = state_.phi.data;
    std::vector<double> phi0(phi);
    const int n_iter = 2 * cfg_.band_width;
    const double dtau = 0.5 * h;

    // subcell distance estimates for interface-adjacent cells (keeps the
    // zero set pinned during the relaxation)
    std::vector<char> iface(grid_.size(), 0);
    std::vector<double> dref(grid_.size(), 0.0);
    for (int c : state_.band) {
        if (dist_[c] < 0) continue;
        int i = c % nx, j = c / nx;
        double p0 = phi0[c];
        double e = at(phi0, i + 1, j), w = at(phi0, i - 1, j);
        double n = at(phi0, i, j + 1), s = at(phi0, i, j - 1);
        if ((p0 >= 0) != (e >= 0) || (p0 >= 0) != (w >= 0) ||
            (p0 >= 0) != (n >= 0) || (p0 >= 0) != (s >= 0)) {
            iface[c] = 1;
            double gx = (e - w) * 0.5 / h, gy = (n - s) * 0.5 / h;
            double g = std::max(std::hypot(gx, gy), 0.3);
            dref[c] = p0 / g;
        }
    }

    for (int it = 0; it < n_iter; ++it) {
        for (int c : state_.band) {
            if (dist_[c] < 0) continue;
            int i = c % nx, j = c / nx;
            double P = phi[c];
            if (iface[c]) {
                double sgn = phi0[c] >= 0 ? 1.0 : -1.0;
                buf_[c] = P - dtau / h * (sgn * std::abs(P) - dref[c]);
                continue;
            }
            double a = (P - at(phi, i - 1, j)) / h;
            double b = (at(phi, i + 1, j) - P) / h;
            double cc = (P - at(phi, i, j - 1)) / h;
            double e = (at(phi, i, j + 1) - P) / h;
            double g;
            if (phi0[c] >= 0) {
                double ax = std::max(std::max(a, 0.0), -std::min(b, 0.0));
                double ay = std::max(std::max(cc, 0.0), -std::min(e, 0.0));
                g = std::hypot(ax, ay);
            } else {
                double ax = std::max(-std::min(a, 0.0), std::max(b, 0.0));
                double ay = std::max(-std::min(cc, 0.0), std::max(e, 0.0));
                g = std::hypot(ax, ay);
            }
            double s = phi0[c] / std::sqrt(phi0[c] * phi0[c] + h * h);
            buf_[c] = std::clamp(P + dtau * s * (1.0 - g), -cap_, cap_);
        }
        for (int c : state_.band)
            if (dist_[c] >= 0) phi[c] = buf_[c];
        fill_ghosts(phi);
    }
}

void LevelSetFlow::rebuild_band() {
    const double h = grid_.h;
    const double bw = cfg_.band_width * h;
    const int nx = grid_.nx, ny = grid_.ny;
    std::vector<double>& phi = state_.phi.data;
    std::vector<char> old_mask;
    if (!state_.band.empty()) {
        old_mask.assign(grid_.size(), 0);
        for (int c : state_.band) old_mask[c] = 1;
    }
    state_.band.clear();
    std::vector<char> in_band(grid_.size(), 0);
    for (int c = 0; c < grid_.size(); ++c) {
        bool interior = dist_[c] >= 0;
        bool collar = dist_[c] < 0 && dist_[c] > -3 * h;
        if (!interior && !collar) continue;
        if (std::abs(phi[c]) <= bw) {
            in_band[c] = 1;
            state_.band.push_back(c);
            if (interior && !old_mask.empty() && !old_mask[c]) {
                int i = c % nx, j = c / nx;
                double P = phi[c];
                double e = at(phi, i + 1, j), w = at(phi, i - 1, j);
                double n = at(phi, i, j + 1), s = at(phi, i, j - 1);
                bool crossing = (P >= 0) != (e >= 0) || (P >= 0) != (w >= 0) ||
                                (P >= 0) != (n >= 0) || (P >= 0) != (s >= 0);
                if (crossing)
                    throw BandOverflowError(
                        "interface left the narrow band between reinits");
            }
        }
    }
    // halo: stale cells hugging the band, so reinit can pull their clamped
    // values toward true distance before the interface reaches them
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int c = grid_.idx(i, j);
            if (in_band[c]) continue;
            bool interior = dist_[c] >= 0;
            bool collar = dist_[c] < 0 && dist_[c] > -3 * h;
            if (!interior && !collar) continue;
            bool near = (i > 0 && in_band[c - 1]) ||
                        (i + 1 < nx && in_band[c + 1]) ||
                        (j > 0 && in_band[c - nx]) ||
                        (j + 1 < ny && in_band[c + nx]);
            if (near) state_.band.push_back(c);
        }
    stale_inside_ = 0;
    std::vector<char> listed(grid_.size(), 0);
    for (int c : state_.band) listed[c] = 1;
    for (int c = 0; c < grid_.size(); ++c)
        if (dist_[c] >= 0 && phi[c] > 0 && !listed[c]) ++stale_inside_;
}

void LevelSetFlow::record_monitor() {
    const double h = grid_.h, inv2h = 0.5 / h, invh2 = 1.0 / (h * h);
    const double d2 = delta_ * delta_;
    const int nx = grid_.nx;
    std::vector<double>& phi = state_.phi.data;
    double best = 0;
    Vec2 pos{0, 0};
    for (int c : state_.band) {
        if (dist_[c] < 0 || std::abs(phi[c]) > 1.5 * h) continue;
        int i = c % nx, j = c / nx;
        double P = phi[c];
        double E = at(phi, i + 1, j), W = at(phi, i - 1, j);
        double N = at(phi, i, j + 1), S = at(phi, i, j - 1);
        double NE = at(phi, i + 1, j + 1), NW = at(phi, i - 1, j + 1);
        double SE = at(phi, i + 1, j - 1), SW = at(phi, i - 1, j - 1);
        double dx = (E - W) * inv2h, dy = (N - S) * inv2h;
        double dxx = (E - 2 * P + W) * invh2, dyy = (N - 2 * P + S) * invh2;
        double dxy = (NE - NW - SE + SW) * 0.25 * invh2;
        double g2 = dx * dx + dy * dy;
        if (g2 < 0.25) continue;
        double w2 = d2 + g2;
        double curv = (dxx * (d2 + dy * dy) - 2 * dxy * dx * dy +
                       dyy * (d2 + dx * dx)) /
                      (w2 * std::sqrt(w2));
        double Hc = -curv;
        if (grid_.mode == Mode::axisym) {
            double r = std::max(grid_.rcoord(i), 0.5 * h);
            Hc -= dx / (r * std::sqrt(w2));
        }
        if (std::abs(Hc) > best) {
            best = std::abs(Hc);
            pos = grid_.center(i, j);
        }
    }
    if (best > 0) traj_.curv_monitor.push_back({state_.t, best, pos});
}

void LevelSetFlow::check_popping() {
    if (concave_wall_cells_.empty()) return;
    std::vector<double>& phi = state_.phi.data;
    int live = 0;
    for (int c : concave_wall_cells_)
        if (phi[c] >= 0) {
            ++live;
            last_contact_pos_ = grid_.center(c % grid_.nx, c / grid_.nx);
        }
    if (prev_contact_count_ >= 4 && live == 0)
        traj_.events.push_back(
            {Event::popping, last_contact_pos_, state_.t, true});
    prev_contact_count_ = live;
}

void LevelSetFlow::record_series_row() {
    fill_ghosts(state_.phi.data);
    double area = region_measure(state_.phi, *dom_);
    auto segs = extract_interface(state_.phi, *dom_, 0.0);
    double perim = contour_measure(segs, grid_.mode);
    double contact = segs.empty()
                         ? 0.0
                         : max_contact_angle_error(state_.phi, *dom_,
                                                   2.5 * grid_.h);
    CurvatureReport rep =
        curvature_quantities(state_.phi, *dom_, delta_, traj_.band_h);
    traj_.series.push_back({state_.t, area, perim, rep.min_h, rep.max_h,
                            rep.max_ah, contact});
}

FlowTrajectory LevelSetFlow::run() {
    std::vector<double> snap_times = cfg_.snapshot_times;
    if (snap_times.empty()) {
        for (int k = 1; k <= cfg_.n_snapshots; ++k)
            snap_times.push_back(cfg_.horizon * k / cfg_.n_snapshots);
    }
    std::sort(snap_times.begin(), snap_times.end());

    traj_.snapshots.push_back({0.0, state_.phi});
    record_series_row();
    record_monitor();
    check_popping();

    size_t next_snap = 0;
    const double stop_level = -2 * grid_.h;
    while (state_.t < cfg_.horizon - 1e-12) {
        step();
        bool cadence = state_.step_index % cfg_.reinit_every == 0;
        if (cadence) {
            reinitialize();
            rebuild_band();
            record_monitor();
            check_popping();
        }
        if (state_.step_index % cfg_.series_every == 0) record_series_row();
        while (next_snap < snap_times.size() &&
               state_.t >= snap_times[next_snap] - 1e-12) {
            fill_ghosts(state_.phi.data);
            traj_.snapshots.push_back({state_.t, state_.phi});
            ++next_snap;
        }
        if (cfg_.stop_on_extinction && traj_.extinct() &&
            prev_interior_max_ < stop_level)
            break;
    }
    if (traj_.snapshots.back().t < state_.t - 1e-12) {
        fill_ghosts(state_.phi.data);
        traj_.snapshots.push_back({state_.t, state_.phi});
    }
    record_series_row();

    for (int c = 0; c < grid_.size(); ++c)
        if (dist_[c] >= 0 && state_.phi[c] >= 0) traj_.arrival[c] = kInf;

    for (const auto& ev :
         detect_singularity(traj_, *dom_, cfg_.blowup_threshold))
        traj_.events.push_back(ev);
    return traj_;
}

FlowTrajectory run_flow(const InitialRegion& region, const BarrierDomain& dom,
                        const Grid2& grid, const RunConfig& cfg) {
    LevelSetFlow flow(region, dom, grid, cfg);
    return flow.run();
}

FlowState step(const FlowState& state, const InitialRegion& region,
               const BarrierDomain& dom, const RunConfig& cfg, double dt) {
    RunConfig c = cfg;
    if (dt > 0) {
        double h = state.phi.grid.h;
        c.dt_factor = dt / (h * h);
    }
    LevelSetFlow flow(region, dom, state.phi.grid, c);
    flow.set_state(state.phi, state.t);
    flow.step();
    return flow.state();
}

// ---------------------------------------------------------------------------

AvoidanceReport avoidance_check(const FlowTrajectory& a,
                                const FlowTrajectory& b,
                                const BarrierDomain& dom) {
    AvoidanceReport rep;
    const Grid2& g = a.grid;
    // disjointness of the initial sets
    const GridField& pa = a.snapshots.front().phi;
    const GridField& pb = b.snapshots.front().phi;
    for (int c = 0; c < g.size(); ++c) {
        Vec2 p = g.center(c);
        if (dom.signed_distance(p) < 0) continue;
        if (pa[c] >= 0 && pb.sample(p) >= 0) {
            rep.disjoint_input = false;
            break;
        }
    }
    if (!rep.disjoint_input) return rep;

    double prev = kNaN;
    for (const auto& sa : a.snapshots) {
        const SnapshotRec& sb = b.nearest_snapshot(sa.t);
        if (std::abs(sb.t - sa.t) > 0.05 * std::max(a.horizon, 1e-12)) continue;
        auto ia = extract_interface(sa.phi, dom, 0.0);
        auto ib = extract_interface(sb.phi, dom, 0.0);
        if (ia.empty() || ib.empty()) continue;
        double dmin = kInf;
        for (const auto& s1 : ia)
            for (const auto& s2 : ib)
                dmin = std::min(dmin, (s1.mid() - s2.mid()).norm());
        rep.min_distance = std::min(rep.min_distance, dmin);
        if (!std::isnan(prev))
            rep.max_monotonicity_violation =
                std::max(rep.max_monotonicity_violation, prev - dmin);
        prev = dmin;
    }
    rep.pass = rep.min_distance >= g.h &&
               rep.max_monotonicity_violation <= g.h;
    return rep;
}

NestingReport nesting_check(const FlowTrajectory& traj) {
    NestingReport rep;
    const Grid2& g = traj.grid;
    double worst = -kInf;
    for (size_t s1 = 0; s1 < traj.snapshots.size(); ++s1)
        for (size_t s2 = s1 + 1; s2 < traj.snapshots.size(); ++s2) {
            const auto& p1 = traj.snapshots[s1].phi;
            const auto& p2 = traj.snapshots[s2].phi;
            for (int c = 0; c < g.size(); ++c)
                worst = std::max(worst, p2[c] - p1[c]);
        }
    rep.worst_violation = std::max(worst, 0.0);
    rep.pass = rep.worst_violation <= g.h;
    return rep;
}

ArrivalResidual arrival_time_residual(const FlowTrajectory& traj,
                                      const BarrierDomain& dom,
                                      double grad_tol) {
    const Grid2& g = traj.grid;
    const double h = g.h;
    ArrivalResidual out;
    out.residual = GridField(g, kNaN);
    auto ok = [&](int i, int j) {
        if (!g.in_bounds(i, j)) return false;
        double u = traj.arrival(i, j);
        return std::isfinite(u);
    };
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            if (!ok(i, j) || !ok(i - 1, j) || !ok(i + 1, j) || !ok(i, j - 1) ||
                !ok(i, j + 1) || !ok(i - 1, j - 1) || !ok(i + 1, j - 1) ||
                !ok(i - 1, j + 1) || !ok(i + 1, j + 1)) {
                ++out.cells_excluded;
                continue;
            }
            Vec2 p = g.center(i, j);
            if (dom.signed_distance(p) < 2 * h) {
                ++out.cells_excluded;
                continue;
            }
            bool near_event = false;
            for (const auto& ev : traj.events)
                if ((p - ev.pos).norm() < 5 * h) near_event = true;
            if (near_event) {
                ++out.cells_excluded;
                continue;
            }
            const GridField& u = traj.arrival;
            double ux = (u(i + 1, j) - u(i - 1, j)) / (2 * h);
            double uy = (u(i, j + 1) - u(i, j - 1)) / (2 * h);
            double g2 = ux * ux + uy * uy;
            double gn = std::sqrt(g2);
            if (gn < grad_tol) {
                ++out.cells_excluded;
                continue;
            }
            double uxx = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (h * h);
            double uyy = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (h * h);
            double uxy = (u(i + 1, j + 1) - u(i - 1, j + 1) - u(i + 1, j - 1) +
                          u(i - 1, j - 1)) /
                         (4 * h * h);
            double div_term =
                (uxx * uy * uy - 2 * uxy * ux * uy + uyy * ux * ux) /
                (g2 * gn);
            double res = div_term + 1.0 / gn;
            if (g.mode == Mode::axisym) {
                double r = std::max(g.rcoord(i), 0.5 * h);
                res += ux / (r * gn);
            }
            out.residual(i, j) = res;
            out.max_abs = std::max(out.max_abs, std::abs(res));
            ++out.cells_checked;
        }
    return out;
}

std::vector<Event> detect_singularity(const FlowTrajectory& traj,
                                      const BarrierDomain& dom,
                                      double threshold) {
    std::vector<Event> events;
    const double h = traj.grid.h;
    bool hot = false;
    FlowTrajectory::CurvRec last{};
    for (const auto& rec : traj.curv_monitor) {
        bool now = rec.max_h * h >= threshold;
        if (now) {
            hot = true;
            last = rec;
        } else if (hot) {
            events.push_back({Event::singularity, last.argmax, last.t,
                              dom.signed_distance(last.argmax) <= 2 * h});
            hot = false;
        }
    }
    if (hot)
        events.push_back({Event::singularity, last.argmax, last.t,
                          dom.signed_distance(last.argmax) <= 2 * h});
    return events;
}

}  // namespace fbflow
