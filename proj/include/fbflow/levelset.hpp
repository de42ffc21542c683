#ifndef FBFLOW_LEVELSET_HPP
#define FBFLOW_LEVELSET_HPP

#include <optional>
#include <string>
#include <vector>

#include "fbflow/geometry.hpp"
#include "fbflow/grid.hpp"
#include "fbflow/interface.hpp"

namespace fbflow {

struct RunConfig {
    double horizon = 1.0;
    double dt_factor = -1.0;   // dt = dt_factor * h^2; default 0.2 / 0.12
    double delta_reg = -1.0;   // curvature regularization; default h
    double cfl_limit = 0.25;
    int reinit_every = 10;
    int band_width = 8;        // band half-width in cells
    int series_every = 100;    // diagnostics stream cadence (steps)
    int n_snapshots = 12;
    std::vector<double> snapshot_times;  // overrides n_snapshots when set
    bool mean_convex = true;
    bool stop_on_extinction = true;
    double blowup_threshold = 0.4;  // singular when max|H| h exceeds this
};

struct Event {
    enum Kind { singularity, popping };
    Kind kind;
    Vec2 pos;
    double t;
    bool boundary;
};

// One time slice. phi is the Neumann-extended working field: ghost cells
// beyond the wall carry mirror values so that <N, grad phi> = 0 on the wall;
// membership in K_t is always (phi >= 0 && d >= 0).
struct FlowState {
    double t = 0;
    int step_index = 0;
    GridField phi;
    std::vector<int> band;  // linear indices of evolved cells
};

struct SnapshotRec {
    double t;
    GridField phi;
};

struct FlowTrajectory {
    Grid2 grid;
    bool mean_convex = true;
    double band_h = 0;  // band half-width in length units
    std::vector<SnapshotRec> snapshots;
    // last exit time per cell; +inf = still in K at the end, NaN = never in K
    GridField arrival;
    double t_extinct = kNaN;
    double horizon = 0;
    std::vector<Event> events;

    struct DiagRow {
        double t, area, perimeter, min_h, max_h, max_ah, contact_err;
    };
    std::vector<DiagRow> series;

    struct CurvRec {
        double t, max_h;
        Vec2 argmax;
    };
    std::vector<CurvRec> curv_monitor;

    bool extinct() const { return std::isfinite(t_extinct); }
    const SnapshotRec& nearest_snapshot(double t) const;

    // Dirichlet interface of K_t within a window. Mean-convex trajectories
    // slice the arrival-time field (valid at any recorded time); otherwise
    // the nearest snapshot is used and must lie within `snap_tol` of t.
    std::vector<Segment> interface_at(const BarrierDomain& dom, double t,
                                      Vec2 center, double radius,
                                      double snap_tol = kInf) const;
};

// Explicit free-boundary level-set stepper. Ghost cells outside D are filled
// with reflected values each step; in axisym mode the profile curvature is
// augmented with the rotational term and the axis column is mirrored.
class LevelSetFlow {
  public:
    LevelSetFlow(const InitialRegion& region, const BarrierDomain& dom,
                 const Grid2& grid, const RunConfig& cfg);

    void step();
    FlowTrajectory run();
    void set_state(const GridField& phi, double t);

    const FlowState& state() const { return state_; }
    double dt() const { return dt_; }
    const BarrierDomain& dom() const { return *dom_; }

  private:
    const BarrierDomain* dom_;
    Grid2 grid_;
    RunConfig cfg_;
    FlowState state_;
    FlowTrajectory traj_;
    double dt_, delta_, cap_;
    bool axis_left_ = false;

    std::vector<double> dist_;  // signed distance per cell
    struct GhostStencil {
        int cell;
        int src[4];
        double w[4];
    };
    std::vector<GhostStencil> ghosts_;
    std::vector<int> concave_wall_cells_;
    int stale_inside_ = 0;  // interior phi>0 cells outside the band
    double prev_interior_max_ = kInf;
    int prev_contact_count_ = -1;
    Vec2 last_contact_pos_;
    std::vector<double> buf_;

    int mirror_i(int i) const { return (axis_left_ && i < 0) ? -1 - i : i; }
    double at(const std::vector<double>& v, int i, int j) const;
    void fill_ghosts(std::vector<double>& v) const;
    void reinitialize();
    void rebuild_band();
    void record_monitor();
    void check_popping();
    void record_series_row();
};

FlowTrajectory run_flow(const InitialRegion& region, const BarrierDomain& dom,
                        const Grid2& grid, const RunConfig& cfg);

// One explicit step as a pure function (builds a throwaway stepper).
FlowState step(const FlowState& state, const InitialRegion& region,
               const BarrierDomain& dom, const RunConfig& cfg, double dt);

// ---------------------------------------------------------------------------
// Set-theoretic checks

struct AvoidanceReport {
    bool pass = false;
    bool disjoint_input = true;
    double min_distance = kInf;
    double max_monotonicity_violation = 0;
};
AvoidanceReport avoidance_check(const FlowTrajectory& a,
                                const FlowTrajectory& b,
                                const BarrierDomain& dom);

struct NestingReport {
    bool pass = false;
    double worst_violation = 0;  // max over pairs of phi(t2) - phi(t1)
};
NestingReport nesting_check(const FlowTrajectory& traj);

// Pointwise residual of div(Du/|Du|) + 1/|Du| = 0 on the swept region.
struct ArrivalResidual {
    GridField residual;   // NaN where excluded
    double max_abs = 0;
    int cells_checked = 0;
    int cells_excluded = 0;
};
ArrivalResidual arrival_time_residual(const FlowTrajectory& traj,
                                      const BarrierDomain& dom,
                                      double grad_tol = 0.2);

std::vector<Event> detect_singularity(const FlowTrajectory& traj,
                                      const BarrierDomain& dom,
                                      double threshold = 0.4);

}  // namespace fbflow

#endif
