#ifndef FBFLOW_BLOWUP_HPP
#define FBFLOW_BLOWUP_HPP

#include <string>
#include <vector>

#include "fbflow/geometry.hpp"
#include "fbflow/levelset.hpp"

namespace fbflow {

// ---------------------------------------------------------------------------
// Parabolic rescaling about a spacetime point: y = lambda (x - x*),
// s = lambda^2 (t - t*). Snapshots live on the unit backward window.

struct RescaledFrame {
    Vec2 center;
    double t_center = 0;
    double lambda = 1;
    Mode mode = Mode::planar;
    bool boundary = false;      // rescaled wall visible in the window
    Vec2 barrier_normal;        // outward N at the projected wall point
    double barrier_offset = 0;  // wall = { <N, y> = barrier_offset }
    double axis_r = -kInf;      // rescaled r-coordinate of the rotation axis
    bool vanishes_after = false;
    struct Snap {
        double s;
        std::vector<Vec2> pts;
    };
    std::vector<Snap> snaps;
};

RescaledFrame rescale(const FlowTrajectory& traj, const BarrierDomain& dom,
                      Vec2 x_star, double t_star, double lambda,
                      std::vector<double> s_list = {});

// ---------------------------------------------------------------------------
// Gaussian density. Interior centers use the plain Huisken integral over the
// interface at time t* - r^2; centers near the wall add the mirrored
// interface contribution with a capped linear blend in d(x*)/r.

double gaussian_density(const FlowTrajectory& traj, const BarrierDomain& dom,
                        Vec2 x_star, double t_star, double r);

struct DensityLadder {
    std::vector<double> r, theta;
    double max_violation = 0;  // worst increase toward small r beyond drift
    double entropy = 0;        // sup of theta over the ladder
    bool pass = false;
};
DensityLadder density_monotonicity_check(const FlowTrajectory& traj,
                                         const BarrierDomain& dom, Vec2 x_star,
                                         double t_star,
                                         const std::vector<double>& r_ladder,
                                         double tol_interior = 0.03,
                                         double drift_c = 0.5);

// ---------------------------------------------------------------------------
// Relative thickness th(S, x, r) = inf_v sup_{y in S cap B(x,r)} |<v,y-x>|/r.

struct ThicknessResult {
    double value = 0;
    bool empty = false;
};
ThicknessResult thickness(const std::vector<Vec2>& S, Vec2 x, double r,
                          int n_dir = 64);

// ---------------------------------------------------------------------------
// Expanding-hole experiment: thin slab (half-width w) with a hole of radius
// rho0 punched at `hole_center`; measures dist(K_{r^2}, hole_center)/r on a
// geometric ladder.

struct ExpandingHoleReport {
    double w = 0, rho0 = 0;
    std::vector<double> r, dist_over_r;
    double achieved_A = 0;  // min over the ladder
};
ExpandingHoleReport expanding_hole_experiment(const BarrierDomain& dom,
                                              const Grid2& grid, double w,
                                              double rho0, Vec2 hole_center,
                                              const std::vector<double>& rungs);

// ---------------------------------------------------------------------------
// Tangent-flow classification against the model zoo.

struct TangentModel {
    enum Kind {
        static_plane,
        static_halfplane,
        shrinking_sphere,
        shrinking_halfsphere,
        shrinking_cylinder,
        shrinking_cylinder_axis_in_barrier,
        shrinking_cylinder_axis_perp_barrier,
        shrinking_halfcylinder,
        quasistatic_plane,
        unclassified
    };
    Kind kind = unclassified;
    int multiplicity = 1;
    Vec2 pose_center;
    Vec2 pose_dir;
    double residual = kInf;
    double theoretical_density = 0;
};

std::string tangent_kind_name(TangentModel::Kind k);

TangentModel classify_tangent(const RescaledFrame& frame,
                              double residual_threshold = 0.05);

}  // namespace fbflow

#endif
