#ifndef FBFLOW_DIAGNOSTICS_HPP
#define FBFLOW_DIAGNOSTICS_HPP

#include <vector>

#include "fbflow/elliptic.hpp"
#include "fbflow/geometry.hpp"
#include "fbflow/grid.hpp"
#include "fbflow/levelset.hpp"

namespace fbflow {

// ---------------------------------------------------------------------------
// Curvature of a level-set slice. Sign convention: H > 0 when the curvature
// vector points into K = { phi >= 0 } (mean-convex positive). In planar mode
// |A| = |H|; in axisym mode the principal curvatures are the profile
// curvature and the rotational one.

struct CurvaturePoint {
    Vec2 p;
    Vec2 nu;           // outward unit normal of K
    double H;
    double A_norm;
    double lambda1;    // smallest principal curvature
    double gradH_tan;  // |interface-tangential gradient of H|
};

struct CurvatureReport {
    std::vector<CurvaturePoint> points;
    double min_h = kInf, max_h = -kInf;
    double max_ah = 0;        // max |A|/H over points with H > 0
    double min_l1_over_h = kInf;
    int degenerate_cells = 0;
};

CurvatureReport curvature_quantities(const GridField& phi,
                                     const BarrierDomain& dom,
                                     double delta_reg, double band_h);

// ---------------------------------------------------------------------------
// Noncollapsing: largest tangent balls (relative to D) inside and outside K.

struct NoncollapsePoint {
    Vec2 p;
    double H, r_in, r_out;
};

struct NoncollapseReport {
    std::vector<NoncollapsePoint> points;
    double min_rin_h = kInf, min_rout_h = kInf;
    int sampled = 0;
};

NoncollapseReport noncollapsing(const GridField& phi, const BarrierDomain& dom,
                                double H0, double delta_reg,
                                int max_points = 120);

// ---------------------------------------------------------------------------
// Perturbed second fundamental form B = A + T on the translator graph, with
// T(X,Y,Z) = k(X,Z)<Y,N> + k(Y,Z)<X,N> built from the extended wall fields.
// B(X,N) vanishes at wall contact for tangent X perpendicular to N.

struct PerturbedSFF {
    GridField b_norm;          // |B| over the solve region, NaN outside
    GridField a_norm;          // |A| likewise
    double max_b_dev_junction = 0;  // max |B(X,N)| over wall-contact points
    double max_a_dev_junction = 0;  // max |A(X,N)| there
    int junction_points = 0;
};

PerturbedSFF perturbed_sff(const TranslatorSolution& sol,
                           const BarrierDomain& dom,
                           const AmbientExtension& ext);

// Monitor f = (|B| + Lambda sigma u + Theta) / (V w), w = e^{a u - b d}.
struct MonitorReport {
    enum Location { interior, dirichlet, neumann };
    GridField f;
    double f_max = 0;
    Vec2 argmax;
    Location argmax_location = interior;
    bool pass = false;  // argmax away from the Neumann boundary
};

MonitorReport monitor_f(const TranslatorSolution& sol, const BarrierDomain& dom,
                        const AmbientExtension& ext,
                        const TranslatorParams& p);

// ---------------------------------------------------------------------------
// Corollary-estimate monitors on trajectories.

struct RatioAHSeries {
    std::vector<double> t, ratio;
    double fit_c = 0, fit_rho = 0;
    bool pass = false;  // series dominated by 1.2 * C e^{rho t}
};
RatioAHSeries ratio_AH_series(const FlowTrajectory& traj,
                              const BarrierDomain& dom, double t_min,
                              double delta_reg);

struct ConvexityReport {
    bool pass = false;
    double worst = 0;  // max over samples of (-lambda1/H - eps_cvx), clamped at 0
    double frontier;   // smallest eps_cvx that would pass
};
ConvexityReport convexity_estimate(const FlowTrajectory& traj,
                                   const BarrierDomain& dom, double eps_cvx,
                                   double H0, double delta_reg);

struct GradientEstimateReport {
    bool pass = false;
    double fitted_c = 0;  // smallest passing C_grad
};
GradientEstimateReport gradient_estimate(const FlowTrajectory& traj,
                                         const BarrierDomain& dom,
                                         double C_grad, double H0,
                                         double delta_reg);

}  // namespace fbflow

#endif
