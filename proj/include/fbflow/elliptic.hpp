#ifndef FBFLOW_ELLIPTIC_HPP
#define FBFLOW_ELLIPTIC_HPP

#include <utility>
#include <vector>

#include "fbflow/geometry.hpp"
#include "fbflow/grid.hpp"
#include "fbflow/levelset.hpp"

namespace fbflow {

// Parameters of the graph problem
//   div(Du / sqrt(eps^2 + |Du|^2)) + kappa / sqrt(eps^2 + |Du|^2) = sigma u
// with u = 0 on the Dirichlet boundary of the bent region and zero normal
// derivative on the wall. Weight constants default to b = 2 C, m = 20 C,
// a = 20 C + 1 with C the wall curvature bound (flat ambient).
struct TranslatorParams {
    double eps = 0.1;
    double sigma = 1.0;
    double tau = 0.1;          // corner bending; 0 skips bending
    double kappa_target = 1.0;
    int kappa_steps = 10;
    double kappa_floor = 1.0 / 256;
    double newton_tol = 1e-10;  // relative residual target
    int max_newton = 40;
    double weight_b = -1;      // resolved against dom when negative
    double weight_m = -1;
    double decay_a = -1;
    double monitor_lambda = 10.0;
    double monitor_theta = 100.0;

    double resolved_b(const BarrierDomain& dom) const {
        return weight_b >= 0 ? weight_b : 2.0 * dom.curvature_bound();
    }
    double resolved_m(const BarrierDomain& dom) const {
        return weight_m >= 0 ? weight_m : 20.0 * dom.curvature_bound();
    }
    double resolved_a(const BarrierDomain& dom) const {
        return decay_a >= 0 ? decay_a : 20.0 * dom.curvature_bound() + 1.0;
    }
    double sup_bound(double kappa) const { return kappa / (sigma * eps); }
};

struct ContinuationRec {
    double kappa;
    int newton_iters;
    double residual;
    double max_u;
    double sup_bound;
    bool bound_ok;
};

struct TranslatorSolution {
    Grid2 grid;
    TranslatorParams params;
    double kappa = 1.0;

    std::vector<int> cells;        // linear indices of solve cells
    std::vector<int> cell_of;      // grid -> unknown index or -1
    GridField u;                   // solution, 0 outside the region
    GridField u_ext;               // ghost-extended u (valid one ring out)
    GridField region_level;        // bent region level function
    GridField v_field;             // V = 1/sqrt(eps^2+|Du|^2), NaN outside
    GridField h_field;             // graph mean curvature, NaN outside
    std::vector<char> near_dirichlet, near_wall;

    double residual_norm = kInf;
    std::vector<ContinuationRec> trace;
    double min_v_dirichlet = kInf;
    double max_d = 0;

    double z_of(int c) const { return u[c] / params.eps; }
};

// Continuation in kappa from the trivial solution to kappa = 1, warm-started
// damped Newton at each step; throws ContinuationStall when the step
// halving hits the floor, ResolutionError when the grid cannot resolve the
// bending collar (h > tau/8).
TranslatorSolution solve_continuation(const InitialRegion& region,
                                      const BarrierDomain& dom,
                                      const Grid2& grid, TranslatorParams p);

// Solves at tau and tau/2; returns the tau/2 solution and the max difference
// of the two (the bending extrapolation error).
std::pair<TranslatorSolution, double> solve_translator(
    const InitialRegion& region, const BarrierDomain& dom, const Grid2& grid,
    TranslatorParams p);

// Directional Jacobian consistency: max over random directions of
// |J v - (F(u+tv)-F(u-tv))/2t| / ||v||; used by the solver self-test.
double jacobian_fd_mismatch(const InitialRegion& region,
                            const BarrierDomain& dom, const Grid2& grid,
                            TranslatorParams p, double t_pert, int n_dirs,
                            unsigned seed);

// ---------------------------------------------------------------------------
// Maximum-principle bound checks

struct VBoundReport {
    bool pass = false;
    double slack_form1 = kInf;  // min over cells of V - rhs_1
    double slack_form2 = kInf;  // min over cells of V - rhs_2
    double min_v = kInf;
};
VBoundReport check_V_lower_bound(const TranslatorSolution& sol,
                                 const BarrierDomain& dom);

struct HLowerReport {
    bool pass = false;
    double fitted_c = 0;  // largest c with H + sigma u >= c e^{-a u}
    double margin;        // discretization noise floor used
};
HLowerReport check_H_lower(const TranslatorSolution& sol,
                           const BarrierDomain& dom);

struct NearBoundarySupReport {
    bool pass = false;
    std::vector<double> sup_per_solution;
    double spread = kInf;  // max/min across the sweep
};
NearBoundarySupReport check_near_boundary_sup(
    const std::vector<TranslatorSolution>& sweep, const FlowTrajectory& traj,
    const BarrierDomain& dom, double delta);

// sigma-monotonicity: for sigma1 <= sigma2, u1 >= u2 - h pointwise.
double sigma_monotonicity_violation(const TranslatorSolution& lo_sigma,
                                    const TranslatorSolution& hi_sigma);

// ---------------------------------------------------------------------------
// One-sided minimization

struct Competitor {
    std::string name;
    GridField level;  // F = { level >= 0 } INTERSECT D
};

struct OneSidedReport {
    bool pass = false;
    double perimeter_kt = 0;
    std::vector<std::pair<std::string, double>> competitor_perimeters;
    double worst_margin = kInf;  // min over F of perim(F) - perim(K_t)
};
OneSidedReport one_sided_min_check(const FlowTrajectory& traj,
                                   const BarrierDomain& dom, double t,
                                   const std::vector<Competitor>& competitors,
                                   double slack_factor = 4.0);

// Bump-family competitors squeezed between K_t and K (seeded).
std::vector<Competitor> make_bump_competitors(const FlowTrajectory& traj,
                                              const BarrierDomain& dom,
                                              const InitialRegion& region,
                                              double t, int count,
                                              unsigned seed);

}  // namespace fbflow

#endif
