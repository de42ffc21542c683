#ifndef FBFLOW_GEOMETRY_HPP
#define FBFLOW_GEOMETRY_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fbflow/types.hpp"

namespace fbflow {

// ---------------------------------------------------------------------------
// Barrier domain D. Convention: signed distance d > 0 strictly inside, d = 0
// on the wall, outward unit normal N = -grad d. A disc barrier of radius R
// has wall curvature +1/R; the inner wall of an annulus has -1/R_in.

struct DiscShape {
    Vec2 center;
    double radius;
};
struct AnnulusShape {
    Vec2 center;
    double r_in, r_out;
};
struct HalfplaneShape {
    Vec2 normal;    // inward unit normal of D
    double offset;  // D = { <normal, x> >= offset }
};
struct SlabShape {
    Vec2 normal;  // unit normal of the two walls
    double mid;   // D = { |<normal, x> - mid| <= halfwidth }
    double halfwidth;
};
struct DumbbellShape {
    Vec2 c1, c2;        // bulb centers
    double bulb_radius;
    double neck_radius; // capsule around segment [c1, c2]
};
struct BallAxisymShape {
    double radius;  // ball about the origin, profile in (r, z)
};

using BarrierShape = std::variant<DiscShape, AnnulusShape, HalfplaneShape,
                                  SlabShape, DumbbellShape, BallAxisymShape>;

class BarrierDomain {
  public:
    BarrierDomain(BarrierShape shape, Mode mode);

    double signed_distance(Vec2 x) const;
    // grad of the signed distance (unit length away from the medial axis)
    Vec2 distance_gradient(Vec2 x) const;
    // outward unit normal, valid near the wall (N = -grad d)
    Vec2 outward_normal(Vec2 x) const { return -distance_gradient(x); }
    // nearest wall point; throws MedialAxisError when ambiguous
    Vec2 project_to_wall(Vec2 x) const;
    // mirror image across the wall, x~ = 2 xi(x) - x
    Vec2 reflect(Vec2 x) const;
    // wall curvature at a wall point (profile-plane scalar, outward-N
    // convention); throws NotOnBoundaryError when |d(y)| >= tol
    double wall_curvature(Vec2 y, double tol = 1e-6) const;
    // wall curvature evaluated at the nearest wall point (no tolerance check)
    double wall_curvature_nearest(Vec2 x) const;

    // max over the wall of |curvature|
    double curvature_bound() const { return curvature_bound_; }
    // radius within which projection/reflection is well defined
    double reach() const { return reach_; }
    bool wall_mean_convex() const { return wall_mean_convex_; }
    Mode mode() const { return mode_; }
    const BarrierShape& shape() const { return shape_; }

    // bounding box of D (used to size grids)
    void bounding_box(Vec2& lo, Vec2& hi) const;

  private:
    BarrierShape shape_;
    Mode mode_;
    double curvature_bound_ = 0;
    double reach_ = kInf;
    bool wall_mean_convex_ = true;
};

// ---------------------------------------------------------------------------
// Initial region K (closed subset of D). Described by a level function
// phi_K > 0 inside; the actual region is always { phi_K >= 0 } INTERSECT D.

struct RegionDisc {
    Vec2 center;
    double radius;
};
struct RegionSlab {
    Vec2 normal;  // unit
    double mid;
    double halfwidth;
};
struct RegionHalfspace {
    Vec2 normal;
    double offset;  // { <normal, x> <= offset }
};
struct RegionAnnulusShell {
    Vec2 center;
    double r_in, r_out;
};
struct RegionTorusProfile {
    double ring_radius;  // profile-disc center distance from the axis
    double tube_radius;
    double z_center;
};
// torus profile attached orthogonally to a ball barrier of radius R:
// z_center is derived as sqrt(R^2 + tube^2 - ring^2)
struct RegionHalfTorusProfile {
    double ring_radius;
    double tube_radius;
};

using RegionShape =
    std::variant<RegionDisc, RegionSlab, RegionHalfspace, RegionAnnulusShell,
                 RegionTorusProfile, RegionHalfTorusProfile>;

struct RegionHole {
    Vec2 center;
    double radius;
};

class InitialRegion {
  public:
    InitialRegion() = default;
    InitialRegion(RegionShape shape, bool mean_convex = true,
                  std::optional<RegionHole> hole = std::nullopt);

    // level function of K, positive inside (distance-like)
    double level(Vec2 x, const BarrierDomain& dom) const;
    bool contains(Vec2 x, const BarrierDomain& dom) const {
        return level(x, dom) >= 0 && dom.signed_distance(x) >= 0;
    }
    bool mean_convex() const { return mean_convex_; }
    double bend_tau() const { return bend_tau_; }
    const RegionShape& shape() const { return shape_; }
    const std::optional<RegionHole>& hole() const { return hole_; }

    friend InitialRegion bend_corners(const InitialRegion& region,
                                      const BarrierDomain& dom, double tau);

  private:
    RegionShape shape_;
    bool mean_convex_ = true;
    std::optional<RegionHole> hole_;
    double bend_tau_ = 0.0;  // 0 = unbent
    double base_level(Vec2 x, const BarrierDomain& dom) const;
};

// Corner bending: returns K^tau <= K whose junction with the wall satisfies
// the strict angle condition <nu, N> <= -tau/2. K is modified only inside the
// collar { d < tau }. Throws TooThinError when nothing of K survives.
InitialRegion bend_corners(const InitialRegion& region,
                           const BarrierDomain& dom, double tau);

// ---------------------------------------------------------------------------
// Smooth extension of the wall normal N and wall curvature k into the collar
// { d < r_ext }; both vanish (C2) outside the collar.

class AmbientExtension {
  public:
    AmbientExtension(const BarrierDomain& dom, double r_ext);

    Vec2 normal(Vec2 x) const;      // extended N, cut off with the collar
    double curvature(Vec2 x) const; // extended k, cut off with the collar
    double cutoff(Vec2 x) const;
    double r_ext() const { return r_ext_; }

  private:
    const BarrierDomain* dom_;
    double r_ext_;
};

}  // namespace fbflow

#endif
