#ifndef FBFLOW_INTERFACE_HPP
#define FBFLOW_INTERFACE_HPP

#include <functional>
#include <vector>

#include "fbflow/geometry.hpp"
#include "fbflow/grid.hpp"

namespace fbflow {

struct Segment {
    Vec2 a, b;
    Vec2 mid() const { return (a + b) * 0.5; }
    double length() const { return (b - a).norm(); }
};

// Zero-contour of a cell-centered field by marching squares. Cells where
// `valid` is false are treated as strictly outside. Segments whose midpoint
// lies outside D by more than `wall_clip` (measured with the signed distance,
// negative inside exclusion) are dropped, so the returned contour is the
// Dirichlet part of the region boundary only.
std::vector<Segment> extract_interface(
    const GridField& phi, const BarrierDomain& dom, double wall_clip,
    const std::function<bool(int, int)>& valid = nullptr);

// Restriction of extract_interface to |p - center| <= radius.
std::vector<Segment> extract_interface_window(
    const GridField& phi, const BarrierDomain& dom, double wall_clip,
    Vec2 center, double radius,
    const std::function<bool(int, int)>& valid = nullptr);

// Length of the contour; in axisym mode each segment is weighted by the
// circumference 2 pi r of its midpoint (surface area of the revolved band).
double contour_measure(const std::vector<Segment>& segs, Mode mode);

// Area (planar) or revolved volume (axisym) of { phi >= 0 } INTERSECT D,
// with a one-cell linear subcell correction.
double region_measure(const GridField& phi, const BarrierDomain& dom);

// Sample points (segment midpoints) with per-point weight = segment measure.
struct InterfaceSample {
    Vec2 p;
    double weight;
};
std::vector<InterfaceSample> interface_samples(const std::vector<Segment>& segs,
                                               Mode mode);

// Number of connected polyline components (endpoint matching at h/4).
int contour_components(const std::vector<Segment>& segs, double h);

// Largest deviation of the junction contact angle from pi/2 (radians).
// Junctions are interface points within `collar` of the wall; returns 0 when
// the contour never meets the wall.
double max_contact_angle_error(const GridField& phi, const BarrierDomain& dom,
                               double collar);

// Symmetric mean (Chamfer) distance between two point sets.
double chamfer_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// One-sided Hausdorff-style distances between sample sets.
double hausdorff_distance(const std::vector<Vec2>& a,
                          const std::vector<Vec2>& b);

// Distance from x to the nearest point of the sample set (inf when empty).
double distance_to_samples(Vec2 x, const std::vector<InterfaceSample>& s);

}  // namespace fbflow

#endif
