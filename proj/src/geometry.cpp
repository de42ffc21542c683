#include "fbflow/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fbflow {

namespace {

double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double t = std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

BarrierDomain::BarrierDomain(BarrierShape shape, Mode mode)
    : shape_(std::move(shape)), mode_(mode) {
    std::visit(
        [this](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                curvature_bound_ = 1.0 / s.radius;
                reach_ = s.radius;
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                curvature_bound_ = 1.0 / s.r_in;
                reach_ = 0.5 * (s.r_out - s.r_in);
                wall_mean_convex_ = false;  // inner wall curves away from D
            } else if constexpr (std::is_same_v<T, HalfplaneShape>) {
                curvature_bound_ = 0.0;
                reach_ = kInf;
            } else if constexpr (std::is_same_v<T, SlabShape>) {
                curvature_bound_ = 0.0;
                reach_ = s.halfwidth;
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                curvature_bound_ = 1.0 / s.bulb_radius;
                reach_ = 0.5 * s.neck_radius;
            } else if constexpr (std::is_same_v<T, BallAxisymShape>) {
                curvature_bound_ = 1.0 / s.radius;
                reach_ = s.radius;
            }
        },
        shape_);
}

double BarrierDomain::signed_distance(Vec2 x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                return s.radius - (x - s.center).norm();
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                double rho = (x - s.center).norm();
                return std::min(s.r_out - rho, rho - s.r_in);
            } else if constexpr (std::is_same_v<T, HalfplaneShape>) {
                return s.normal.dot(x) - s.offset;
            } else if constexpr (std::is_same_v<T, SlabShape>) {
                return s.halfwidth - std::abs(s.normal.dot(x) - s.mid);
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                double d1 = s.bulb_radius - (x - s.c1).norm();
                double d2 = s.bulb_radius - (x - s.c2).norm();
                double dn = s.neck_radius - dist_to_segment(x, s.c1, s.c2);
                return std::max({d1, d2, dn});  // union of the three parts
            } else if constexpr (std::is_same_v<T, BallAxisymShape>) {
                return s.radius - x.norm();
            }
        },
        shape_);
}

Vec2 BarrierDomain::distance_gradient(Vec2 x) const {
    return std::visit(
        [&](const auto& s) -> Vec2 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                Vec2 v = x - s.center;
                double n = v.norm();
                if (n < 1e-14) throw MedialAxisError("disc center");
                return -(v / n);
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                Vec2 v = x - s.center;
                double rho = v.norm();
                if (rho < 1e-14) throw MedialAxisError("annulus center");
                // inner branch active when rho - r_in < r_out - rho
                if (rho - s.r_in < s.r_out - rho) return v / rho;
                return -(v / rho);
            } else if constexpr (std::is_same_v<T, HalfplaneShape>) {
                return s.normal;
            } else if constexpr (std::is_same_v<T, SlabShape>) {
                double sgn = (s.normal.dot(x) - s.mid) >= 0 ? -1.0 : 1.0;
                return s.normal * sgn;
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                double d1 = s.bulb_radius - (x - s.c1).norm();
                double d2 = s.bulb_radius - (x - s.c2).norm();
                double dn = s.neck_radius - dist_to_segment(x, s.c1, s.c2);
                if (d1 >= d2 && d1 >= dn) {
                    Vec2 v = x - s.c1;
                    double n = v.norm();
                    if (n < 1e-14) throw MedialAxisError("bulb center");
                    return -(v / n);
                }
                if (d2 >= dn) {
                    Vec2 v = x - s.c2;
                    double n = v.norm();
                    if (n < 1e-14) throw MedialAxisError("bulb center");
                    return -(v / n);
                }
                // capsule wall: straight section or end caps
                Vec2 ab = s.c2 - s.c1;
                double t = std::clamp((x - s.c1).dot(ab) / ab.norm2(), 0.0, 1.0);
                Vec2 foot = s.c1 + ab * t;
                Vec2 v = x - foot;
                double n = v.norm();
                if (n < 1e-14) throw MedialAxisError("capsule axis");
                return -(v / n);
            } else if constexpr (std::is_same_v<T, BallAxisymShape>) {
                double n = x.norm();
                if (n < 1e-14) throw MedialAxisError("ball center");
                return -(x / n);
            }
        },
        shape_);
}

Vec2 BarrierDomain::project_to_wall(Vec2 x) const {
    double d = signed_distance(x);
    if (std::isfinite(reach_) && std::abs(d) > 0.95 * reach_)
        throw MedialAxisError("projection outside the reach collar");
    Vec2 g = distance_gradient(x);
    return x - g * d;
}

Vec2 BarrierDomain::reflect(Vec2 x) const {
    Vec2 xi = project_to_wall(x);
    return xi * 2.0 - x;
}

double BarrierDomain::wall_curvature_nearest(Vec2 x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                return 1.0 / s.radius;
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                double rho = (x - s.center).norm();
                if (rho - s.r_in < s.r_out - rho) return -1.0 / s.r_in;
                return 1.0 / s.r_out;
            } else if constexpr (std::is_same_v<T, HalfplaneShape>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, SlabShape>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                double d1 = s.bulb_radius - (x - s.c1).norm();
                double d2 = s.bulb_radius - (x - s.c2).norm();
                double dn = s.neck_radius - dist_to_segment(x, s.c1, s.c2);
                if (d1 >= d2 && d1 >= dn) return 1.0 / s.bulb_radius;
                if (d2 >= dn) return 1.0 / s.bulb_radius;
                Vec2 ab = s.c2 - s.c1;
                double t = (x - s.c1).dot(ab) / ab.norm2();
                if (t <= 0.0 || t >= 1.0) return 1.0 / s.neck_radius;
                return 0.0;  // straight capsule wall
            } else if constexpr (std::is_same_v<T, BallAxisymShape>) {
                return 1.0 / s.radius;
            }
        },
        shape_);
}

double BarrierDomain::wall_curvature(Vec2 y, double tol) const {
    if (std::abs(signed_distance(y)) >= tol)
        throw NotOnBoundaryError("point is not on the wall");
    return wall_curvature_nearest(y);
}

void BarrierDomain::bounding_box(Vec2& lo, Vec2& hi) const {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiscShape>) {
                lo = s.center - Vec2{s.radius, s.radius};
                hi = s.center + Vec2{s.radius, s.radius};
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                lo = s.center - Vec2{s.r_out, s.r_out};
                hi = s.center + Vec2{s.r_out, s.r_out};
            } else if constexpr (std::is_same_v<T, HalfplaneShape>) {
                lo = {-kInf, -kInf};  // unbounded; caller supplies the box
                hi = {kInf, kInf};
            } else if constexpr (std::is_same_v<T, SlabShape>) {
                lo = {-kInf, -kInf};
                hi = {kInf, kInf};
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                double r = s.bulb_radius;
                lo = {std::min(s.c1.x, s.c2.x) - r, std::min(s.c1.y, s.c2.y) - r};
                hi = {std::max(s.c1.x, s.c2.x) + r, std::max(s.c1.y, s.c2.y) + r};
            } else if constexpr (std::is_same_v<T, BallAxisymShape>) {
                lo = {0.0, -s.radius};
                hi = {s.radius, s.radius};
            }
        },
        shape_);
}

// ---------------------------------------------------------------------------
// InitialRegion

InitialRegion::InitialRegion(RegionShape shape, bool mean_convex,
                             std::optional<RegionHole> hole)
    : shape_(std::move(shape)), mean_convex_(mean_convex), hole_(hole) {}

double InitialRegion::base_level(Vec2 x, const BarrierDomain& dom) const {
    double phi = std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RegionDisc>) {
                return s.radius - (x - s.center).norm();
            } else if constexpr (std::is_same_v<T, RegionSlab>) {
                return s.halfwidth - std::abs(s.normal.dot(x) - s.mid);
            } else if constexpr (std::is_same_v<T, RegionHalfspace>) {
                return s.offset - s.normal.dot(x);
            } else if constexpr (std::is_same_v<T, RegionAnnulusShell>) {
                double rho = (x - s.center).norm();
                return std::min(s.r_out - rho, rho - s.r_in);
            } else if constexpr (std::is_same_v<T, RegionTorusProfile>) {
                Vec2 c{s.ring_radius, s.z_center};
                return s.tube_radius - (x - c).norm();
            } else if constexpr (std::is_same_v<T, RegionHalfTorusProfile>) {
                const auto* ball = std::get_if<BallAxisymShape>(&dom.shape());
                if (!ball)
                    throw ValidationError(
                        "half-torus region requires a ball barrier");
                double R = ball->radius;
                double zc2 = R * R + s.tube_radius * s.tube_radius -
                             s.ring_radius * s.ring_radius;
                if (zc2 <= 0)
                    throw ValidationError("half-torus: ring radius too large");
                Vec2 c{s.ring_radius, std::sqrt(zc2)};
                return s.tube_radius - (x - c).norm();
            }
        },
        shape_);
    if (hole_) phi = std::min(phi, (x - hole_->center).norm() - hole_->radius);
    return phi;
}

double InitialRegion::level(Vec2 x, const BarrierDomain& dom) const {
    double phi = base_level(x, dom);
    if (bend_tau_ > 0.0) {
        double d = dom.signed_distance(x);
        if (d > 0.0 && d < bend_tau_)
            phi -= bend_tau_ * bump_c2(d / bend_tau_) * d;
    }
    return phi;
}

InitialRegion bend_corners(const InitialRegion& region,
                           const BarrierDomain& dom, double tau) {
    if (tau <= 0.0 || tau > 1.0)
        throw ValidationError("bend tau must lie in (0, 1]");
    InitialRegion bent = region;
    bent.bend_tau_ = tau;

    // crude thinness probe along the wall collar
    Vec2 lo, hi;
    dom.bounding_box(lo, hi);
    if (std::isfinite(lo.x)) {
        bool any_inside = false;
        int n = 64;
        for (int i = 0; i < n && !any_inside; ++i)
            for (int j = 0; j < n; ++j) {
                Vec2 p{lo.x + (hi.x - lo.x) * (i + 0.5) / n,
                       lo.y + (hi.y - lo.y) * (j + 0.5) / n};
                if (dom.signed_distance(p) > 0 && bent.level(p, dom) > 0) {
                    any_inside = true;
                    break;
                }
            }
        if (!any_inside)
            throw TooThinError("region vanishes under corner bending");
    }
    return bent;
}

// ---------------------------------------------------------------------------
// AmbientExtension

AmbientExtension::AmbientExtension(const BarrierDomain& dom, double r_ext)
    : dom_(&dom), r_ext_(r_ext) {
    if (!(r_ext > 0)) throw ValidationError("r_ext must be positive");
}

double AmbientExtension::cutoff(Vec2 x) const {
    double d = dom_->signed_distance(x);
    if (d >= r_ext_) return 0.0;
    if (d <= 0.0) return 1.0;
    return bump_c2(d / r_ext_);
}

Vec2 AmbientExtension::normal(Vec2 x) const {
    double c = cutoff(x);
    if (c == 0.0) return {0, 0};
    return dom_->outward_normal(x) * c;
}

double AmbientExtension::curvature(Vec2 x) const {
    double c = cutoff(x);
    if (c == 0.0) return 0.0;
    return dom_->wall_curvature_nearest(x) * c;
}

}  // namespace fbflow
