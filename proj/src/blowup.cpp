#include "fbflow/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "fbflow/interface.hpp"

namespace fbflow {

namespace {

// I0(x) e^{-x}, Abramowitz-Stegun 9.8.1/9.8.2
double i0_scaled(double x) {
    double ax = std::abs(x);
    if (ax < 3.75) {
        double t = x / 3.75, t2 = t * t;
        double i0 = 1.0 + t2 * (3.5156229 +
                    t2 * (3.0899424 +
                    t2 * (1.2067492 +
                    t2 * (0.2659732 +
                    t2 * (0.0360768 + t2 * 0.0045813)))));
        return i0 * std::exp(-ax);
    }
    double t = 3.75 / ax;
    double p = 0.39894228 +
               t * (0.01328592 +
               t * (0.00225319 +
               t * (-0.00157565 +
               t * (0.00916281 +
               t * (-0.02057706 +
               t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
    return p / std::sqrt(ax);
}

double gauss_weight_planar(Vec2 m, Vec2 c, double r) {
    return std::exp(-(m - c).norm2() / (4 * r * r)) /
           std::sqrt(4 * M_PI * r * r);
}

// revolved ring through (r_m, z_m) against a center at (r_c, z_c)
double gauss_weight_ring(Vec2 m, Vec2 c, double r) {
    double rm = std::max(m.x, 0.0), rc = std::max(c.x, 0.0);
    double xi = rm * rc / (2 * r * r);
    double quad = (rm - rc) * (rm - rc) + (m.y - c.y) * (m.y - c.y);
    double w = 2 * M_PI * rm * i0_scaled(xi) * std::exp(-quad / (4 * r * r));
    return w / (4 * M_PI * r * r);
}

double density_of_samples(const std::vector<Segment>& segs, Mode mode, Vec2 c,
                          double r) {
    double total = 0;
    for (const auto& s : segs) {
        Vec2 m = s.mid();
        double len = s.length();
        if (mode == Mode::planar)
            total += len * gauss_weight_planar(m, c, r);
        else
            total += len * gauss_weight_ring(m, c, r);
    }
    return total;
}

}  // namespace

RescaledFrame rescale(const FlowTrajectory& traj, const BarrierDomain& dom,
                      Vec2 x_star, double t_star, double lambda,
                      std::vector<double> s_list) {
    const double h = traj.grid.h;
    if (lambda * h > 0.25 + 1e-12)
        throw ResolutionError("rescaling factor exceeds grid resolution");
    if (s_list.empty())
        s_list = {-1.0, -0.7, -0.5, -0.35, -0.25, -0.15, -0.08};

    RescaledFrame frame;
    frame.center = x_star;
    frame.t_center = t_star;
    frame.lambda = lambda;
    frame.mode = traj.grid.mode;
    double d_star = dom.signed_distance(x_star);
    frame.boundary = lambda * d_star <= 2.0;
    if (frame.boundary) {
        frame.barrier_normal = dom.outward_normal(x_star);
        frame.barrier_offset = lambda * d_star;
    }
    if (frame.mode == Mode::axisym) frame.axis_r = -lambda * x_star.x;

    const double win = 1.25 / lambda;
    for (double s : s_list) {
        double t = t_star + s / (lambda * lambda);
        if (t < 0) continue;
        auto segs = traj.interface_at(dom, t, x_star, win);
        RescaledFrame::Snap snap;
        snap.s = s;
        for (const auto& seg : segs)
            snap.pts.push_back((seg.mid() - x_star) * lambda);
        if (snap.pts.size() >= 2) frame.snaps.push_back(std::move(snap));
    }
    double t_after = t_star + 0.25 / (lambda * lambda);
    auto after = traj.interface_at(dom, t_after, x_star, win);
    frame.vanishes_after = after.empty();
    return frame;
}

double gaussian_density(const FlowTrajectory& traj, const BarrierDomain& dom,
                        Vec2 x_star, double t_star, double r) {
    double t = t_star - r * r;
    if (t < -1e-12) throw WindowError("t* - r^2 precedes the recorded window");
    auto segs = traj.interface_at(dom, t, x_star, 6 * r);
    double theta = density_of_samples(segs, traj.grid.mode, x_star, r);

    double d = dom.signed_distance(x_star);
    double blend = std::clamp((2 * r - d) / r, 0.0, 1.0);
    if (blend > 0) {
        std::vector<Segment> mirrored;
        for (const auto& s : segs) {
            try {
                mirrored.push_back({dom.reflect(s.a), dom.reflect(s.b)});
            } catch (const MedialAxisError&) {
            }
        }
        theta += blend * density_of_samples(mirrored, traj.grid.mode, x_star, r);
    }
    return theta;
}

DensityLadder density_monotonicity_check(const FlowTrajectory& traj,
                                         const BarrierDomain& dom, Vec2 x_star,
                                         double t_star,
                                         const std::vector<double>& r_ladder,
                                         double tol_interior, double drift_c) {
    DensityLadder out;
    std::vector<double> rs = r_ladder;
    std::sort(rs.begin(), rs.end());
    double d = dom.signed_distance(x_star);
    for (double r : rs) {
        out.r.push_back(r);
        double th = gaussian_density(traj, dom, x_star, t_star, r);
        out.theta.push_back(th);
        out.entropy = std::max(out.entropy, th);
    }
    out.pass = true;
    for (size_t k = 0; k + 1 < out.r.size(); ++k) {
        // Huisken: theta nondecreasing in r (up to tolerance / wall drift)
        double tol = tol_interior;
        if (d < 2 * out.r[k + 1]) tol += drift_c * out.r[k + 1];
        double violation = out.theta[k] - out.theta[k + 1] - tol;
        out.max_violation = std::max(out.max_violation, violation);
        if (violation > 0) out.pass = false;
    }
    return out;
}

ThicknessResult thickness(const std::vector<Vec2>& S, Vec2 x, double r,
                          int n_dir) {
    ThicknessResult out;
    std::vector<Vec2> local;
    for (const auto& y : S)
        if ((y - x).norm() <= r) local.push_back(y - x);
    if (local.empty()) {
        out.empty = true;
        out.value = 0;
        return out;
    }
    auto width = [&](double ang) {
        Vec2 v{std::cos(ang), std::sin(ang)};
        double w = 0;
        for (const auto& y : local) w = std::max(w, std::abs(v.dot(y)));
        return w / r;
    };
    double best = kInf, best_ang = 0;
    for (int k = 0; k < n_dir; ++k) {
        double ang = M_PI * k / n_dir;
        double w = width(ang);
        if (w < best) {
            best = w;
            best_ang = ang;
        }
    }
    double lo = best_ang - M_PI / n_dir, hi = best_ang + M_PI / n_dir;
    for (int it = 0; it < 40; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (width(m1) < width(m2))
            hi = m2;
        else
            lo = m1;
    }
    out.value = std::min(best, width(0.5 * (lo + hi)));
    return out;
}

ExpandingHoleReport expanding_hole_experiment(
    const BarrierDomain& dom, const Grid2& grid, double w, double rho0,
    Vec2 hole_center, const std::vector<double>& rungs) {
    ExpandingHoleReport rep;
    rep.w = w;
    rep.rho0 = rho0;
    InitialRegion slab(RegionSlab{{0, 1}, hole_center.y, w},
                       /*mean_convex=*/false, RegionHole{hole_center, rho0});
    RunConfig cfg;
    cfg.mean_convex = false;
    std::vector<double> rs = rungs;
    std::sort(rs.begin(), rs.end());
    for (double r : rs) cfg.snapshot_times.push_back(r * r);
    cfg.horizon = rs.back() * rs.back() * 1.02;
    cfg.stop_on_extinction = false;
    FlowTrajectory traj = run_flow(slab, dom, grid, cfg);

    rep.achieved_A = kInf;
    for (double r : rs) {
        const SnapshotRec& snap = traj.nearest_snapshot(r * r);
        auto segs = extract_interface(snap.phi, dom, 0.0);
        auto samples = interface_samples(segs, grid.mode);
        double dist = distance_to_samples(hole_center, samples);
        rep.r.push_back(r);
        rep.dist_over_r.push_back(dist / r);
        rep.achieved_A = std::min(rep.achieved_A, dist / r);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Tangent classification

namespace {

struct ModelFit {
    TangentModel::Kind kind;
    double residual;
    Vec2 center;
    Vec2 dir;
};

// mean symmetric distance between frame points and a model point set
double snap_residual(const std::vector<Vec2>& pts,
                     const std::vector<Vec2>& model) {
    if (pts.empty() || model.empty()) return kInf;
    return chamfer_distance(pts, model);
}

std::vector<Vec2> circle_points(Vec2 c, double rho, bool clip_barrier,
                                Vec2 N, double off) {
    std::vector<Vec2> out;
    for (int k = 0; k < 96; ++k) {
        double a = 2 * M_PI * k / 96;
        Vec2 p = c + Vec2{rho * std::cos(a), rho * std::sin(a)};
        if (p.norm() > 1.4) continue;  // stay near the unit window
        if (clip_barrier && N.dot(p) > off) continue;
        out.push_back(p);
    }
    return out;
}

std::vector<Vec2> line_points(Vec2 anchor, Vec2 dir, bool clip_barrier, Vec2 N,
                              double off) {
    std::vector<Vec2> out;
    for (int k = -48; k <= 48; ++k) {
        Vec2 p = anchor + dir * (1.4 * k / 48.0);
        if (p.norm() > 1.4) continue;
        if (clip_barrier && N.dot(p) > off) continue;
        out.push_back(p);
    }
    return out;
}

// least-squares circle center with per-snapshot prescribed radii
Vec2 fit_center(const std::vector<RescaledFrame::Snap>& snaps,
                const std::vector<double>& radii, Vec2 c0, bool on_line,
                Vec2 N, double off) {
    Vec2 c = c0;
    for (int it = 0; it < 25; ++it) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (size_t k = 0; k < snaps.size(); ++k) {
            for (const auto& y : snaps[k].pts) {
                Vec2 d = y - c;
                double n = d.norm();
                if (n < 1e-9) continue;
                Vec2 u = d / n;
                double r = n - radii[k];
                a11 += u.x * u.x;
                a12 += u.x * u.y;
                a22 += u.y * u.y;
                b1 += u.x * r;
                b2 += u.y * r;
            }
        }
        double det = a11 * a22 - a12 * a12;
        if (std::abs(det) < 1e-12) break;
        Vec2 step{(a22 * b1 - a12 * b2) / det, (-a12 * b1 + a11 * b2) / det};
        c += step;
        if (on_line) c = c - N * (N.dot(c) - off);  // keep center on the wall
        if (step.norm() < 1e-10) break;
    }
    return c;
}

Vec2 pca_direction(const std::vector<RescaledFrame::Snap>& snaps) {
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& s : snaps)
        for (const auto& y : s.pts) {
            sxx += y.x * y.x;
            sxy += y.x * y.y;
            syy += y.y * y.y;
        }
    double tr = sxx + syy, det = sxx * syy - sxy * sxy;
    double lam = 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    Vec2 v{sxy, lam - sxx};
    if (v.norm() < 1e-12) v = {1, 0};
    return v.normalized();
}

}  // namespace

std::string tangent_kind_name(TangentModel::Kind k) {
    switch (k) {
        case TangentModel::static_plane: return "static-plane";
        case TangentModel::static_halfplane: return "static-halfplane";
        case TangentModel::shrinking_sphere: return "shrinking-sphere";
        case TangentModel::shrinking_halfsphere: return "shrinking-halfsphere";
        case TangentModel::shrinking_cylinder: return "shrinking-cylinder";
        case TangentModel::shrinking_cylinder_axis_in_barrier:
            return "shrinking-cylinder-axis-in-barrier";
        case TangentModel::shrinking_cylinder_axis_perp_barrier:
            return "shrinking-cylinder-axis-perp-barrier";
        case TangentModel::shrinking_halfcylinder:
            return "shrinking-halfcylinder";
        case TangentModel::quasistatic_plane: return "quasistatic-plane";
        default: return "unclassified";
    }
}

TangentModel classify_tangent(const RescaledFrame& frame,
                              double residual_threshold) {
    TangentModel best;
    if (frame.snaps.size() < 3) return best;
    const bool bd = frame.boundary;
    const Vec2 N = bd ? frame.barrier_normal : Vec2{0, 1};
    const double off = bd ? frame.barrier_offset : 0.0;
    const bool axisym = frame.mode == Mode::axisym;
    const bool on_axis = axisym && std::abs(frame.axis_r) <= 2.0;

    auto pooled_residual = [&](auto&& model_at) {
        double sum = 0;
        int n = 0;
        for (const auto& snap : frame.snaps) {
            std::vector<Vec2> model = model_at(snap.s);
            double r = snap_residual(snap.pts, model);
            if (!std::isfinite(r)) return kInf;
            sum += r;
            ++n;
        }
        return n ? sum / n : kInf;
    };
    auto consider = [&](TangentModel::Kind k, double res, Vec2 c, Vec2 dir) {
        if (res < best.residual) {
            best.kind = k;
            best.residual = res;
            best.pose_center = c;
            best.pose_dir = dir;
        }
    };

    // static plane through the origin (interior frames)
    if (!bd) {
        Vec2 dir = pca_direction(frame.snaps);
        double res = pooled_residual([&](double) {
            return line_points({0, 0}, dir, false, N, off);
        });
        consider(TangentModel::static_plane, res, {0, 0}, dir);
    } else {
        // halfplane into the domain, orthogonal to the wall
        Vec2 dir = -N;
        double res = pooled_residual([&](double) {
            return line_points({0, 0}, dir, true, N, off);
        });
        consider(TangentModel::static_halfplane, res, {0, 0}, dir);
        if (frame.vanishes_after) {
            Vec2 t = N.perp();
            double res_q = pooled_residual([&](double) {
                return line_points(N * off, t, false, N, kInf);
            });
            consider(TangentModel::quasistatic_plane, res_q, N * off, t);
        }
    }

    // shrinkers: prescribed radius laws
    auto radius_law = [&](double c) {
        std::vector<double> radii;
        for (const auto& s : frame.snaps) radii.push_back(std::sqrt(c * -s.s));
        return radii;
    };
    Vec2 c0{0, 0};
    {
        double wsum = 0;
        Vec2 acc{0, 0};
        for (const auto& s : frame.snaps)
            for (const auto& y : s.pts) {
                acc += y;
                wsum += 1;
            }
        if (wsum > 0) c0 = acc / wsum;
    }

    if (!axisym) {
        std::vector<double> radii = radius_law(2.0);  // circle: r = sqrt(2|s|)
        if (!bd) {
            Vec2 c = fit_center(frame.snaps, radii, c0, false, N, off);
            double res = pooled_residual([&](double s) {
                return circle_points(c, std::sqrt(2 * -s), false, N, off);
            });
            consider(TangentModel::shrinking_sphere, res, c, {0, 0});
        } else {
            Vec2 c = fit_center(frame.snaps, radii, N * off, true, N, off);
            double res = pooled_residual([&](double s) {
                return circle_points(c, std::sqrt(2 * -s), true, N, off);
            });
            consider(TangentModel::shrinking_halfsphere, res, c, {0, 0});
        }
    } else {
        if (on_axis) {
            // sphere about the axis: r = sqrt(4|s|) = 2 sqrt(|s|)
            std::vector<double> radii = radius_law(4.0);
            Vec2 axis_anchor{frame.axis_r, c0.y};
            Vec2 c = fit_center(frame.snaps, radii, axis_anchor, true,
                                Vec2{1, 0}, frame.axis_r);
            double res = pooled_residual([&](double s) {
                return circle_points(c, 2 * std::sqrt(-s), bd, N, off);
            });
            consider(bd ? TangentModel::shrinking_halfsphere
                        : TangentModel::shrinking_sphere,
                     res, c, {0, 0});
        } else {
            // tube cross-section: r = sqrt(2|s|)
            std::vector<double> radii = radius_law(2.0);
            if (!bd) {
                Vec2 c = fit_center(frame.snaps, radii, c0, false, N, off);
                double res = pooled_residual([&](double s) {
                    return circle_points(c, std::sqrt(2 * -s), false, N, off);
                });
                consider(TangentModel::shrinking_cylinder, res, c, {0, 0});
            } else {
                Vec2 c = fit_center(frame.snaps, radii, N * off, true, N, off);
                double res = pooled_residual([&](double s) {
                    return circle_points(c, std::sqrt(2 * -s), true, N, off);
                });
                consider(TangentModel::shrinking_halfcylinder, res, c,
                         N.perp());
            }
        }
    }

    if (best.residual > residual_threshold) {
        best.kind = TangentModel::unclassified;
        return best;
    }
    best.multiplicity = best.kind == TangentModel::quasistatic_plane ? 2 : 1;
    switch (best.kind) {
        case TangentModel::static_plane:
        case TangentModel::static_halfplane:
            best.theoretical_density = 1.0;
            break;
        case TangentModel::shrinking_sphere:
        case TangentModel::shrinking_halfsphere:
            best.theoretical_density = axisym ? 4.0 / M_E
                                              : std::sqrt(2 * M_PI / M_E);
            break;
        case TangentModel::shrinking_cylinder:
        case TangentModel::shrinking_cylinder_axis_in_barrier:
        case TangentModel::shrinking_cylinder_axis_perp_barrier:
        case TangentModel::shrinking_halfcylinder:
            best.theoretical_density = std::sqrt(2 * M_PI / M_E);
            break;
        case TangentModel::quasistatic_plane:
            best.theoretical_density = 2.0;
            break;
        default:
            break;
    }
    return best;
}

}  // namespace fbflow
