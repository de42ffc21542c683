#include "fbflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace fbflow {

namespace {

// bilinear sample skipping NaN holes (renormalized); NaN when nothing valid
double masked_sample(const GridField& f, Vec2 p) {
    const Grid2& g = f.grid;
    double fx = (p.x - g.origin.x) / g.h - 0.5;
    double fy = (p.y - g.origin.y) / g.h - 0.5;
    int i0 = std::clamp((int)std::floor(fx), 0, g.nx - 2);
    int j0 = std::clamp((int)std::floor(fy), 0, g.ny - 2);
    double ax = std::clamp(fx - i0, 0.0, 1.0);
    double ay = std::clamp(fy - j0, 0.0, 1.0);
    double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
    double v[4] = {f(i0, j0), f(i0 + 1, j0), f(i0, j0 + 1), f(i0 + 1, j0 + 1)};
    double num = 0, den = 0;
    for (int k = 0; k < 4; ++k) {
        if (std::isnan(v[k])) continue;
        num += w[k] * v[k];
        den += w[k];
    }
    return den > 1e-12 ? num / den : kNaN;
}

struct CurvFields {
    GridField H, A, L1, Hx, Hy;
    int degenerate = 0;
};

CurvFields curvature_fields(const GridField& phi, double delta_reg) {
    const Grid2& g = phi.grid;
    const double h = g.h, d2 = delta_reg * delta_reg;
    CurvFields out{GridField(g, kNaN), GridField(g, kNaN), GridField(g, kNaN),
                   GridField(g, kNaN), GridField(g, kNaN)};
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            double P = phi(i, j);
            if (std::abs(P) > 3 * h) continue;
            double E = phi(i + 1, j), W = phi(i - 1, j);
            double N = phi(i, j + 1), S = phi(i, j - 1);
            double dx = (E - W) / (2 * h), dy = (N - S) / (2 * h);
            double g2 = dx * dx + dy * dy;
            if (g2 < 0.25) {
                ++out.degenerate;
                continue;
            }
            double dxx = (E - 2 * P + W) / (h * h);
            double dyy = (N - 2 * P + S) / (h * h);
            double dxy = (phi(i + 1, j + 1) - phi(i - 1, j + 1) -
                          phi(i + 1, j - 1) + phi(i - 1, j - 1)) /
                         (4 * h * h);
            double w2 = d2 + g2;
            double prof = -(dxx * (d2 + dy * dy) - 2 * dxy * dx * dy +
                            dyy * (d2 + dx * dx)) /
                          (w2 * std::sqrt(w2));
            if (g.mode == Mode::planar) {
                out.H(i, j) = prof;
                out.A(i, j) = std::abs(prof);
                out.L1(i, j) = prof;
            } else {
                double r = std::max(g.rcoord(i), 0.5 * h);
                double rot = -dx / (r * std::sqrt(w2));
                out.H(i, j) = prof + rot;
                out.A(i, j) = std::hypot(prof, rot);
                out.L1(i, j) = std::min(prof, rot);
            }
        }
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            double e = out.H(i + 1, j), w = out.H(i - 1, j);
            double n = out.H(i, j + 1), s = out.H(i, j - 1);
            if (std::isnan(e) || std::isnan(w) || std::isnan(n) ||
                std::isnan(s))
                continue;
            out.Hx(i, j) = (e - w) / (2 * h);
            out.Hy(i, j) = (n - s) / (2 * h);
        }
    return out;
}

}  // namespace

CurvatureReport curvature_quantities(const GridField& phi,
                                     const BarrierDomain& dom,
                                     double delta_reg, double band_h) {
    (void)band_h;
    CurvatureReport rep;
    const Grid2& g = phi.grid;
    CurvFields cf = curvature_fields(phi, delta_reg);
    rep.degenerate_cells = cf.degenerate;
    auto segs = extract_interface(phi, dom, 0.0);
    for (const auto& s : segs) {
        Vec2 p = s.mid();
        double H = masked_sample(cf.H, p);
        double A = masked_sample(cf.A, p);
        double L1 = masked_sample(cf.L1, p);
        if (std::isnan(H) || std::isnan(A)) continue;
        // outward normal from the phi gradient
        double gx = (phi.sample({p.x + g.h, p.y}) -
                     phi.sample({p.x - g.h, p.y})) /
                    (2 * g.h);
        double gy = (phi.sample({p.x, p.y + g.h}) -
                     phi.sample({p.x, p.y - g.h})) /
                    (2 * g.h);
        Vec2 grad{gx, gy};
        Vec2 nu = (-grad).normalized();
        double gradh_tan = kNaN;
        double hx = masked_sample(cf.Hx, p), hy = masked_sample(cf.Hy, p);
        if (!std::isnan(hx) && !std::isnan(hy)) {
            Vec2 tang = nu.perp();
            gradh_tan = std::abs(hx * tang.x + hy * tang.y);
        }
        rep.points.push_back({p, nu, H, A, L1, gradh_tan});
        rep.min_h = std::min(rep.min_h, H);
        rep.max_h = std::max(rep.max_h, H);
        if (H > 1e-9) {
            rep.max_ah = std::max(rep.max_ah, A / H);
            rep.min_l1_over_h = std::min(rep.min_l1_over_h, L1 / H);
        }
    }
    if (rep.points.empty()) {
        rep.min_h = rep.max_h = 0;
        rep.min_l1_over_h = 0;
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// B(c, rho) INTERSECT D inside K (side=+1) or inside D \ Int K (side=-1),
// tested on cell centers with an O(h) tolerance
bool ball_fits(const GridField& phi, const BarrierDomain& dom, Vec2 c,
               double rho, int side) {
    const Grid2& g = phi.grid;
    const double h = g.h;
    int i0 = std::max(0, (int)std::floor((c.x - rho - g.origin.x) / h));
    int i1 = std::min(g.nx - 1, (int)std::ceil((c.x + rho - g.origin.x) / h));
    int j0 = std::max(0, (int)std::floor((c.y - rho - g.origin.y) / h));
    int j1 = std::min(g.ny - 1, (int)std::ceil((c.y + rho - g.origin.y) / h));
    double rho2 = rho * rho;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            Vec2 p = g.center(i, j);
            if ((p - c).norm2() > rho2) continue;
            if (dom.signed_distance(p) < 0.5 * h) continue;
            double v = phi(i, j);
            if (side > 0 ? v < -0.8 * h : v > 0.8 * h) return false;
        }
    return true;
}

double largest_ball(const GridField& phi, const BarrierDomain& dom, Vec2 p,
                    Vec2 nu, int side, double hi_cap) {
    const double h = phi.grid.h;
    double lo = h, hi = hi_cap;
    Vec2 dir = side > 0 ? -nu : nu;  // inward for interior balls
    if (!ball_fits(phi, dom, p + dir * lo, lo, side)) return 0.0;
    if (ball_fits(phi, dom, p + dir * hi, hi, side)) return hi;
    for (int it = 0; it < 22; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ball_fits(phi, dom, p + dir * mid, mid, side))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

NoncollapseReport noncollapsing(const GridField& phi, const BarrierDomain& dom,
                                double H0, double delta_reg, int max_points) {
    NoncollapseReport rep;
    CurvatureReport curv = curvature_quantities(phi, dom, delta_reg, 0);
    std::vector<const CurvaturePoint*> picks;
    for (const auto& pt : curv.points)
        if (pt.H >= H0) picks.push_back(&pt);
    size_t stride = std::max<size_t>(1, picks.size() / max_points);
    Vec2 lo, hi;
    dom.bounding_box(lo, hi);
    double diam = std::isfinite(lo.x) ? (hi - lo).norm() : 16.0;
    for (size_t k = 0; k < picks.size(); k += stride) {
        const CurvaturePoint& pt = *picks[k];
        double cap = std::min(diam, 4.0 / pt.H);
        double rin = largest_ball(phi, dom, pt.p, pt.nu, +1, cap);
        double rout = largest_ball(phi, dom, pt.p, pt.nu, -1, cap);
        rep.points.push_back({pt.p, pt.H, rin, rout});
        rep.min_rin_h = std::min(rep.min_rin_h, rin * pt.H);
        rep.min_rout_h = std::min(rep.min_rout_h, rout * pt.H);
        ++rep.sampled;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Graph tensors for translator solutions

namespace {

struct GraphPoint {
    double g11, g12, g22, det;   // induced metric
    double ii11, ii12, ii22;     // second fundamental form (paper signs)
    double nu3[3];               // upward unit normal
    double e1[3], e2[3];         // coordinate tangent frame
    bool valid = false;
};

GraphPoint graph_point(const TranslatorSolution& sol, int c) {
    GraphPoint gp;
    const Grid2& g = sol.grid;
    const double h = g.h, eps = sol.params.eps;
    int i = c % g.nx, j = c / g.nx;
    if (i < 1 || i + 1 >= g.nx || j < 1 || j + 1 >= g.ny) return gp;
    const GridField& u = sol.u_ext;
    double ux = (u(i + 1, j) - u(i - 1, j)) / (2 * h);
    double uy = (u(i, j + 1) - u(i, j - 1)) / (2 * h);
    double uxx = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (h * h);
    double uyy = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (h * h);
    double uxy = (u(i + 1, j + 1) - u(i - 1, j + 1) - u(i + 1, j - 1) +
                  u(i - 1, j - 1)) /
                 (4 * h * h);
    double fx = ux / eps, fy = uy / eps;
    double q = 1 + fx * fx + fy * fy;
    double sq = std::sqrt(q);
    gp.g11 = 1 + fx * fx;
    gp.g12 = fx * fy;
    gp.g22 = 1 + fy * fy;
    gp.det = q;
    gp.ii11 = -(uxx / eps) / sq;
    gp.ii12 = -(uxy / eps) / sq;
    gp.ii22 = -(uyy / eps) / sq;
    gp.nu3[0] = -fx / sq;
    gp.nu3[1] = -fy / sq;
    gp.nu3[2] = 1 / sq;
    gp.e1[0] = 1; gp.e1[1] = 0; gp.e1[2] = fx;
    gp.e2[0] = 0; gp.e2[1] = 1; gp.e2[2] = fy;
    gp.valid = true;
    return gp;
}

double tensor_norm2(const GraphPoint& gp, double b11, double b12, double b22) {
    // |B|^2 = tr((G^-1 B)^2)
    double inv = 1.0 / gp.det;
    double i11 = gp.g22 * inv, i12 = -gp.g12 * inv, i22 = gp.g11 * inv;
    double m11 = i11 * b11 + i12 * b12;
    double m12 = i11 * b12 + i12 * b22;
    double m21 = i12 * b11 + i22 * b12;
    double m22 = i12 * b12 + i22 * b22;
    return m11 * m11 + 2 * m12 * m21 + m22 * m22;
}

double dot3(const double* a, const double* b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void cross3(const double* a, const double* b, double* out) {
    out[0] = a[1] * b[2] - a[2] * b[1];
    out[1] = a[2] * b[0] - a[0] * b[2];
    out[2] = a[0] * b[1] - a[1] * b[0];
}

// components y^a of the tangential projection of a 3-vector
void tangent_coords(const GraphPoint& gp, const double* y, double* out) {
    double p1 = dot3(y, gp.e1), p2 = dot3(y, gp.e2);
    double inv = 1.0 / gp.det;
    out[0] = (gp.g22 * p1 - gp.g12 * p2) * inv;
    out[1] = (-gp.g12 * p1 + gp.g11 * p2) * inv;
}

}  // namespace

PerturbedSFF perturbed_sff(const TranslatorSolution& sol,
                           const BarrierDomain& dom,
                           const AmbientExtension& ext) {
    PerturbedSFF out;
    const Grid2& g = sol.grid;
    out.b_norm = GridField(g, kNaN);
    out.a_norm = GridField(g, kNaN);
    for (int c : sol.cells) {
        GraphPoint gp = graph_point(sol, c);
        if (!gp.valid) continue;
        Vec2 p = g.center(c);
        Vec2 Ne = ext.normal(p);          // cutoff-scaled extension
        double kext = ext.curvature(p);   // cutoff-scaled wall curvature
        double N3[3] = {Ne.x, Ne.y, 0.0};
        Vec2 tau2 = Ne.norm() > 1e-12 ? Ne.perp().normalized() : Vec2{0, 0};
        double tau3[3] = {tau2.x, tau2.y, 0.0};

        // T_ab = k(E_a, nu)<E_b, N> + k(E_b, nu)<E_a, N>,
        // with k(X, Z) = kext <X, tau><Z, tau>
        double knu = kext * dot3(gp.nu3, tau3);
        double ke1 = knu * dot3(gp.e1, tau3);
        double ke2 = knu * dot3(gp.e2, tau3);
        double n1 = dot3(gp.e1, N3), n2 = dot3(gp.e2, N3);
        double t11 = 2 * ke1 * n1;
        double t12 = ke1 * n2 + ke2 * n1;
        double t22 = 2 * ke2 * n2;

        double b11 = gp.ii11 + t11, b12 = gp.ii12 + t12, b22 = gp.ii22 + t22;
        out.b_norm[c] = std::sqrt(std::max(tensor_norm2(gp, b11, b12, b22), 0.0));
        out.a_norm[c] =
            std::sqrt(std::max(tensor_norm2(gp, gp.ii11, gp.ii12, gp.ii22), 0.0));

        if (sol.near_wall[c]) {
            ++out.junction_points;
            // unit wall normal projected to the tangent plane
            Vec2 Nu = dom.outward_normal(p);
            double Nhat[3] = {Nu.x, Nu.y, 0.0};
            double nt[3];
            double nd = dot3(Nhat, gp.nu3);
            for (int k = 0; k < 3; ++k) nt[k] = Nhat[k] - nd * gp.nu3[k];
            double ntn = std::sqrt(dot3(nt, nt));
            if (ntn < 1e-9) continue;
            for (int k = 0; k < 3; ++k) nt[k] /= ntn;
            double X[3];
            cross3(gp.nu3, nt, X);
            double xa[2], na[2];
            tangent_coords(gp, X, xa);
            tangent_coords(gp, nt, na);
            auto apply = [&](double m11, double m12, double m22) {
                return xa[0] * (m11 * na[0] + m12 * na[1]) +
                       xa[1] * (m12 * na[0] + m22 * na[1]);
            };
            double bdev = std::abs(apply(b11, b12, b22));
            double adev = std::abs(apply(gp.ii11, gp.ii12, gp.ii22));
            out.max_b_dev_junction = std::max(out.max_b_dev_junction, bdev);
            out.max_a_dev_junction = std::max(out.max_a_dev_junction, adev);
        }
    }
    return out;
}

MonitorReport monitor_f(const TranslatorSolution& sol, const BarrierDomain& dom,
                        const AmbientExtension& ext,
                        const TranslatorParams& p) {
    MonitorReport rep;
    const Grid2& g = sol.grid;
    rep.f = GridField(g, kNaN);
    PerturbedSFF ps = perturbed_sff(sol, dom, ext);
    double a = p.resolved_a(dom);
    double b = p.resolved_b(dom);
    int argmax = -1;
    for (int c : sol.cells) {
        double B = ps.b_norm[c];
        if (std::isnan(B)) continue;
        double d = dom.signed_distance(g.center(c));
        double w = std::exp(a * sol.u[c] - b * d);
        double f = (B + p.monitor_lambda * p.sigma * sol.u[c] +
                    p.monitor_theta) /
                   (sol.v_field[c] * w);
        rep.f[c] = f;
        if (f > rep.f_max) {
            rep.f_max = f;
            argmax = c;
        }
    }
    if (argmax >= 0) {
        rep.argmax = g.center(argmax);
        if (sol.near_dirichlet[argmax])
            rep.argmax_location = MonitorReport::dirichlet;
        else if (sol.near_wall[argmax])
            rep.argmax_location = MonitorReport::neumann;
        else
            rep.argmax_location = MonitorReport::interior;
    }
    rep.pass = rep.argmax_location != MonitorReport::neumann;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool masked_by_event(const FlowTrajectory& traj, Vec2 p, double t) {
    const double h = traj.grid.h;
    for (const auto& ev : traj.events)
        if ((p - ev.pos).norm() < 5 * h && t >= ev.t - 10 * h * h) return true;
    return false;
}

}  // namespace

RatioAHSeries ratio_AH_series(const FlowTrajectory& traj,
                              const BarrierDomain& dom, double t_min,
                              double delta_reg) {
    if (traj.grid.mode != Mode::axisym)
        throw std::invalid_argument(
            "ratio_AH_series requires axisym mode (planar |A|/H is "
            "identically 1)");
    RatioAHSeries out;
    for (const auto& snap : traj.snapshots) {
        if (snap.t < t_min) continue;
        CurvatureReport rep =
            curvature_quantities(snap.phi, dom, delta_reg, traj.band_h);
        if (rep.points.empty() || rep.max_ah <= 0) continue;
        double ratio = 0;
        for (const auto& pt : rep.points) {
            if (pt.H <= 1e-9 || masked_by_event(traj, pt.p, snap.t)) continue;
            ratio = std::max(ratio, pt.A_norm / pt.H);
        }
        if (ratio <= 0) continue;
        out.t.push_back(snap.t);
        out.ratio.push_back(ratio);
    }
    if (out.t.size() < 2) return out;
    // log-linear least squares
    double n = (double)out.t.size(), st = 0, sy = 0, stt = 0, sty = 0;
    for (size_t k = 0; k < out.t.size(); ++k) {
        double y = std::log(out.ratio[k]);
        st += out.t[k];
        sy += y;
        stt += out.t[k] * out.t[k];
        sty += out.t[k] * y;
    }
    double denom = n * stt - st * st;
    out.fit_rho = denom > 1e-14 ? (n * sty - st * sy) / denom : 0.0;
    out.fit_c = std::exp((sy - out.fit_rho * st) / n);
    out.pass = true;
    for (size_t k = 0; k < out.t.size(); ++k)
        if (out.ratio[k] >
            1.2 * out.fit_c * std::exp(out.fit_rho * out.t[k]))
            out.pass = false;
    return out;
}

ConvexityReport convexity_estimate(const FlowTrajectory& traj,
                                   const BarrierDomain& dom, double eps_cvx,
                                   double H0, double delta_reg) {
    if (traj.grid.mode != Mode::axisym)
        throw std::invalid_argument("convexity_estimate requires axisym mode");
    ConvexityReport rep;
    double frontier = 0;
    for (const auto& snap : traj.snapshots) {
        CurvatureReport cr =
            curvature_quantities(snap.phi, dom, delta_reg, traj.band_h);
        for (const auto& pt : cr.points) {
            if (pt.H < H0 || masked_by_event(traj, pt.p, snap.t)) continue;
            frontier = std::max(frontier, -pt.lambda1 / pt.H);
        }
    }
    rep.frontier = frontier;
    rep.worst = std::max(0.0, frontier - eps_cvx);
    rep.pass = rep.worst <= 0;
    return rep;
}

GradientEstimateReport gradient_estimate(const FlowTrajectory& traj,
                                         const BarrierDomain& dom,
                                         double C_grad, double H0,
                                         double delta_reg) {
    GradientEstimateReport rep;
    double fit = 0;
    for (const auto& snap : traj.snapshots) {
        CurvatureReport cr =
            curvature_quantities(snap.phi, dom, delta_reg, traj.band_h);
        for (const auto& pt : cr.points) {
            if (pt.H < H0 || std::isnan(pt.gradH_tan)) continue;
            if (masked_by_event(traj, pt.p, snap.t)) continue;
            fit = std::max(fit, pt.gradH_tan / (pt.H * pt.H));
        }
    }
    rep.fitted_c = fit;
    rep.pass = fit <= C_grad;
    return rep;
}

}  // namespace fbflow
