#include "fbflow/elliptic.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>

namespace fbflow {

namespace {

// ---------------------------------------------------------------------------
// Forward-mode dual with a sparse gradient (index-sorted term list). The
// Newton matrix is assembled exactly from these, so the linearization agrees
// with finite differences of the residual to second order.

using Terms = std::vector<std::pair<int, double>>;

struct Dual {
    double v = 0;
    Terms g;
};

Terms merge(const Terms& a, double ca, const Terms& b, double cb) {
    Terms out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.emplace_back(a[i].first, ca * a[i].second);
            ++i;
        } else if (i >= a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, cb * b[j].second);
            ++j;
        } else {
            double w = ca * a[i].second + cb * b[j].second;
            if (w != 0.0) out.emplace_back(a[i].first, w);
            ++i;
            ++j;
        }
    }
    return out;
}

Dual operator+(const Dual& a, const Dual& b) {
    return {a.v + b.v, merge(a.g, 1.0, b.g, 1.0)};
}
Dual operator-(const Dual& a, const Dual& b) {
    return {a.v - b.v, merge(a.g, 1.0, b.g, -1.0)};
}
Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, merge(a.g, b.v, b.g, a.v)};
}
Dual operator/(const Dual& a, const Dual& b) {
    double inv = 1.0 / b.v;
    return {a.v * inv, merge(a.g, inv, b.g, -a.v * inv * inv)};
}
Dual operator*(double s, const Dual& a) {
    Dual r{s * a.v, a.g};
    for (auto& t : r.g) t.second *= s;
    return r;
}
Dual operator+(const Dual& a, double s) { return {a.v + s, a.g}; }
Dual operator/(double s, const Dual& b) {
    double inv = 1.0 / b.v;
    Dual out{s * inv, b.g};
    double w = -s * inv * inv;
    for (auto& t : out.g) t.second *= w;
    return out;
}
Dual sqrt(const Dual& a) {
    double r = std::sqrt(a.v);
    Dual out{r, a.g};
    double w = 0.5 / r;
    for (auto& t : out.g) t.second *= w;
    return out;
}

inline double sqrt_s(double x) { return std::sqrt(x); }
inline Dual sqrt_s(const Dual& x) { return sqrt(x); }

// ---------------------------------------------------------------------------
// Solve context: cell classification and ghost-value expressions. Every cell
// in the padded box resolves to a linear expression over the unknowns;
// Dirichlet ghosts extrapolate u ~ region level through the boundary, wall
// ghosts mirror through the barrier.

struct Ctx {
    const BarrierDomain* dom;
    Grid2 grid;
    TranslatorParams p;
    InitialRegion bent;
    std::vector<double> dist, rlevel;
    std::vector<int> cell_of;
    std::vector<int> cells;
    std::vector<Terms> expr;
    std::vector<double> ext;  // resolved cell values for the current iterate

    int nx() const { return grid.nx; }
    bool solve_cell(int c) const { return cell_of[c] >= 0; }
};

Ctx build_ctx(const InitialRegion& region, const BarrierDomain& dom,
              const Grid2& grid, const TranslatorParams& p) {
    if (p.tau > 0 && grid.h > p.tau / 8 + 1e-12)
        throw ResolutionError("grid does not resolve the bending collar");
    Ctx ctx;
    ctx.dom = &dom;
    ctx.grid = grid;
    ctx.p = p;
    ctx.bent = p.tau > 0 ? bend_corners(region, dom, p.tau) : region;

    int n = grid.size();
    ctx.dist.resize(n);
    ctx.rlevel.resize(n);
    ctx.cell_of.assign(n, -1);
    ctx.expr.assign(n, {});
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            int c = grid.idx(i, j);
            Vec2 pnt = grid.center(i, j);
            ctx.dist[c] = dom.signed_distance(pnt);
            ctx.rlevel[c] = ctx.bent.level(pnt, dom);
            if (ctx.dist[c] >= 0 && ctx.rlevel[c] >= 0) {
                ctx.cell_of[c] = (int)ctx.cells.size();
                ctx.cells.push_back(c);
            }
        }
    if (ctx.cells.empty()) throw TooThinError("empty solve region");

    auto in = [&](int i, int j) { return grid.in_bounds(i, j); };
    // unknowns
    for (int c : ctx.cells) ctx.expr[c] = {{ctx.cell_of[c], 1.0}};

    // Dirichlet ghosts: boundary value 0, extrapolated along the level fn
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            int c = grid.idx(i, j);
            if (ctx.solve_cell(c) || ctx.dist[c] < 0) continue;
            int best = -1;
            double best_lvl = 0;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int ii = i + di[k], jj = j + dj[k];
                if (!in(ii, jj)) continue;
                int q = grid.idx(ii, jj);
                if (ctx.solve_cell(q) && ctx.rlevel[q] > best_lvl) {
                    best_lvl = ctx.rlevel[q];
                    best = q;
                }
            }
            if (best < 0) continue;
            double ratio;
            if (best_lvl < 0.1 * grid.h) {
                ratio = -1.0;
            } else {
                ratio = std::clamp(ctx.rlevel[c] / best_lvl, -4.0, 0.0);
            }
            ctx.expr[c] = {{ctx.cell_of[best], ratio}};
        }

    // wall ghosts: mirror through the barrier
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            int c = grid.idx(i, j);
            if (ctx.dist[c] >= 0 || ctx.dist[c] <= -3 * grid.h) continue;
            Vec2 pnt = grid.center(i, j);
            Vec2 m;
            try {
                m = dom.reflect(pnt);
            } catch (const MedialAxisError&) {
                continue;
            }
            double fx = (m.x - grid.origin.x) / grid.h - 0.5;
            double fy = (m.y - grid.origin.y) / grid.h - 0.5;
            int i0 = std::clamp((int)std::floor(fx), 0, grid.nx - 2);
            int j0 = std::clamp((int)std::floor(fy), 0, grid.ny - 2);
            double ax = std::clamp(fx - i0, 0.0, 1.0);
            double ay = std::clamp(fy - j0, 0.0, 1.0);
            int src[4] = {grid.idx(i0, j0), grid.idx(i0 + 1, j0),
                          grid.idx(i0, j0 + 1), grid.idx(i0 + 1, j0 + 1)};
            double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay,
                           ax * ay};
            Terms t;
            double kept = 0;
            for (int k = 0; k < 4; ++k) {
                if (ctx.dist[src[k]] < 0) continue;  // nested wall ghost: drop
                kept += w[k];
                for (const auto& term : ctx.expr[src[k]])
                    t.emplace_back(term.first, w[k] * term.second);
            }
            if (kept < 0.25) continue;
            std::sort(t.begin(), t.end());
            Terms packed;
            for (const auto& term : t) {
                if (!packed.empty() && packed.back().first == term.first)
                    packed.back().second += term.second;
                else
                    packed.push_back(term);
            }
            for (auto& term : packed) term.second /= kept;
            ctx.expr[c] = std::move(packed);
        }
    ctx.ext.assign(n, 0.0);
    return ctx;
}

void resolve_ext(Ctx& ctx, const std::vector<double>& u) {
    for (int c = 0; c < (int)ctx.ext.size(); ++c) {
        double v = 0;
        for (const auto& t : ctx.expr[c]) v += t.second * u[t.first];
        ctx.ext[c] = v;
    }
}

// Residual of the continuation problem at a solve cell. The flux form keeps
// the divergence term conservative; W at faces carries the full gradient.
template <class S, class Get>
S residual_at(const Ctx& ctx, int c, double kappa, Get&& val) {
    const Grid2& g = ctx.grid;
    const double h = g.h;
    const double e2 = ctx.p.eps * ctx.p.eps;
    int i = c % g.nx, j = c / g.nx;

    auto cellv = [&](int ii, int jj) -> S {
        ii = std::clamp(ii, 0, g.nx - 1);
        jj = std::clamp(jj, 0, g.ny - 1);
        return val(g.idx(ii, jj));
    };
    S uP = cellv(i, j);
    S uE = cellv(i + 1, j), uW = cellv(i - 1, j);
    S uN = cellv(i, j + 1), uS = cellv(i, j - 1);
    S uNE = cellv(i + 1, j + 1), uNW = cellv(i - 1, j + 1);
    S uSE = cellv(i + 1, j - 1), uSW = cellv(i - 1, j - 1);

    auto flux = [&](const S& ua, const S& ub, const S& t1, const S& t2,
                    const S& t3, const S& t4) -> S {
        // face between a (inner) and b (outer): normal derivative + the
        // averaged tangential derivative from the four flanking cells
        S dn = (1.0 / h) * (ub - ua);
        S dt = (1.0 / (4 * h)) * (t1 + t2 - t3 - t4);
        S W = sqrt_s(dn * dn + dt * dt + e2);
        return dn / W;
    };
    S fE = flux(uP, uE, uN, uNE, uS, uSE);
    S fW = flux(uW, uP, uNW, uN, uSW, uS);
    S fN = flux(uP, uN, uE, uNE, uW, uNW);
    S fS = flux(uS, uP, uSE, uE, uSW, uW);

    S div = (1.0 / h) * (fE - fW) + (1.0 / h) * (fN - fS);
    if (g.mode == Mode::axisym) {
        double r = g.rcoord(i);
        double rE = r + 0.5 * h, rW = std::max(r - 0.5 * h, 0.0);
        div = (1.0 / (r * h)) * (rE * fE - rW * fW) + (1.0 / h) * (fN - fS);
    }
    S ux = (1.0 / (2 * h)) * (uE - uW);
    S uy = (1.0 / (2 * h)) * (uN - uS);
    S Wc = sqrt_s(ux * ux + uy * uy + e2);
    return div + kappa / Wc - ctx.p.sigma * uP;
}

struct NewtonResult {
    bool ok = false;
    int iters = 0;
    double res_inf = kInf;
};

NewtonResult newton_solve(Ctx& ctx, std::vector<double>& u, double kappa) {
    const int n = (int)ctx.cells.size();
    Eigen::SparseMatrix<double> J(n, n);
    Eigen::VectorXd F(n), delta(n);
    std::vector<Eigen::Triplet<double>> trips;
    NewtonResult out;

    auto eval_residual = [&](const std::vector<double>& uu, Eigen::VectorXd& FF) {
        resolve_ext(ctx, uu);
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            double r = residual_at<double>(
                ctx, ctx.cells[k], kappa,
                [&](int cc) { return ctx.ext[cc]; });
            FF[k] = r;
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    };

    double res = eval_residual(u, F);
    double res0 = std::max(res, 1e-30);
    const double tol = std::max(ctx.p.newton_tol,
                                ctx.p.newton_tol * res0);
    for (int it = 0; it < ctx.p.max_newton; ++it) {
        if (res <= tol) {
            out.ok = true;
            out.iters = it;
            out.res_inf = res;
            return out;
        }
        trips.clear();
        resolve_ext(ctx, u);
        for (int k = 0; k < n; ++k) {
            Dual r = residual_at<Dual>(
                ctx, ctx.cells[k], kappa, [&](int cc) {
                    return Dual{ctx.ext[cc], ctx.expr[cc]};
                });
            F[k] = r.v;
            for (const auto& t : r.g) trips.emplace_back(k, t.first, t.second);
        }
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) return out;
        delta = lu.solve(-F);
        if (lu.info() != Eigen::Success) return out;

        double alpha = 1.0;
        std::vector<double> trial(u.size());
        bool accepted = false;
        Eigen::VectorXd Ft(n);
        while (alpha >= 1.0 / 64) {
            for (int k = 0; k < n; ++k) trial[k] = u[k] + alpha * delta[k];
            double rt = eval_residual(trial, Ft);
            if (rt <= (1.0 - 0.25 * alpha) * res || rt <= tol) {
                u = trial;
                res = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return out;
    }
    out.ok = res <= tol;
    out.res_inf = res;
    out.iters = ctx.p.max_newton;
    return out;
}

void derived_fields(const Ctx& ctx, const std::vector<double>& u,
                    TranslatorSolution& sol) {
    const Grid2& g = ctx.grid;
    const double h = g.h, e2 = ctx.p.eps * ctx.p.eps;
    Ctx& mctx = const_cast<Ctx&>(ctx);
    resolve_ext(mctx, u);

    sol.u = GridField(g, 0.0);
    sol.u_ext = GridField(g, 0.0);
    sol.v_field = GridField(g, kNaN);
    sol.h_field = GridField(g, kNaN);
    sol.region_level = GridField(g, 0.0);
    sol.near_dirichlet.assign(g.size(), 0);
    sol.near_wall.assign(g.size(), 0);
    for (int c = 0; c < g.size(); ++c) {
        sol.region_level[c] = ctx.rlevel[c];
        sol.u_ext[c] = ctx.ext[c];
    }
    for (int c : ctx.cells) sol.u[c] = u[ctx.cell_of[c]];

    auto ev = [&](int i, int j) {
        i = std::clamp(i, 0, g.nx - 1);
        j = std::clamp(j, 0, g.ny - 1);
        return ctx.ext[g.idx(i, j)];
    };
    for (int c : ctx.cells) {
        int i = c % g.nx, j = c / g.nx;
        double ux = (ev(i + 1, j) - ev(i - 1, j)) / (2 * h);
        double uy = (ev(i, j + 1) - ev(i, j - 1)) / (2 * h);
        double uxx = (ev(i + 1, j) - 2 * ev(i, j) + ev(i - 1, j)) / (h * h);
        double uyy = (ev(i, j + 1) - 2 * ev(i, j) + ev(i, j - 1)) / (h * h);
        double uxy = (ev(i + 1, j + 1) - ev(i - 1, j + 1) - ev(i + 1, j - 1) +
                      ev(i - 1, j - 1)) /
                     (4 * h * h);
        double W2 = e2 + ux * ux + uy * uy;
        double W = std::sqrt(W2);
        sol.v_field[c] = 1.0 / W;
        double Hval = -(uxx * (e2 + uy * uy) - 2 * uxy * ux * uy +
                        uyy * (e2 + ux * ux)) /
                      (W2 * W);
        if (g.mode == Mode::axisym) {
            double r = std::max(g.rcoord(i), 0.5 * h);
            Hval -= ux / (r * W);
        }
        sol.h_field[c] = Hval;

        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ii = i + di[k], jj = j + dj[k];
            if (!g.in_bounds(ii, jj)) continue;
            int q = g.idx(ii, jj);
            if (ctx.dist[q] < 0) sol.near_wall[c] = 1;
            else if (!ctx.solve_cell(q)) sol.near_dirichlet[c] = 1;
        }
    }
    sol.min_v_dirichlet = kInf;
    sol.max_d = 0;
    for (int c : ctx.cells) {
        sol.max_d = std::max(sol.max_d, ctx.dist[c]);
        if (sol.near_dirichlet[c])
            sol.min_v_dirichlet = std::min(sol.min_v_dirichlet, sol.v_field[c]);
    }
}

}  // namespace

// ---------------------------------------------------------------------------

TranslatorSolution solve_continuation(const InitialRegion& region,
                                      const BarrierDomain& dom,
                                      const Grid2& grid, TranslatorParams p) {
    if (p.eps <= 0 || p.sigma <= 0)
        throw ValidationError("translator needs eps > 0 and sigma > 0");
    Ctx ctx = build_ctx(region, dom, grid, p);
    std::vector<double> u(ctx.cells.size(), 0.0);

    TranslatorSolution sol;
    sol.grid = grid;
    sol.params = p;
    sol.cells = ctx.cells;
    sol.cell_of = ctx.cell_of;
    sol.trace.push_back({0.0, 0, 0.0, 0.0, 0.0, true});

    double kappa = 0.0;
    std::vector<double> targets;
    for (int k = 1; k <= p.kappa_steps; ++k)
        targets.push_back(p.kappa_target * k / p.kappa_steps);
    size_t next = 0;
    while (next < targets.size()) {
        double kt = targets[next];
        std::vector<double> attempt = u;
        NewtonResult nr = newton_solve(ctx, attempt, kt);
        if (!nr.ok) {
            double mid = 0.5 * (kappa + kt);
            if (kt - kappa < p.kappa_floor)
                throw ContinuationStallError(
                    "Newton failed below the kappa step floor");
            targets.insert(targets.begin() + next, mid);
            continue;
        }
        u = attempt;
        kappa = kt;
        double mx = *std::max_element(u.begin(), u.end());
        double mn = *std::min_element(u.begin(), u.end());
        double bound = p.sup_bound(kappa);
        bool ok = mx <= bound * (1 + 1e-9) + 1e-12 && mn >= -1e-9;
        sol.trace.push_back({kappa, nr.iters, nr.res_inf, mx, bound, ok});
        sol.residual_norm = nr.res_inf;
        ++next;
    }
    sol.kappa = kappa;
    derived_fields(ctx, u, sol);
    return sol;
}

std::pair<TranslatorSolution, double> solve_translator(
    const InitialRegion& region, const BarrierDomain& dom, const Grid2& grid,
    TranslatorParams p) {
    if (p.tau <= 0) throw ValidationError("solve_translator needs tau > 0");
    if (grid.h > p.tau / 16 + 1e-12)
        throw ResolutionError("grid does not resolve tau/2 bending");
    TranslatorParams p_half = p;
    p_half.tau = 0.5 * p.tau;
    TranslatorSolution full = solve_continuation(region, dom, grid, p);
    TranslatorSolution half = solve_continuation(region, dom, grid, p_half);
    double diff = 0;
    for (int c : half.cells)
        if (full.cell_of[c] >= 0)
            diff = std::max(diff, std::abs(full.u[c] - half.u[c]));
    return {std::move(half), diff};
}

double jacobian_fd_mismatch(const InitialRegion& region,
                            const BarrierDomain& dom, const Grid2& grid,
                            TranslatorParams p, double t_pert, int n_dirs,
                            unsigned seed) {
    Ctx ctx = build_ctx(region, dom, grid, p);
    int n = (int)ctx.cells.size();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> u(n);
    double scale = 0.2 * p.sup_bound(1.0);
    for (auto& v : u) v = scale * (0.5 + 0.5 * uni(rng));

    // exact Jacobian at u
    resolve_ext(ctx, u);
    std::vector<Terms> rows(n);
    for (int k = 0; k < n; ++k) {
        Dual r = residual_at<Dual>(ctx, ctx.cells[k], 1.0, [&](int cc) {
            return Dual{ctx.ext[cc], ctx.expr[cc]};
        });
        rows[k] = r.g;
    }
    auto eval = [&](const std::vector<double>& uu, std::vector<double>& F) {
        resolve_ext(ctx, uu);
        for (int k = 0; k < n; ++k)
            F[k] = residual_at<double>(ctx, ctx.cells[k], 1.0,
                                       [&](int cc) { return ctx.ext[cc]; });
    };
    double worst = 0;
    std::vector<double> v(n), up(n), um(n), Fp(n), Fm(n);
    for (int d = 0; d < n_dirs; ++d) {
        double vmax = 0;
        for (int k = 0; k < n; ++k) {
            v[k] = uni(rng);
            vmax = std::max(vmax, std::abs(v[k]));
        }
        for (int k = 0; k < n; ++k) {
            up[k] = u[k] + t_pert * v[k];
            um[k] = u[k] - t_pert * v[k];
        }
        eval(up, Fp);
        eval(um, Fm);
        for (int k = 0; k < n; ++k) {
            double jv = 0;
            for (const auto& t : rows[k]) jv += t.second * v[t.first];
            double fd = (Fp[k] - Fm[k]) / (2 * t_pert);
            worst = std::max(worst, std::abs(jv - fd) / vmax);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------

VBoundReport check_V_lower_bound(const TranslatorSolution& sol,
                                 const BarrierDomain& dom) {
    VBoundReport rep;
    const TranslatorParams& p = sol.params;
    double b = p.resolved_b(dom);
    double m = p.resolved_m(dom);
    double a = p.resolved_a(dom);
    double front = std::exp(-b * sol.max_d);
    double base1 = std::min(1.0 / (2 * p.eps), sol.min_v_dirichlet);
    double base2 = std::min(0.5, sol.min_v_dirichlet);
    for (int c : sol.cells) {
        double V = sol.v_field[c];
        rep.min_v = std::min(rep.min_v, V);
        double z = sol.z_of(c);
        double rhs1 = front * base1 * std::exp(-m * z);
        double rhs2 = front * base2 * std::exp(-a * sol.u[c]);
        rep.slack_form1 = std::min(rep.slack_form1, V - rhs1);
        rep.slack_form2 = std::min(rep.slack_form2, V - rhs2);
    }
    rep.pass = rep.slack_form1 > 0 && rep.slack_form2 > 0;
    return rep;
}

HLowerReport check_H_lower(const TranslatorSolution& sol,
                           const BarrierDomain& dom) {
    HLowerReport rep;
    double a = sol.params.resolved_a(dom);
    double cfit = kInf;
    for (int c : sol.cells) {
        double lhs = sol.h_field[c] + sol.params.sigma * sol.u[c];
        cfit = std::min(cfit, lhs * std::exp(a * sol.u[c]));
    }
    rep.fitted_c = cfit;
    rep.margin = sol.grid.h;
    rep.pass = cfit > rep.margin;
    return rep;
}

NearBoundarySupReport check_near_boundary_sup(
    const std::vector<TranslatorSolution>& sweep, const FlowTrajectory& traj,
    const BarrierDomain& dom, double delta) {
    NearBoundarySupReport rep;
    for (const auto& sol : sweep) {
        double sup = 0;
        for (int c : sol.cells) {
            Vec2 p = sol.grid.center(c);
            // arrival looked up at the nearest trajectory cell
            const Grid2& tg = traj.grid;
            int ti = std::clamp(
                (int)std::floor((p.x - tg.origin.x) / tg.h), 0, tg.nx - 1);
            int tj = std::clamp(
                (int)std::floor((p.y - tg.origin.y) / tg.h), 0, tg.ny - 1);
            double arr = traj.arrival(ti, tj);
            if (std::isnan(arr)) continue;   // never inside K
            if (arr >= delta) continue;      // still inside K_delta
            sup = std::max(sup, sol.u[c]);
        }
        rep.sup_per_solution.push_back(sup);
    }
    double lo = kInf, hi = 0;
    for (double s : rep.sup_per_solution) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    rep.spread = lo > 0 ? hi / lo : (hi == 0 ? 1.0 : kInf);
    rep.pass = rep.spread <= 2.0;
    return rep;
}

double sigma_monotonicity_violation(const TranslatorSolution& lo_sigma,
                                    const TranslatorSolution& hi_sigma) {
    double worst = 0;
    for (int c : lo_sigma.cells)
        if (hi_sigma.cell_of[c] >= 0)
            worst = std::max(worst, hi_sigma.u[c] - lo_sigma.u[c]);
    return worst;
}

// ---------------------------------------------------------------------------

OneSidedReport one_sided_min_check(const FlowTrajectory& traj,
                                   const BarrierDomain& dom, double t,
                                   const std::vector<Competitor>& competitors,
                                   double slack_factor) {
    OneSidedReport rep;
    const Grid2& g = traj.grid;
    const double h = g.h;
    const GridField& phi_t = traj.nearest_snapshot(t).phi;
    const GridField& phi_0 = traj.snapshots.front().phi;

    auto perim = [&](const GridField& f) {
        return contour_measure(extract_interface(f, dom, 0.0), g.mode);
    };
    rep.perimeter_kt = perim(phi_t);
    rep.worst_margin = kInf;
    for (const auto& comp : competitors) {
        for (int c = 0; c < g.size(); ++c) {
            if (dom.signed_distance(g.center(c)) < 0.5 * h) continue;
            if (phi_t[c] >= 0 && comp.level[c] < -0.5 * h)
                throw InvalidCompetitorError(comp.name +
                                             ": does not contain K_t");
            if (comp.level[c] >= 0 && phi_0[c] < -0.5 * h)
                throw InvalidCompetitorError(comp.name +
                                             ": not contained in K");
        }
        double pf = perim(comp.level);
        rep.competitor_perimeters.emplace_back(comp.name, pf);
        rep.worst_margin = std::min(rep.worst_margin, pf - rep.perimeter_kt);
    }
    rep.pass = rep.worst_margin >= -slack_factor * h;
    return rep;
}

std::vector<Competitor> make_bump_competitors(const FlowTrajectory& traj,
                                              const BarrierDomain& dom,
                                              const InitialRegion& region,
                                              double t, int count,
                                              unsigned seed) {
    const Grid2& g = traj.grid;
    const double h = g.h;
    const GridField& phi_t = traj.nearest_snapshot(t).phi;
    const GridField& phi_0 = traj.snapshots.front().phi;
    auto segs = extract_interface(phi_t, dom, 0.0);
    auto samples = interface_samples(segs, g.mode);
    std::vector<Competitor> out;
    if (samples.empty()) return out;

    std::mt19937 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, samples.size() - 1);
    std::uniform_real_distribution<double> rad(3 * h, 8 * h);
    for (int k = 0; k < count; ++k) {
        Vec2 c = samples[pick(rng)].p;
        double rho = rad(rng);
        Competitor comp;
        comp.name = "bump_" + std::to_string(k);
        comp.level = GridField(g, 0.0);
        for (int lin = 0; lin < g.size(); ++lin) {
            Vec2 p = g.center(lin);
            double bump = rho - (p - c).norm();
            comp.level[lin] = std::min(std::max(phi_t[lin], bump), phi_0[lin]);
        }
        out.push_back(std::move(comp));
    }
    (void)region;
    return out;
}

}  // namespace fbflow
