#ifndef FBFLOW_TESTS_ORACLES_HPP
#define FBFLOW_TESTS_ORACLES_HPP

// Independent reference solvers used to freeze expected values in the tests.
// These share no code with the production discretizations.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Two-point problem (u'/W)' + kappa/W = sigma u on [-L/2, L/2], u(+-L/2)=0,
// W = sqrt(eps^2 + u'^2), solved by symmetric shooting from x = 0 with RK4
// and bisection on u(0).
struct Shooting1D {
    double eps, sigma, kappa, L;
    int n_steps = 20000;
    std::vector<double> xs, us;

    void solve() {
        auto integrate = [&](double g, std::vector<double>* store) {
            double x = 0, u = g, p = 0;  // p = u'
            double hstep = (L / 2) / n_steps;
            if (store) {
                store->clear();
                store->push_back(u);
            }
            auto rhs = [&](double uu, double pp) {
                double W = std::sqrt(eps * eps + pp * pp);
                // u'' = (sigma u - kappa/W) W^3 / eps^2
                return (sigma * uu - kappa / W) * W * W * W / (eps * eps);
            };
            for (int k = 0; k < n_steps; ++k) {
                double k1u = p, k1p = rhs(u, p);
                double k2u = p + 0.5 * hstep * k1p,
                       k2p = rhs(u + 0.5 * hstep * k1u, p + 0.5 * hstep * k1p);
                double k3u = p + 0.5 * hstep * k2p,
                       k3p = rhs(u + 0.5 * hstep * k2u, p + 0.5 * hstep * k2p);
                double k4u = p + hstep * k3p,
                       k4p = rhs(u + hstep * k3u, p + hstep * k3p);
                u += hstep / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
                p += hstep / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
                x += hstep;
                if (store) store->push_back(u);
            }
            return u;
        };
        double lo = 0.0, hi = kappa / (sigma * eps);
        if (integrate(lo, nullptr) > 0 || integrate(hi, nullptr) < 0)
            throw std::runtime_error("shooting bracket failed");
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (integrate(mid, nullptr) <= 0 ? lo : hi) = mid;
        }
        integrate(0.5 * (lo + hi), &us);
        xs.resize(us.size());
        for (size_t k = 0; k < us.size(); ++k)
            xs[k] = k * (L / 2) / n_steps;
    }

    double at(double x) const {
        double ax = std::abs(x);
        double f = ax / (L / 2) * (us.size() - 1);
        size_t k = std::min((size_t)f, us.size() - 2);
        double a = f - k;
        return (1 - a) * us[k] + a * us[k + 1];
    }
};

// Radial problem (1/r)(r u'/W)' + kappa/W = sigma u on [r1, r2] with
// u(r1) = u(r2) = 0; vertex-centered FD with damped Newton on a tridiagonal
// system (solved by the Thomas algorithm).
struct Radial {
    double eps, sigma, kappa, r1, r2;
    int n = 4000;
    std::vector<double> rs, us;

    void solve() {
        double h = (r2 - r1) / n;
        rs.resize(n + 1);
        for (int k = 0; k <= n; ++k) rs[k] = r1 + k * h;
        us.assign(n + 1, 0.0);

        auto residual = [&](const std::vector<double>& u,
                            std::vector<double>& F) {
            for (int k = 1; k < n; ++k) {
                double dE = (u[k + 1] - u[k]) / h;
                double dW = (u[k] - u[k - 1]) / h;
                double WE = std::sqrt(eps * eps + dE * dE);
                double WW = std::sqrt(eps * eps + dW * dW);
                double rE = rs[k] + 0.5 * h, rW = rs[k] - 0.5 * h;
                double div = (rE * dE / WE - rW * dW / WW) / (rs[k] * h);
                double dc = (u[k + 1] - u[k - 1]) / (2 * h);
                double Wc = std::sqrt(eps * eps + dc * dc);
                F[k] = div + kappa / Wc - sigma * u[k];
            }
        };
        std::vector<double> F(n + 1, 0), lo(n + 1), di(n + 1), up(n + 1);
        for (int newton = 0; newton < 60; ++newton) {
            residual(us, F);
            double worst = 0;
            for (int k = 1; k < n; ++k) worst = std::max(worst, std::abs(F[k]));
            if (worst < 1e-12) break;
            // finite-difference tridiagonal Jacobian, column by column
            const double dpert = 1e-7;
            std::vector<double> Fp(n + 1);
            std::vector<double> u2(us);
            for (int k = 1; k < n; ++k) {
                lo[k] = di[k] = up[k] = 0;
            }
            for (int k = 1; k < n; ++k) {
                u2[k] += dpert;
                residual(u2, Fp);
                if (k > 1) up[k - 1] = (Fp[k - 1] - F[k - 1]) / dpert;
                di[k] = (Fp[k] - F[k]) / dpert;
                if (k < n - 1) lo[k + 1] = (Fp[k + 1] - F[k + 1]) / dpert;
                u2[k] = us[k];
            }
            // Thomas solve J d = -F
            std::vector<double> c(n + 1, 0), dvec(n + 1, 0);
            c[1] = up[1] / di[1];
            dvec[1] = -F[1] / di[1];
            for (int k = 2; k < n; ++k) {
                double m = di[k] - lo[k] * c[k - 1];
                c[k] = up[k] / m;
                dvec[k] = (-F[k] - lo[k] * dvec[k - 1]) / m;
            }
            std::vector<double> delta(n + 1, 0);
            delta[n - 1] = dvec[n - 1];
            for (int k = n - 2; k >= 1; --k)
                delta[k] = dvec[k] - c[k] * delta[k + 1];
            for (int k = 1; k < n; ++k) us[k] += delta[k];
        }
    }

    double at(double r) const {
        double f = (r - r1) / (r2 - r1) * n;
        int k = std::min(std::max((int)f, 0), n - 1);
        double a = f - k;
        return (1 - a) * us[k] + a * us[k + 1];
    }
};

}  // namespace oracles

#endif
