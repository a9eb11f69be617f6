#pragma once

// Independent numerical oracles for the tests. Nothing here calls into the
// closed forms it is used to check.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "divctl/params.hpp"

namespace oracle {

// Adaptive Gauss-Kronrod (7/15) quadrature with absolute tolerance tol.
inline double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
    static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                 0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                 0.207784955007898468, 0.0};
    static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                 0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                 0.204432940075298892, 0.209482141084727828};
    static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                 0.417959183673469388};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = wk[7] * fc, g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double s = f(c - h * xk[i]) + f(c + h * xk[i]);
        k += wk[i] * s;
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    err = std::abs((k - g) * h);
    return k * h;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                        int depth = 0) {
    double err = 0.0;
    const double v = gk15(f, a, b, err);
    if (err <= tol || depth > 40) return v;
    const double m = 0.5 * (a + b);
    return integrate(f, a, m, 0.5 * tol, depth + 1) + integrate(f, m, b, 0.5 * tol, depth + 1);
}

// Plain bisection for an increasing-or-decreasing sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::runtime_error("oracle::bisect: no sign change");
    for (int i = 0; i < 400 && hi - lo > tol * (1.0 + std::abs(lo)); ++i) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

inline double central_first(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_second(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Main-regime constants written out from the model primitives, without the
// library's helpers. Used to cross-check derive_constants.
struct Constants {
    double N1, N2, N3, N4, gamma1, w1, w2;
};

inline Constants main_constants(const divctl::ModelParams& p) {
    // Unconstrained reinsurance optimum: retained risk vector r solves
    // Sigma r = L mu, so r_i = L / W_i with W_i = 1 / (Sigma^{-1} mu)_i.
    const double s1 = p.sigma1, s2 = p.sigma2, r = p.rho;
    const double det = s1 * s1 * s2 * s2 * (1.0 - r * r);
    const double inv1 = (s2 * s2 * p.mu1 - r * s1 * s2 * p.mu2) / det;
    const double inv2 = (s1 * s1 * p.mu2 - r * s1 * s2 * p.mu1) / det;
    // Squared Sharpe norm mu' Sigma^{-1} mu drives the power branch.
    const double q = p.mu1 * inv1 + p.mu2 * inv2;
    Constants c{};
    // Along the unconstrained optimum the generator of K x^g reduces to
    //   -beta + g*q/(1-g) - 0.5*g*q/(1-g) = 0  ->  g = 2 beta / (q + 2 beta).
    c.gamma1 = 2.0 * p.beta / (q + 2.0 * p.beta);
    c.w1 = (1.0 - c.gamma1) / inv1;
    c.w2 = (1.0 - c.gamma1) / inv2;
    c.N1 = c.N2 = c.N3 = c.N4 = NAN;  // filled by tests that know the reference values
    return c;
}

}  // namespace oracle
