#pragma once

#include <utility>

#include "divctl/params.hpp"

namespace divctl {

enum class Scenario { T1_W0First, T2_W0Middle, T3_NoW0 };

const char* to_string(Scenario s);

// Capital-injection thresholds (delta0, delta1, delta2).
struct Deltas {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// Everything needed to evaluate the value function and the controls.
//
// Scenario formulas live in the normalized orientation: `effective` holds the
// parameters the closed forms were evaluated with, `params` the caller's
// originals. Fields that do not apply to the scenario are left at zero.
struct SolvedPolicy {
    Scenario scenario = Scenario::T1_W0First;

    double w0 = 0.0;  // +inf in T3
    double u1 = 0.0;
    double u2 = 0.0;

    double alpha0 = 0.0;
    double alphaLB = 0.0;
    double alphaUB = 0.0;

    // T1: branch on [w0, u1) is -lambda*(g2m*e^{g2p t} + g2p*e^{g2m t})
    double alpha2_plus = 0.0;
    double alpha2_minus = 0.0;
    double alpha3 = 0.0;
    double lambda = 0.0;

    // T1 and T2: branch on [max(w0,u1), u2) is
    //   alpha3_plus*e^{g3p (x-u1)} + alpha3_minus*e^{g3m (x-u1)} + (1-a)*cbar2/beta
    // alpha3_plus can sit far below the double range (tiny beta with a large
    // cbar2 puts u2 - u1 in the tens), so the branch is evaluated through
    // log_alpha3_plus; alpha3_plus is exp of it and may underflow to 0.
    double alpha3_plus = 0.0;
    double log_alpha3_plus = 0.0;
    double alpha3_minus = 0.0;

    // T2 and T3: chi(z) = k1*e^{(N2/N1) z} + chi_slope*z + k2
    double k1 = 0.0;
    double k2 = 0.0;
    double chi_slope = 0.0;  // cbar2*(N2-N1)/(N2*beta)
    double z_low = 0.0;      // chi^{-1}(u1) = -ln(1-a)
    double z_high = 0.0;     // chi^{-1} at the top of the integral branch
    double K1 = 0.0;         // power branch is K1*x^{gamma1} (filled in every scenario)
    double K2 = 0.0;         // g(u1) in T2/T3
    double gamma3 = 0.0;     // T3 tail exponent

    Deltas deltas;
    DerivedConstants constants;
    ModelParams params;
    ModelParams effective;
    Orientation orientation;
    CorrelationRegime regime;  // as seen by the caller
};

double zeta(double z, const DerivedConstants& c, double a);
double psi(double z, const DerivedConstants& c, double a);
double psi_prime(double z, const DerivedConstants& c, double a);

// psi written in terms of ell = ln(1 - a - gamma3- * z). Near the lower end
// of the domain the root can have 1 - a - gamma3- * z below 1e-300, which
// only this parametrization resolves.
double psi_log(double ell, const DerivedConstants& c, double a);

struct Alpha3Root {
    double alpha3_minus = 0.0;
    double log_b = 0.0;  // ln(1 - a - gamma3- * alpha3_minus) = ln(gamma3+ * alpha3_plus)
};

// Root of psi on (lo, hi), found by bisection in ell. lo may be the lower
// end of the domain, (1-a)/gamma3-, where psi tends to -a. An upper end that
// is itself a root (a = 1/2 at alpha_UB) is returned directly.
Alpha3Root solve_alpha3(double lo, double hi, const DerivedConstants& c, double a);
double solve_alpha3_minus(double lo, double hi, const DerivedConstants& c, double a);

double alpha0_of(const DerivedConstants& c, const ModelParams& eff);
double alphaUB_of(const DerivedConstants& c, const ModelParams& eff);

Scenario classify_scenario(const DerivedConstants& c, const ModelParams& eff);

// Scenario solvers take normalized parameters and fill scenario fields,
// switching points, deltas, constants and `effective`.
SolvedPolicy solve_T1(const ModelParams& eff, const DerivedConstants& c);
SolvedPolicy solve_T2(const ModelParams& eff, const DerivedConstants& c);
SolvedPolicy solve_T3(const ModelParams& eff, const DerivedConstants& c);

double chi(double z, const SolvedPolicy& p);
double chi_prime(double z, const SolvedPolicy& p);
// Upper end of the y-range on which chi_inverse is defined (w0 in T2, u2 in T3).
double chi_cap(const SolvedPolicy& p);
double chi_inverse(double y, const SolvedPolicy& p);

// Full pipeline: validate, normalize, classify, derive, solve.
SolvedPolicy solve(const ModelParams& params);

// Regime of the normalized parameters given the caller's regime. A caller
// FullReinsuranceLine1 becomes FullReinsuranceLine2 internally.
CorrelationRegime internal_regime(const ModelParams& eff, const CorrelationRegime& caller);

}  // namespace divctl
