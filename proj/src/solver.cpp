#include "divctl/solver.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "divctl/error.hpp"

namespace divctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Allows for round-off when checking w0 <= u1 <= u2 style orderings.
bool leq(double lo, double hi) { return lo <= hi + 1e-12 * (1.0 + std::abs(hi)); }

}  // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::T1_W0First: return "T1_W0First";
        case Scenario::T2_W0Middle: return "T2_W0Middle";
        case Scenario::T3_NoW0: return "T3_NoW0";
    }
    return "?";
}

double zeta(double z, const DerivedConstants& c, double a) {
    if (!(z < 0.0)) throw DomainError("zeta: argument must be negative, got " + num(z));
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus, g4m = c.gamma4_minus;
    const double arg = g3m * (g4m - g3m) * z / ((1.0 - a - g3m * z) * (g3p - g4m));
    if (!(arg > 0.0) || !std::isfinite(arg)) {
        throw DomainError("zeta: log argument is not positive at z = " + num(z));
    }
    return std::log(arg) / (g3p - g3m);
}

double psi(double z, const DerivedConstants& c, double a) {
    const double t = zeta(z, c, a);
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus;
    return (1.0 - a - g3m * z) * std::exp(g3p * t) + g3m * z * std::exp(g3m * t) - a;
}

double psi_prime(double z, const DerivedConstants& c, double a) {
    const double t = zeta(z, c, a);
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus;
    const double b = 1.0 - a - g3m * z;
    const double dt = (1.0 - a) / ((g3p - g3m) * z * b);
    const double ep = std::exp(g3p * t), em = std::exp(g3m * t);
    return -g3m * ep + b * g3p * dt * ep + g3m * em + g3m * z * g3m * dt * em;
}

double psi_log(double ell, const DerivedConstants& c, double a) {
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus, g4m = c.gamma4_minus;
    const double z = (1.0 - a - std::exp(ell)) / g3m;
    if (!(z < 0.0)) throw DomainError("psi_log: ell = " + num(ell) + " maps to a non-negative alpha");
    const double t = (std::log(g3m * (g4m - g3m) * z / (g3p - g4m)) - ell) / (g3p - g3m);
    return std::exp(ell + g3p * t) + g3m * z * std::exp(g3m * t) - a;
}

Alpha3Root solve_alpha3(double lo, double hi, const DerivedConstants& c, double a) {
    const double g3m = c.gamma3_minus;
    const double tol = 1e-12 * (1.0 + std::abs(a));
    auto log_b = [&](double z) { return std::log(1.0 - a - g3m * z); };
    // psi is finite at the upper end; a root sitting exactly there (a = 1/2)
    // is legitimate and must not be mistaken for a bad bracket.
    double f_end = std::numeric_limits<double>::quiet_NaN();
    try {
        f_end = psi(hi, c, a);
    } catch (const DomainError&) {
    }
    if (std::isfinite(f_end) && std::abs(f_end) <= tol) return {hi, log_b(hi)};

    double h = log_b(hi - 1e-12 * (1.0 + std::abs(hi)));
    const double fh = psi_log(h, c, a);
    double l = 0.0, fl = 0.0;
    if (lo > (1.0 - a) / g3m) {
        l = log_b(lo + 1e-12 * (1.0 + std::abs(lo)));
        fl = psi_log(l, c, a);
    } else {
        // Open lower end: walk ell down until psi turns negative.
        l = h;
        fl = fh;
        for (double step = 1.0; fl >= 0.0 && step < 1e7; step *= 2.0) {
            l = h - step;
            fl = psi_log(l, c, a);
        }
    }
    if (!(fl < 0.0 && fh > 0.0)) {
        throw BracketError("psi does not change sign on (" + num(lo) + ", " + num(hi) +
                           "): psi(lo+) = " + num(fl) + ", psi(hi-) = " + num(fh));
    }
    for (int it = 0; it < 300; ++it) {
        const double m = 0.5 * (l + h);
        if (m <= l || m >= h) break;
        const double fm = psi_log(m, c, a);
        if (fm == 0.0) {
            l = h = m;
            break;
        }
        (fm < 0.0 ? l : h) = m;
    }
    const double ell = std::abs(psi_log(l, c, a)) <= std::abs(psi_log(h, c, a)) ? l : h;
    return {(1.0 - a - std::exp(ell)) / g3m, ell};
}

double solve_alpha3_minus(double lo, double hi, const DerivedConstants& c, double a) {
    return solve_alpha3(lo, hi, c, a).alpha3_minus;
}

double alpha0_of(const DerivedConstants& c, const ModelParams& eff) {
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus;
    return (1.0 - eff.a) * g3p / (g3p - g3m) *
           (c.N3 / (2.0 * eff.beta) - 1.0 / g3p - eff.cbar2 / eff.beta);
}

double alphaUB_of(const DerivedConstants& c, const ModelParams& eff) {
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus, g4m = c.gamma4_minus;
    return (1.0 - eff.a) * (g3p - g4m) / (g3m * (g3p - g3m));
}

Scenario classify_scenario(const DerivedConstants& c, const ModelParams& eff) {
    if (eff.a <= 0.0 || eff.a >= 1.0) {
        throw Unsupported("a must lie strictly inside (0, 1); got " + num(eff.a));
    }
    if (eff.cbar1 + eff.cbar2 < c.threshold) return Scenario::T3_NoW0;
    // With cbar2 alone above the threshold, alpha0 lies below (1-a)/gamma3-
    // where psi is undefined; that whole region behaves as T1.
    if (eff.cbar2 >= c.threshold) return Scenario::T1_W0First;
    const double p0 = psi(alpha0_of(c, eff), c, eff.a);
    return p0 <= 0.0 ? Scenario::T1_W0First : Scenario::T2_W0Middle;
}

SolvedPolicy solve_T1(const ModelParams& eff, const DerivedConstants& c) {
    SolvedPolicy s;
    s.scenario = Scenario::T1_W0First;
    s.constants = c;
    s.effective = eff;
    const double a = eff.a;
    const double g2p = c.gamma2_plus, g2m = c.gamma2_minus;
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus, g4m = c.gamma4_minus;

    s.alpha0 = alpha0_of(c, eff);
    s.alphaUB = alphaUB_of(c, eff);
    s.alphaLB = eff.cbar2 >= c.threshold ? (1.0 - a) / g3m : s.alpha0;
    const Alpha3Root root = solve_alpha3(s.alphaLB, s.alphaUB, c, a);
    s.alpha3_minus = root.alpha3_minus;
    s.log_alpha3_plus = root.log_b - std::log(g3p);
    s.alpha3_plus = std::exp(s.log_alpha3_plus);
    s.alpha3 = 1.0 / g3p + eff.cbar2 / eff.beta + (1.0 - g3m / g3p) * s.alpha3_minus / (1.0 - a);

    s.w0 = c.w1;
    const double w0 = s.w0;
    const double pw = std::pow(w0, c.gamma1 - 1.0);
    s.alpha2_plus = pw * (c.gamma1 - g2m * w0) / (g2p - g2m);
    s.alpha2_minus = pw * (g2p * w0 - c.gamma1) / (g2p - g2m);

    const double arg1 = s.alpha2_minus * (g2m * s.alpha3 - 1.0) /
                        (s.alpha2_plus * (1.0 - g2p * s.alpha3));
    if (!(arg1 > 0.0)) throw InternalOrderingError("T1: u1 log argument not positive (" + num(arg1) + ")");
    s.u1 = w0 + std::log(arg1) / (g2p - g2m);

    const double arg2 = s.alpha3_minus * g3m * (g4m - g3m) / (g3p * (g3p - g4m));
    if (!(arg2 > 0.0)) throw InternalOrderingError("T1: u2 log argument not positive (" + num(arg2) + ")");
    s.u2 = s.u1 + (std::log(arg2) - s.log_alpha3_plus) / (g3p - g3m);

    const double t = s.u1 - w0;
    s.lambda = -(1.0 - a) / (g2p * g2m) / (std::exp(g2p * t) + std::exp(g2m * t));
    s.K1 = 2.0 * s.lambda * (1.0 - c.gamma1) / w0 * std::pow(w0, -c.gamma1);

    if (!leq(s.w0, s.u1) || !leq(s.u1, s.u2)) {
        throw InternalOrderingError("T1 ordering violated: w0 = " + num(s.w0) + ", u1 = " + num(s.u1) +
                                    ", u2 = " + num(s.u2));
    }
    s.deltas = {s.w0, s.u1, s.u2};
    return s;
}

// Scenario T2, built from the conditions at w0 and u2 directly.
//
// At w0 the zero-reinsurance condition fixes g''/g' = -(1-gamma1)/w1 and at
// u2 the slope a and curvature a*gamma4- are prescribed. Together they give
// the width u2 - w0 and the slope s = g'(w0) in closed form; chi then runs
// from chi^{-1}(u1) = -ln(1-a) to chi^{-1}(w0) = -ln s.
SolvedPolicy solve_T2(const ModelParams& eff, const DerivedConstants& c) {
    SolvedPolicy s;
    s.scenario = Scenario::T2_W0Middle;
    s.constants = c;
    s.effective = eff;
    const double a = eff.a, b = eff.beta;
    const double g3p = c.gamma3_plus, g3m = c.gamma3_minus, g4m = c.gamma4_minus;
    const double p = c.N2 / c.N1;
    const double q = (c.N2 - c.N1) / (c.N2 * b);
    const double cw = c.w1 / (1.0 - c.gamma1);  // chi'(chi^{-1}(w0))

    s.alpha0 = alpha0_of(c, eff);
    s.alphaUB = alphaUB_of(c, eff);
    s.alphaLB = (1.0 - a) / g3m;

    const double ip = 1.0 / cw + g3p;
    const double im = -(1.0 / cw + g3m);
    const double ratio = (g4m - g3m) / (g3p - g4m) * ip / im;
    if (!(ratio > 0.0) || !(im > 0.0)) {
        throw InternalOrderingError("T2: width log argument not positive (" + num(ratio) + ")");
    }
    const double width = std::log(ratio) / (g3p - g3m);  // u2 - w0
    const double slope = a * (g4m - g3m) * std::exp(-g3p * width) / im;  // g'(w0)
    const double z0 = -std::log(slope);

    const double lead = c.N1 * (c.N2 - c.N1) / (c.N2 * b) * (c.N3 / (2.0 * c.N1) - eff.cbar2 / c.N2);
    s.k1 = lead * std::pow(slope, p);
    s.k2 = eff.cbar2 * q * (c.N1 / c.N2 + std::log(1.0 - a));
    s.chi_slope = eff.cbar2 * q;
    s.z_low = -std::log(1.0 - a);
    s.z_high = z0;
    s.u1 = s.k1 * std::pow(1.0 - a, -p) - s.chi_slope * std::log(1.0 - a) + s.k2;
    s.w0 = chi(z0, s);
    s.u2 = s.w0 + width;

    // g on [w0, u2) written around w0, then re-anchored at u1.
    const double bp = slope * im / (g3p * (g3p - g3m));
    const double bm = slope * ip / (g3m * (g3p - g3m));
    s.log_alpha3_plus = std::log(bp) + g3p * (s.u1 - s.w0);
    s.alpha3_plus = std::exp(s.log_alpha3_plus);
    s.alpha3_minus = bm * std::exp(g3m * (s.u1 - s.w0));

    s.K2 = (1.0 - a) * s.u1 / c.gamma1;
    s.K1 = s.K2 * std::pow(s.u1, -c.gamma1);

    if (!(s.k1 > 0.0)) throw InternalOrderingError("T2: k1 must be positive, got " + num(s.k1));
    if (!(s.u1 < s.w0) || !leq(s.w0, s.u2)) {
        throw InternalOrderingError("T2 ordering violated: u1 = " + num(s.u1) + ", w0 = " + num(s.w0) +
                                    ", u2 = " + num(s.u2));
    }
    s.deltas = {s.u1, s.w0, s.u2};
    return s;
}

SolvedPolicy solve_T3(const ModelParams& eff, const DerivedConstants& c) {
    SolvedPolicy s;
    s.scenario = Scenario::T3_NoW0;
    s.constants = c;
    s.effective = eff;
    const double a = eff.a, b = eff.beta;
    const double p = c.N2 / c.N1;
    const double q = (c.N2 - c.N1) / (c.N2 * b);

    const double ap = std::pow(a, p);
    const double bp = std::pow(1.0 - a, p);
    if (!(ap >= DBL_MIN)) {
        throw Unsupported("T3: a^(N2/N1) underflows for a = " + num(a));
    }
    const double rp = ap / bp;  // (a/(1-a))^{N2/N1}
    const double lr = std::log(a / (1.0 - a));

    s.u1 = (1.0 - c.gamma1) * (eff.cbar1 * q * rp + eff.cbar2 * q);
    s.u2 = s.u1 + eff.cbar1 * c.N1 * (c.N2 - c.N1) / (c.N2 * c.N2 * b) * (1.0 - rp) - eff.cbar2 * q * lr;
    s.w0 = kInf;
    s.chi_slope = eff.cbar2 * q;
    s.z_low = -std::log(1.0 - a);
    s.z_high = -std::log(a);

    const double ia = 1.0 / ap, ib = 1.0 / bp;
    const double den = ia - ib;
    if (std::abs(den) > 1e-6 * ia) {
        s.k1 = (s.u2 - s.u1 + s.chi_slope * lr) / den;
        s.k2 = (ia * (s.u1 + s.chi_slope * std::log(1.0 - a)) - ib * (s.u2 + s.chi_slope * std::log(a))) / den;
    } else {
        // Near a = 1/2 the two-point formula is 0/0; use chi'(-ln(1-a)) = u1/(1-gamma1).
        s.k1 = eff.cbar1 * q * ap / p;
        s.k2 = s.u1 - s.k1 * ib - s.chi_slope * s.z_low;
    }
    s.gamma3 = c.gamma3_tail;
    s.K2 = (1.0 - a) * s.u1 / c.gamma1;
    s.K1 = (1.0 - a) * std::pow(s.u1, 1.0 - c.gamma1) / c.gamma1;

    if (!leq(s.u1, s.u2)) {
        throw InternalOrderingError("T3 ordering violated: u1 = " + num(s.u1) + ", u2 = " + num(s.u2));
    }
    s.deltas = {s.u1, s.u1, s.u2};
    return s;
}

double chi(double z, const SolvedPolicy& p) {
    const double e = p.constants.N2 / p.constants.N1;
    return p.k1 * std::exp(e * z) + p.chi_slope * z + p.k2;
}

double chi_prime(double z, const SolvedPolicy& p) {
    const double e = p.constants.N2 / p.constants.N1;
    return p.k1 * e * std::exp(e * z) + p.chi_slope;
}

double chi_cap(const SolvedPolicy& p) {
    switch (p.scenario) {
        case Scenario::T2_W0Middle: return p.w0;
        case Scenario::T3_NoW0: return p.u2;
        case Scenario::T1_W0First: break;
    }
    throw DomainError("chi is only defined for T2 and T3 policies");
}

double chi_inverse(double y, const SolvedPolicy& p) {
    const double cap = chi_cap(p);
    const double lo_y = p.u1, hi_y = cap;
    if (!(y >= lo_y - 1e-12 * (1.0 + std::abs(lo_y)) && y <= hi_y + 1e-12 * (1.0 + std::abs(hi_y)))) {
        throw DomainError("chi_inverse: " + num(y) + " outside [" + num(lo_y) + ", " + num(hi_y) + "]");
    }
    double lo = p.z_low, hi = p.z_high;
    if (y <= lo_y || hi <= lo) return lo;
    if (y >= hi_y) return hi;

    double z = lo + (hi - lo) * (y - lo_y) / (hi_y - lo_y);
    for (int it = 0; it < 100; ++it) {
        const double f = chi(z, p) - y;
        if (f == 0.0) return z;
        (f > 0.0 ? hi : lo) = z;
        double zn = z - f / chi_prime(z, p);
        if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
        const double step = std::abs(zn - z);
        z = zn;
        if (step <= 4.0 * DBL_EPSILON * (1.0 + std::abs(z))) break;
    }
    return z;
}

CorrelationRegime internal_regime(const ModelParams& eff, const CorrelationRegime& caller) {
    CorrelationRegime r = caller;
    switch (caller.tag) {
        case RegimeTag::FullReinsuranceLine1:
            r.tag = RegimeTag::FullReinsuranceLine2;  // same active line, now labelled 1
            break;
        case RegimeTag::FullReinsuranceLine2:
            break;
        case RegimeTag::Main: {
            r = classify_regime(eff);
            r.tag = RegimeTag::Main;  // relabelling cannot change the regime
            break;
        }
    }
    return r;
}

SolvedPolicy solve(const ModelParams& params) {
    validate(params);
    const CorrelationRegime caller = classify_regime(params);
    const auto [eff, orient] = normalize_orientation(params);
    const CorrelationRegime inner = internal_regime(eff, caller);
    const DerivedConstants c = derive_constants(eff, inner);

    SolvedPolicy s;
    switch (classify_scenario(c, eff)) {
        case Scenario::T1_W0First: s = solve_T1(eff, c); break;
        case Scenario::T2_W0Middle: s = solve_T2(eff, c); break;
        case Scenario::T3_NoW0: s = solve_T3(eff, c); break;
    }
    s.params = params;
    s.orientation = orient;
    s.regime = {caller.tag, inner.n};
    return s;
}

}  // namespace divctl
