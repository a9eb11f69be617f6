#include "divctl/valuefn.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "divctl/error.hpp"

namespace divctl {

const char* to_string(Branch b) {
    switch (b) {
        case Branch::Power: return "power";
        case Branch::TwoExp: return "two-exp";
        case Branch::Integral: return "integral";
        case Branch::Retained: return "retained";
        case Branch::Tail: return "tail";
    }
    return "?";
}

BranchLayout layout(const SolvedPolicy& p) {
    BranchLayout l;
    switch (p.scenario) {
        case Scenario::T1_W0First:
            l.branches = {Branch::Power, Branch::TwoExp, Branch::Retained, Branch::Tail};
            l.lower = {0.0, p.w0, p.u1, p.u2};
            break;
        case Scenario::T2_W0Middle:
            l.branches = {Branch::Power, Branch::Integral, Branch::Retained, Branch::Tail};
            l.lower = {0.0, p.u1, p.w0, p.u2};
            break;
        case Scenario::T3_NoW0:
            l.branches = {Branch::Power, Branch::Integral, Branch::Tail};
            l.lower = {0.0, p.u1, p.u2};
            break;
    }
    return l;
}

Branch branch_at(const SolvedPolicy& p, double x) {
    const BranchLayout l = layout(p);
    std::size_t k = 0;
    for (std::size_t i = 1; i < l.lower.size(); ++i) {
        if (x >= l.lower[i]) k = i;
    }
    return l.branches[k];
}

double tail_exponent(const SolvedPolicy& p) {
    return p.scenario == Scenario::T3_NoW0 ? p.gamma3 : p.constants.gamma4_minus;
}

double integral_branch(const SolvedPolicy& p, double x) {
    if (p.scenario == Scenario::T1_W0First) throw DomainError("integral branch does not exist in T1");
    const double cap = chi_cap(p);
    if (!(x >= p.u1 - 1e-12 * (1.0 + p.u1) && x <= cap + 1e-12 * (1.0 + cap))) {
        throw DomainError("integral branch evaluated outside [u1, cap] at x = " + std::to_string(x));
    }
    const DerivedConstants& c = p.constants;
    const double a = p.effective.a;
    const double e = c.N2 / c.N1;
    const double lead = p.k1 * c.N1 / (c.N2 - c.N1);
    const double z = chi_inverse(x, p);
    const double zl = p.z_low;  // -ln(1-a)
    const double upper = (lead * std::exp(e * z) - p.chi_slope * (1.0 + z) + x - p.k2) * std::exp(-z);
    const double lower = (1.0 - a) * (lead * std::exp(e * zl) - p.chi_slope * (1.0 + zl) + p.u1 - p.k2);
    return upper - lower;
}

ValueTriple eval_branch(const SolvedPolicy& p, Branch b, double x) {
    const DerivedConstants& c = p.constants;
    const double a = p.effective.a;
    ValueTriple v;
    switch (b) {
        case Branch::Power: {
            const double g1 = c.gamma1;
            if (x == 0.0) {
                v.g = 0.0;
                v.g_prime = std::numeric_limits<double>::infinity();
                v.g_double_prime = -std::numeric_limits<double>::infinity();
                return v;
            }
            const double xp = std::pow(x, g1);
            v.g = p.K1 * xp;
            v.g_prime = p.K1 * g1 * xp / x;
            v.g_double_prime = p.K1 * g1 * (g1 - 1.0) * xp / (x * x);
            return v;
        }
        case Branch::TwoExp: {
            const double t = x - p.w0;
            const double g2p = c.gamma2_plus, g2m = c.gamma2_minus;
            const double ep = std::exp(g2p * t), em = std::exp(g2m * t);
            v.g = -p.lambda * (g2m * ep + g2p * em);
            v.g_prime = -p.lambda * g2p * g2m * (ep + em);
            v.g_double_prime = -p.lambda * g2p * g2m * (g2p * ep + g2m * em);
            return v;
        }
        case Branch::Integral: {
            const double z = chi_inverse(x, p);
            const double ez = std::exp(-z);
            v.g = integral_branch(p, x) + p.K2;
            v.g_prime = ez;
            v.g_double_prime = -ez / chi_prime(z, p);
            return v;
        }
        case Branch::Retained: {
            const double t = x - p.u1;
            const double g3p = c.gamma3_plus, g3m = c.gamma3_minus;
            const double ep = std::exp(p.log_alpha3_plus + g3p * t);
            const double em = p.alpha3_minus * std::exp(g3m * t);
            v.g = ep + em + (1.0 - a) * p.effective.cbar2 / p.effective.beta;
            v.g_prime = g3p * ep + g3m * em;
            v.g_double_prime = g3p * g3p * ep + g3m * g3m * em;
            return v;
        }
        case Branch::Tail: {
            const double gt = tail_exponent(p);
            const double e = std::exp(gt * (x - p.u2));
            v.g = a / gt * e + c.v_limit;
            v.g_prime = a * e;
            v.g_double_prime = a * gt * e;
            return v;
        }
    }
    return v;
}

ValueTriple eval(const SolvedPolicy& p, double x) {
    if (!(x >= 0.0)) throw DomainError("value function evaluated at negative surplus " + std::to_string(x));
    return eval_branch(p, branch_at(p, x), x);
}

}  // namespace divctl
