#include "divctl/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divctl/error.hpp"

namespace divctl {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// 1 - ((1-gamma1)/w) * chi'(z); w may be +inf (degenerate line).
double theta_from_chi(const SolvedPolicy& p, double w, double chi_p) {
    return clip01(1.0 - (1.0 - p.constants.gamma1) / w * chi_p);
}

}  // namespace

const char* to_string(Region r) {
    static const char* names[] = {"A1", "A2", "A3", "A4", "A5", "A6", "A7"};
    return names[static_cast<int>(r) - 1];
}

const char* to_string(InjectionKind k) {
    switch (k) {
        case InjectionKind::TransferToLine1: return "TransferToLine1";
        case InjectionKind::TransferToLine2: return "TransferToLine2";
        case InjectionKind::Ruin: return "Ruin";
        case InjectionKind::None: return "None";
    }
    return "?";
}

ControlDecision internal_controls_at(const SolvedPolicy& p, double x) {
    if (!(x >= 0.0)) throw DomainError("controls requested at negative surplus " + std::to_string(x));
    const DerivedConstants& c = p.constants;
    const double w1 = c.w1, w2 = c.w2;
    const double cb1 = p.effective.cbar1, cb2 = p.effective.cbar2;
    ControlDecision d;
    switch (p.scenario) {
        case Scenario::T1_W0First:
            if (x < p.w0) {
                d.theta1 = clip01(1.0 - x / p.w0);
                d.theta2 = clip01(1.0 - x / w2);
            } else {
                // TODO: this plateau is not the pointwise maximizer of the
                // generator once g'/g'' stops being constant (above w0 the
                // brute-force grid beats it). Replace with a numerical solve
                // of the nonlinear HJB on [w0, inf) once one is available.
                d.theta1 = 0.0;
                d.theta2 = clip01(1.0 - p.w0 / w2);
            }
            break;
        case Scenario::T2_W0Middle:
            if (x < p.u1) {
                d.theta1 = clip01(1.0 - x / w1);
                d.theta2 = clip01(1.0 - x / w2);
            } else if (x < p.w0) {
                const double cp = chi_prime(chi_inverse(x, p), p);
                d.theta1 = theta_from_chi(p, w1, cp);
                d.theta2 = theta_from_chi(p, w2, cp);
            } else {
                d.theta1 = 0.0;
                d.theta2 = theta_from_chi(p, w2, chi_prime(p.z_high, p));
            }
            break;
        case Scenario::T3_NoW0:
            if (x < p.u1) {
                d.theta1 = clip01(1.0 - x / w1);
                d.theta2 = clip01(1.0 - x / w2);
            } else if (x < p.u2) {
                const double cp = chi_prime(chi_inverse(x, p), p);
                d.theta1 = theta_from_chi(p, w1, cp);
                d.theta2 = theta_from_chi(p, w2, cp);
            } else {
                d.theta1 = clip01(1.0 + (1.0 - c.gamma1) / (w1 * p.gamma3));
                d.theta2 = clip01(1.0 + (1.0 - c.gamma1) / (w2 * p.gamma3));
            }
            break;
    }
    // Dividends: the heavier-weighted line (internal line 2) pays from u1,
    // the other from u2. Closed side at the thresholds themselves.
    d.c2 = x >= p.u1 ? cb2 : 0.0;
    d.c1 = x >= p.u2 ? cb1 : 0.0;
    return d;
}

ControlDecision to_caller(const SolvedPolicy& p, const ControlDecision& in) {
    ControlDecision out = in;
    if (p.orientation.lines_swapped) std::swap(out.theta1, out.theta2);
    if (p.orientation.weight_flipped) std::swap(out.c1, out.c2);
    return out;
}

ControlDecision controls_at(const SolvedPolicy& p, double x) {
    return to_caller(p, internal_controls_at(p, x));
}

Region region_of(const SolvedPolicy& p, double x1, double x2) {
    const double d0 = p.deltas.d0, d1 = p.deltas.d1, d2 = p.deltas.d2;
    const double s = x1 + x2;
    if (x1 >= 0.0 && x2 > d2) return Region::A1;
    if (x1 > 0.0 && x2 >= 0.0 && x2 <= d2 && s > d2) return Region::A2;
    if (x1 >= 0.0 && x2 > d1 && x2 <= d2 && s <= d2) return Region::A3;
    if (x1 > 0.0 && x2 >= 0.0 && x2 <= d1 && s > d1 && s <= d2) return Region::A4;
    if (x1 >= 0.0 && x2 > d0 && x2 <= d1 && s <= d1) return Region::A5;
    if (x1 > 0.0 && x2 >= 0.0 && x2 <= d0 && s > d0 && s <= d1) return Region::A6;
    return Region::A7;
}

InjectionAction injection_on_hit(const SolvedPolicy& p, double x1, double x2, int hit_line,
                                 OriginRule origin) {
    if (hit_line != 1 && hit_line != 2) throw PreconditionError("hit_line must be 1 or 2");
    const double hit = hit_line == 1 ? x1 : x2;
    if (!(hit <= 0.0)) {
        throw PreconditionError("line " + std::to_string(hit_line) + " has not hit zero (surplus " +
                                std::to_string(hit) + ")");
    }
    InjectionAction act;
    const double s = x1 + x2;
    act.region = hit_line == 1 ? region_of(p, 0.0, std::max(s, 0.0)) : region_of(p, std::max(s, 0.0), 0.0);
    act.x1_after = x1;
    act.x2_after = x2;
    if (!(s > 0.0)) {
        act.kind = InjectionKind::Ruin;
        return act;
    }

    double keep = 0.0;  // level left on the donor line
    switch (act.region) {
        case Region::A1:
        case Region::A2: keep = p.deltas.d2; break;
        case Region::A3:
        case Region::A4: keep = p.deltas.d1; break;
        case Region::A5:
        case Region::A6: keep = p.deltas.d0; break;
        case Region::A7:
            if (origin == OriginRule::Ruin) {
                act.kind = InjectionKind::Ruin;
                return act;
            }
            keep = 0.5 * s;
            break;
    }
    const double rescued = s - keep;
    if (!(rescued > 0.0)) {
        act.kind = InjectionKind::Ruin;
        return act;
    }
    if (hit_line == 1) {
        act.kind = InjectionKind::TransferToLine1;
        act.amount = x2 - keep;
        act.x1_after = rescued;
        act.x2_after = keep;
    } else {
        act.kind = InjectionKind::TransferToLine2;
        act.amount = x1 - keep;
        act.x1_after = keep;
        act.x2_after = rescued;
    }
    return act;
}

}  // namespace divctl
