#pragma once

#include "divctl/solver.hpp"

namespace divctl {

// Controls in the caller's labelling.
struct ControlDecision {
    double theta1 = 0.0;  // ceded proportions
    double theta2 = 0.0;
    double c1 = 0.0;      // dividend rates
    double c2 = 0.0;
};

enum class Region { A1 = 1, A2, A3, A4, A5, A6, A7 };

const char* to_string(Region r);

enum class InjectionKind { TransferToLine1, TransferToLine2, Ruin, None };

const char* to_string(InjectionKind k);

struct InjectionAction {
    InjectionKind kind = InjectionKind::None;
    double amount = 0.0;
    Region region = Region::A7;  // region of the projected post-hit state
    double x1_after = 0.0;
    double x2_after = 0.0;
};

// What to do when a line hits zero while the pair sits in A7.
//   Ruin   -> the literal rule: the problem ends there.
//   Rescue -> split the (positive) aggregate evenly; ruin only once the
//             aggregate itself is exhausted. This is what V = g(x1 + x2)
//             requires; see the README for the discussion.
enum class OriginRule { Ruin, Rescue };

// Controls in the normalized orientation (internal labels).
ControlDecision internal_controls_at(const SolvedPolicy& p, double x);

// Maps internal controls to the caller's labels using the orientation.
ControlDecision to_caller(const SolvedPolicy& p, const ControlDecision& internal);

ControlDecision controls_at(const SolvedPolicy& p, double x);

Region region_of(const SolvedPolicy& p, double x1, double x2);

// hit_line is 1 or 2 and must be at or below zero. The pair is projected onto
// the axis of the hit line (that line at zero, the other holding x1 + x2)
// before the injection region is looked up, so slightly negative overshoot
// from a discrete step is handled by the same rule.
InjectionAction injection_on_hit(const SolvedPolicy& p, double x1, double x2, int hit_line,
                                 OriginRule origin = OriginRule::Ruin);

}  // namespace divctl
