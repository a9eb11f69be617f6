#pragma once

#include <vector>

#include "divctl/solver.hpp"

namespace divctl {

struct ValueTriple {
    double g = 0.0;
    double g_prime = 0.0;
    double g_double_prime = 0.0;
};

// Analytic branches of g, listed from the origin outwards.
enum class Branch {
    Power,        // K1 * x^gamma1
    TwoExp,       // T1 only, [w0, u1)
    Integral,     // T2 [u1, w0), T3 [u1, u2)
    Retained,     // T1/T2 [max(w0,u1), u2): exponentials in gamma3+-
    Tail,         // x >= u2
};

const char* to_string(Branch b);

// Branch sequence of the policy together with each branch's lower edge.
struct BranchLayout {
    std::vector<Branch> branches;
    std::vector<double> lower;  // lower[0] == 0
};

BranchLayout layout(const SolvedPolicy& p);

// Branch used at x, with the [lower, upper) convention.
Branch branch_at(const SolvedPolicy& p, double x);

// Evaluates one branch formula at x even outside its own interval (the
// integral branch only inside [u1, cap]). Used for smooth-fit checks.
ValueTriple eval_branch(const SolvedPolicy& p, Branch b, double x);

// g and its first two derivatives at aggregate surplus x >= 0. At x = 0 the
// derivatives are reported as +inf / -inf.
ValueTriple eval(const SolvedPolicy& p, double x);

// Integral of e^{-chi^{-1}(y)} from u1 to x using the change-of-variables
// closed form (one chi^{-1} evaluation).
double integral_branch(const SolvedPolicy& p, double x);

// Tail exponent: gamma4- in T1/T2, gamma3 in T3.
double tail_exponent(const SolvedPolicy& p);

}  // namespace divctl
