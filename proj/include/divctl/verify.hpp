#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divctl/solver.hpp"
#include "divctl/strategy.hpp"
#include "divctl/valuefn.hpp"

namespace divctl {

// Generator of the collapsed problem applied to g at x under the given
// controls (caller labels, caller parameters). Zero at the optimum.
double hjb_residual(const SolvedPolicy& p, double x, const ControlDecision& d);

struct BruteForceResult {
    double excess = 0.0;     // grid max minus residual at the analytic controls
    double grid_max = 0.0;
    double theta1 = 0.0;     // grid argmax
    double theta2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

// Maximizes the generator over a grid_n x grid_n lattice of (theta1, theta2)
// and the four bang-bang dividend pairs.
BruteForceResult bruteforce_sup_check(const SolvedPolicy& p, double x, int grid_n);

struct GridSpec {
    int points = 500;          // residual / brute-force / shape grid size
    int bruteforce_n = 201;
    int fd_points = 200;
    double x_max = 0.0;        // 0 selects u2 + 30/|tail exponent|
    std::uint64_t seed = 12345;

    double smooth_tol = 1e-8;
    double smooth_tol_integral = 1e-6;
    double slope_tol = 1e-8;
    double residual_tol = 1e-8;
    double residual_tol_integral = 1e-6;
    double bruteforce_tol = 1e-3;
    double fd_tol_first = 1e-6;
    double fd_tol_second = 1e-4;
    double fd_h_first = 1e-5;
    double fd_h_second = 1e-3;
    double kkt_tol = 1e-6;
};

struct SmoothFitGap {
    std::string point;  // "w0", "u1", "u2"
    double x = 0.0;
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    GridSpec grid;
    std::string policy_hash;
    double x_max = 0.0;

    double max_hjb_residual_at_optimum = 0.0;  // scaled by 1 + g
    double max_hjb_residual_integral = 0.0;    // same, integral branch points only
    double max_bruteforce_violation = 0.0;
    std::vector<SmoothFitGap> smooth_fit_gaps;
    double slope_gap_u1 = 0.0;
    double slope_gap_u2 = 0.0;
    bool monotone = false;
    bool concave = false;
    bool bounded = false;
    bool theta_positive = true;  // only asserted for T3
    double tail_gap = 0.0;
    double fd_max_rel_error = 0.0;         // first derivative
    double fd_max_rel_error_second = 0.0;  // second derivative
    double max_kkt_violation = 0.0;

    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

VerificationReport run_battery(const SolvedPolicy& p, const GridSpec& grid = {});

// Stable fingerprint of the numbers that define a policy.
std::string policy_hash(const SolvedPolicy& p);

}  // namespace divctl
