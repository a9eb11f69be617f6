#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "divctl/sim.hpp"
#include "divctl/solver.hpp"
#include "divctl/verify.hpp"

namespace divctl {

// Shortest round-trip form of v with infinities spelled "inf" / "-inf".
std::string fmt(double v);

// Human-readable "key: value" summary of a solved policy.
void write_summary(std::ostream& os, const SolvedPolicy& p);

// Number of rows a [lo, hi] grid with the given step produces.
std::size_t grid_rows(double lo, double hi, double step);

// CSV of x, g, g', g'', theta1*, theta2*, c1*, c2* with '#' metadata lines.
void write_curve(std::ostream& os, const SolvedPolicy& p, double lo, double hi, double step);

// Verification report as JSON (keys in a fixed order).
std::string report_json(const VerificationReport& r, const SolvedPolicy& p);

// Region of (x1, x2) plus the transfer each line's hit would trigger.
void write_region(std::ostream& os, const SolvedPolicy& p, double x1, double x2);

struct RuleEstimate {
    std::string rule;
    ValueEstimate est;
};

// Mean +- SE, the closed-form value and the z-score for each rule.
void write_simulation(std::ostream& os, const SolvedPolicy& p, const SimConfig& cfg,
                      const std::vector<RuleEstimate>& rows);

}  // namespace divctl
