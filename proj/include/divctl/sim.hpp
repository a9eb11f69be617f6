#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "divctl/solver.hpp"
#include "divctl/strategy.hpp"

namespace divctl {

struct SimConfig {
    double dt = 5e-4;
    double horizon = 0.0;  // 0 picks ln(1e4)/beta, the smallest admissible value
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    double x1_0 = 0.0;
    double x2_0 = 0.0;
    OriginRule origin = OriginRule::Rescue;
    unsigned threads = 0;  // 0 = hardware concurrency, capped by DIVCTL_THREADS
    // Tests of the raw dynamics (martingale checks) use short horizons and
    // coarse steps; they switch this off. Value estimates keep it on.
    bool enforce_accuracy = true;
};

struct ValueEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t n_paths = 0;
    double ruin_fraction = 0.0;
    double transfers_per_path = 0.0;
};

struct PathResult {
    double payoff = 0.0;  // discounted dividends up to ruin or the horizon
    double ruin_time = std::numeric_limits<double>::infinity();  // inf when censored
    bool ruined = false;
    double x1_end = 0.0;
    double x2_end = 0.0;
    std::uint64_t transfers = 0;
};

// A feedback rule for the simulator. Controls are in the caller's labels.
class ControlRule {
public:
    virtual ~ControlRule() = default;
    virtual ControlDecision decide(double x1, double x2) const = 0;
    // false: a line hitting zero ends the path, no capital is moved.
    virtual bool injects() const { return true; }
    virtual std::string name() const = 0;
};

// The solved policy, with integral-branch reinsurance tabulated for speed.
class OptimalRule final : public ControlRule {
public:
    explicit OptimalRule(const SolvedPolicy& p, int table_intervals = 16384);
    ControlDecision decide(double x1, double x2) const override { return at(x1 + x2); }
    ControlDecision at(double x) const;
    std::string name() const override { return "optimal"; }

private:
    // Everything below is in the caller's labels.
    double lin_end_;       // theta_i = 1 - x*inv_i below this
    double table_end_;     // tabulated on [lin_end_, table_end_)
    double inv1_, inv2_;
    double top1_, top2_;   // constant thetas from table_end_ on
    double h_inv_ = 0.0;
    std::vector<double> tab_;  // (theta1, theta2) pairs at the table nodes
    std::size_t last_ = 0;     // index of the last interval
    double cut1_, cb1_, cut2_, cb2_;  // line i pays cb_i once x >= cut_i
};

inline ControlDecision OptimalRule::at(double x) const {
    ControlDecision d;
    if (x < lin_end_) {
        d.theta1 = std::max(0.0, 1.0 - x * inv1_);
        d.theta2 = std::max(0.0, 1.0 - x * inv2_);
    } else if (x < table_end_) {
        const double pos = (x - lin_end_) * h_inv_;
        const std::size_t i = std::min(static_cast<std::size_t>(pos), last_);
        const double f = pos - static_cast<double>(i);
        const double* n = &tab_[2 * i];
        d.theta1 = n[0] + f * (n[2] - n[0]);
        d.theta2 = n[1] + f * (n[3] - n[1]);
    } else {
        d.theta1 = top1_;
        d.theta2 = top2_;
    }
    d.c1 = x >= cut1_ ? cb1_ : 0.0;
    d.c2 = x >= cut2_ ? cb2_ : 0.0;
    return d;
}

// The fixed panel of suboptimal rules used for dominance checks.
std::vector<std::unique_ptr<ControlRule>> suboptimal_panel(const SolvedPolicy& p);

// Rules by name: optimal, zero-reinsurance, full-reinsurance,
// always-max-dividends, late-dividends, no-injection,
// no-reinsurance-max-dividends. Throws ConfigError for unknown names.
std::unique_ptr<ControlRule> make_rule(const std::string& name, const SolvedPolicy& p);
std::vector<std::string> rule_names();

double default_horizon(double beta);

// Fills in the horizon and checks the invariants; throws ConfigError.
SimConfig resolve(const SimConfig& cfg, const SolvedPolicy& p);

PathResult simulate_path(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg,
                         std::uint64_t path_index);

ValueEstimate estimate_value(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg);

// Runs every path at dt and at dt/2 on the same Brownian increments and
// reports the mean payoff difference (fine minus coarse) with its standard error.
struct RefinementEstimate {
    ValueEstimate coarse;
    ValueEstimate fine;
    double diff_mean = 0.0;
    double diff_std_err = 0.0;
};

RefinementEstimate estimate_refinement(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg);

// Worker threads to use: requested (0 = hardware), capped by DIVCTL_THREADS.
unsigned worker_count(unsigned requested);

}  // namespace divctl
