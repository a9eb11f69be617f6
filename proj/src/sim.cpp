#include "divctl/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "divctl/error.hpp"
#include "divctl/rng.hpp"

namespace divctl {

namespace {

constexpr std::uint64_t kBlock = 256;  // paths per work unit

class LambdaRule : public ControlRule {
public:
    using Fn = std::function<ControlDecision(double, double)>;
    LambdaRule(std::string name, Fn fn, bool injects = true)
        : name_(std::move(name)), fn_(std::move(fn)), injects_(injects) {}
    ControlDecision decide(double x1, double x2) const override { return fn_(x1, x2); }
    bool injects() const override { return injects_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Fn fn_;
    bool injects_;
};

// Per-path state for one time grid.
struct PathState {
    double x1, x2;
    double t = 0.0;
    double disc = 1.0;
    double payoff = 0.0;
    bool alive = true;
    bool ruined = false;
    double ruin_time = std::numeric_limits<double>::infinity();
    std::uint64_t transfers = 0;
};

// Per-step constants of the Euler scheme on one grid, folded so the update
// reads x_i += (1 - theta_i)(mu_i dt + sigma_i sqrt(dt) Z_i) - c_i dt.
struct Kernel {
    double dt, decay, m1, s1, m2, s2a, s2b, pay1, pay2;

    Kernel(const ModelParams& m, double step) {
        const double sdt = std::sqrt(step);
        dt = step;
        decay = std::exp(-m.beta * step);
        const double weight = (1.0 - decay) / m.beta;  // integral of e^{-beta s} over one step
        m1 = m.mu1 * step;
        s1 = m.sigma1 * sdt;
        m2 = m.mu2 * step;
        s2a = m.sigma2 * sdt * m.rho;
        s2b = m.sigma2 * sdt * std::sqrt(1.0 - m.rho * m.rho);
        pay1 = weight * m.a;
        pay2 = weight * (1.0 - m.a);
    }

    // Pays the dividends of the step at discount disc, then moves the state.
    void advance(double& x1, double& x2, double& payoff, double disc, const ControlDecision& d, double z1,
                 double z2) const {
        payoff += disc * (pay1 * d.c1 + pay2 * d.c2);
        x1 += (1.0 - d.theta1) * (m1 + s1 * z1) - d.c1 * dt;
        x2 += (1.0 - d.theta2) * (m2 + s2a * z1 + s2b * z2) - d.c2 * dt;
    }
};

// The Euler scheme on one grid. Rule is the static type of the control rule,
// so the solved policy's lookup can be inlined.
template <class Rule>
class Engine {
public:
    Engine(const SolvedPolicy& p, const Rule& rule, const SimConfig& cfg, double dt)
        : p_(p), rule_(rule), origin_(cfg.origin), k_(p.params, dt) {}

    // Applies the hit rule if a line sits at or below zero. Returns false when
    // the path ends.
    bool settle(PathState& s) const {
        if (s.x1 > 0.0 && s.x2 > 0.0) return true;
        if (!rule_.injects()) return end(s);
        const int line = s.x1 <= 0.0 ? 1 : 2;  // line 1 first on a simultaneous hit
        const InjectionAction act = injection_on_hit(p_, s.x1, s.x2, line, origin_);
        if (act.kind == InjectionKind::Ruin) return end(s);
        s.x1 = act.x1_after;
        s.x2 = act.x2_after;
        ++s.transfers;
        return true;
    }

    void step(PathState& s, double z1, double z2) const {
        k_.advance(s.x1, s.x2, s.payoff, s.disc, rule_.decide(s.x1, s.x2), z1, z2);
        s.disc *= k_.decay;
        s.t += k_.dt;
        settle(s);
    }

    // Runs up to n steps on stream rng with the state held in registers.
    void run(PathState& s, Stream& rng, std::uint64_t n) const {
        double x1 = s.x1, x2 = s.x2, payoff = s.payoff, disc = s.disc;
        for (std::uint64_t k = 0; k < n; ++k) {
            const double z1 = standard_normal(rng);
            const double z2 = standard_normal(rng);
            k_.advance(x1, x2, payoff, disc, rule_.decide(x1, x2), z1, z2);
            disc *= k_.decay;
            if (!(x1 > 0.0 && x2 > 0.0)) {
                s.x1 = x1;
                s.x2 = x2;
                s.t = static_cast<double>(k + 1) * k_.dt;
                if (!settle(s)) break;
                x1 = s.x1;
                x2 = s.x2;
            }
        }
        s.x1 = x1;
        s.x2 = x2;
        s.payoff = payoff;
        s.disc = disc;
    }

private:
    bool end(PathState& s) const {
        s.alive = false;
        s.ruined = true;
        s.ruin_time = s.t;
        return false;
    }

    const SolvedPolicy& p_;
    const Rule& rule_;
    OriginRule origin_;
    Kernel k_;
};

struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0) return;
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double tot = na + nb;
        mean += d * nb / tot;
        m2 += o.m2 + d * d * na * nb / tot;
        n += o.n;
    }
    double std_err() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

struct BlockStats {
    Moments payoff, fine, diff;
    std::uint64_t ruins = 0, ruins_fine = 0;
    std::uint64_t transfers = 0, transfers_fine = 0;
};

// Runs fn(block_index, stats) for all blocks on a pool of threads and merges
// the results in block order, so the totals do not depend on scheduling.
BlockStats run_blocks(std::uint64_t n_paths, unsigned threads,
                      const std::function<void(std::uint64_t, BlockStats&)>& fn) {
    const std::uint64_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<BlockStats> blocks(n_blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < n_blocks; b = next++) fn(b, blocks[b]);
    };
    const unsigned n_workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n_blocks, 1)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    BlockStats total;
    for (const BlockStats& b : blocks) {
        total.payoff.merge(b.payoff);
        total.fine.merge(b.fine);
        total.diff.merge(b.diff);
        total.ruins += b.ruins;
        total.ruins_fine += b.ruins_fine;
        total.transfers += b.transfers;
        total.transfers_fine += b.transfers_fine;
    }
    return total;
}

ValueEstimate to_estimate(const Moments& m, std::uint64_t ruins, std::uint64_t transfers) {
    ValueEstimate e;
    e.mean = m.mean;
    e.std_err = m.std_err();
    e.n_paths = m.n;
    e.ruin_fraction = m.n ? static_cast<double>(ruins) / static_cast<double>(m.n) : 0.0;
    e.transfers_per_path = m.n ? static_cast<double>(transfers) / static_cast<double>(m.n) : 0.0;
    return e;
}

std::uint64_t step_count(const SimConfig& c, double dt) {
    return static_cast<std::uint64_t>(std::ceil(c.horizon / dt - 1e-9));
}

// cfg must already be resolved.
template <class Rule>
PathResult run_path(const SolvedPolicy& p, const Rule& rule, const SimConfig& cfg, std::uint64_t path_index) {
    Engine<Rule> eng(p, rule, cfg, cfg.dt);
    PathState s{cfg.x1_0, cfg.x2_0};
    Stream rng(cfg.seed, path_index);
    if (eng.settle(s)) eng.run(s, rng, step_count(cfg, cfg.dt));
    PathResult r;
    r.payoff = s.payoff;
    r.ruined = s.ruined;
    r.ruin_time = s.ruin_time;
    r.x1_end = s.x1;
    r.x2_end = s.x2;
    r.transfers = s.transfers;
    return r;
}

template <class Rule>
ValueEstimate estimate_with(const SolvedPolicy& p, const Rule& rule, const SimConfig& cfg) {
    const BlockStats total = run_blocks(cfg.n_paths, worker_count(cfg.threads), [&](std::uint64_t b, BlockStats& st) {
        const std::uint64_t lo = b * kBlock, hi = std::min(cfg.n_paths, lo + kBlock);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const PathResult r = run_path(p, rule, cfg, i);
            st.payoff.add(r.payoff);
            st.ruins += r.ruined;
            st.transfers += r.transfers;
        }
    });
    return to_estimate(total.payoff, total.ruins, total.transfers);
}

}  // namespace

OptimalRule::OptimalRule(const SolvedPolicy& p, int table_intervals) {
    const DerivedConstants& c = p.constants;
    double in1 = 0.0, in2 = 1.0 / c.w2;  // in2 is zero when the line is fully reinsured
    switch (p.scenario) {
        case Scenario::T1_W0First:
            lin_end_ = table_end_ = p.w0;
            in1 = 1.0 / p.w0;
            break;
        case Scenario::T2_W0Middle:
            lin_end_ = p.u1;
            table_end_ = p.w0;
            in1 = 1.0 / c.w1;
            break;
        case Scenario::T3_NoW0:
            lin_end_ = p.u1;
            table_end_ = p.u2;
            in1 = 1.0 / c.w1;
            break;
    }
    const bool swap = p.orientation.lines_swapped;
    inv1_ = swap ? in2 : in1;
    inv2_ = swap ? in1 : in2;
    const ControlDecision top = controls_at(p, table_end_);
    top1_ = top.theta1;
    top2_ = top.theta2;
    if (table_end_ > lin_end_) {
        const int n = std::max(table_intervals, 1);
        const double h = (table_end_ - lin_end_) / n;
        h_inv_ = 1.0 / h;
        last_ = static_cast<std::size_t>(n - 1);
        tab_.resize(2 * static_cast<std::size_t>(n + 1));
        for (int j = 0; j <= n; ++j) {
            const double x = j == n ? table_end_ : lin_end_ + j * h;
            // The integral branch is closed at its top for this purpose.
            const ControlDecision d = controls_at(p, j == n ? std::nextafter(x, 0.0) : x);
            tab_[2 * j] = d.theta1;
            tab_[2 * j + 1] = d.theta2;
        }
    }
    // Internally the line paid from u1 has cap cbar2 and the other pays from u2.
    const bool first_is_line1 = p.orientation.weight_flipped;
    cut1_ = first_is_line1 ? p.u1 : p.u2;
    cut2_ = first_is_line1 ? p.u2 : p.u1;
    cb1_ = first_is_line1 ? p.effective.cbar2 : p.effective.cbar1;
    cb2_ = first_is_line1 ? p.effective.cbar1 : p.effective.cbar2;
}

std::vector<std::string> rule_names() {
    return {"optimal",       "zero-reinsurance", "full-reinsurance",           "always-max-dividends",
            "late-dividends", "no-injection",     "no-reinsurance-max-dividends"};
}

std::unique_ptr<ControlRule> make_rule(const std::string& name, const SolvedPolicy& p) {
    if (name == "optimal") return std::make_unique<OptimalRule>(p);
    auto opt = std::make_shared<const OptimalRule>(p);
    const double cb1 = p.params.cbar1, cb2 = p.params.cbar2;
    if (name == "zero-reinsurance") {
        return std::make_unique<LambdaRule>(name, [opt](double x1, double x2) {
            ControlDecision d = opt->decide(x1, x2);
            d.theta1 = d.theta2 = 0.0;
            return d;
        });
    }
    if (name == "full-reinsurance") {
        return std::make_unique<LambdaRule>(name, [opt](double x1, double x2) {
            ControlDecision d = opt->decide(x1, x2);
            d.theta1 = d.theta2 = 1.0;
            return d;
        });
    }
    if (name == "always-max-dividends") {
        return std::make_unique<LambdaRule>(name, [opt, cb1, cb2](double x1, double x2) {
            ControlDecision d = opt->decide(x1, x2);
            d.c1 = cb1;
            d.c2 = cb2;
            return d;
        });
    }
    if (name == "late-dividends") {
        const double start = 2.0 * p.u2;
        return std::make_unique<LambdaRule>(name, [opt, cb1, cb2, start](double x1, double x2) {
            ControlDecision d = opt->decide(x1, x2);
            const bool pay = x1 + x2 >= start;
            d.c1 = pay ? cb1 : 0.0;
            d.c2 = pay ? cb2 : 0.0;
            return d;
        });
    }
    if (name == "no-injection") {
        return std::make_unique<LambdaRule>(
            name, [opt](double x1, double x2) { return opt->decide(x1, x2); }, false);
    }
    if (name == "no-reinsurance-max-dividends") {
        return std::make_unique<LambdaRule>(name, [cb1, cb2](double, double) {
            ControlDecision d;
            d.c1 = cb1;
            d.c2 = cb2;
            return d;
        });
    }
    throw ConfigError("unknown control rule '" + name + "'");
}

std::vector<std::unique_ptr<ControlRule>> suboptimal_panel(const SolvedPolicy& p) {
    std::vector<std::unique_ptr<ControlRule>> out;
    for (const char* n : {"zero-reinsurance", "full-reinsurance", "always-max-dividends", "late-dividends",
                          "no-injection"}) {
        out.push_back(make_rule(n, p));
    }
    return out;
}

double default_horizon(double beta) { return std::log(1e4) / beta; }

SimConfig resolve(const SimConfig& in, const SolvedPolicy& p) {
    SimConfig c = in;
    const double beta = p.params.beta;
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt must be positive");
    if (c.n_paths == 0) throw ConfigError("n_paths must be at least 1");
    if (!(c.x1_0 >= 0.0) || !(c.x2_0 >= 0.0) || !std::isfinite(c.x1_0) || !std::isfinite(c.x2_0)) {
        throw ConfigError("initial surpluses must be finite and nonnegative");
    }
    if (c.horizon == 0.0) c.horizon = default_horizon(beta);
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) throw ConfigError("horizon must be positive");
    if (c.enforce_accuracy) {
        const double dt_max = 1e-3 * std::min(1.0, 1.0 / beta);
        if (c.dt > dt_max * (1.0 + 1e-12)) {
            throw ConfigError("dt = " + std::to_string(c.dt) + " exceeds 1e-3*min(1, 1/beta) = " +
                              std::to_string(dt_max));
        }
        if (c.horizon < default_horizon(beta) * (1.0 - 1e-12)) {
            throw ConfigError("horizon too short: truncation bias would exceed 1e-4 * v_limit");
        }
    }
    return c;
}

PathResult simulate_path(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg_in,
                         std::uint64_t path_index) {
    const SimConfig cfg = resolve(cfg_in, p);
    if (const auto* opt = dynamic_cast<const OptimalRule*>(&rule)) return run_path(p, *opt, cfg, path_index);
    return run_path(p, rule, cfg, path_index);
}

ValueEstimate estimate_value(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg_in) {
    const SimConfig cfg = resolve(cfg_in, p);
    if (const auto* opt = dynamic_cast<const OptimalRule*>(&rule)) return estimate_with(p, *opt, cfg);
    return estimate_with(p, rule, cfg);
}

RefinementEstimate estimate_refinement(const SolvedPolicy& p, const ControlRule& rule, const SimConfig& cfg_in) {
    const SimConfig cfg = resolve(cfg_in, p);
    const double dt = cfg.dt;
    const std::uint64_t n_coarse = step_count(cfg, dt);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const BlockStats total = run_blocks(cfg.n_paths, worker_count(cfg.threads), [&](std::uint64_t b, BlockStats& st) {
        Engine<ControlRule> coarse(p, rule, cfg, dt);
        Engine<ControlRule> fine(p, rule, cfg, 0.5 * dt);
        const std::uint64_t lo = b * kBlock, hi = std::min(cfg.n_paths, lo + kBlock);
        for (std::uint64_t i = lo; i < hi; ++i) {
            Stream rng(cfg.seed, i);
            PathState sc{cfg.x1_0, cfg.x2_0}, sf{cfg.x1_0, cfg.x2_0};
            coarse.settle(sc);
            fine.settle(sf);
            for (std::uint64_t k = 0; k < n_coarse && (sc.alive || sf.alive); ++k) {
                const double a1 = standard_normal(rng), a2 = standard_normal(rng);
                const double b1 = standard_normal(rng), b2 = standard_normal(rng);
                if (sf.alive) fine.step(sf, a1, a2);
                if (sf.alive) fine.step(sf, b1, b2);
                if (sc.alive) coarse.step(sc, (a1 + b1) * inv_sqrt2, (a2 + b2) * inv_sqrt2);
            }
            st.payoff.add(sc.payoff);
            st.fine.add(sf.payoff);
            st.diff.add(sf.payoff - sc.payoff);
            st.ruins += sc.ruined;
            st.ruins_fine += sf.ruined;
            st.transfers += sc.transfers;
            st.transfers_fine += sf.transfers;
        }
    });
    RefinementEstimate r;
    r.coarse = to_estimate(total.payoff, total.ruins, total.transfers);
    r.fine = to_estimate(total.fine, total.ruins_fine, total.transfers_fine);
    r.diff_mean = total.diff.mean;
    r.diff_std_err = total.diff.std_err();
    return r;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DIVCTL_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

}  // namespace divctl
