#include "divctl/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "divctl/config.hpp"
#include "divctl/error.hpp"
#include "divctl/valuefn.hpp"

namespace divctl {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

}  // namespace

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_summary(std::ostream& os, const SolvedPolicy& p) {
    const DerivedConstants& c = p.constants;
    os << "regime: " << to_string(p.regime.tag) << '\n'
       << "scenario: " << to_string(p.scenario) << '\n'
       << "w0: " << fmt(p.w0) << '\n'
       << "u1: " << fmt(p.u1) << '\n'
       << "u2: " << fmt(p.u2) << '\n'
       << "delta0: " << fmt(p.deltas.d0) << '\n'
       << "delta1: " << fmt(p.deltas.d1) << '\n'
       << "delta2: " << fmt(p.deltas.d2) << '\n'
       << "orientation.lines_swapped: " << (p.orientation.lines_swapped ? "true" : "false") << '\n'
       << "orientation.weight_flipped: " << (p.orientation.weight_flipped ? "true" : "false") << '\n';
    const std::pair<const char*, double> consts[] = {
        {"N1", c.N1}, {"N2", c.N2}, {"N3", c.N3}, {"N4", c.N4}, {"gamma1", c.gamma1}, {"w1", c.w1},
        {"w2", c.w2}, {"gamma2_plus", c.gamma2_plus}, {"gamma2_minus", c.gamma2_minus},
        {"gamma3_plus", c.gamma3_plus}, {"gamma3_minus", c.gamma3_minus}, {"gamma4_minus", c.gamma4_minus},
        {"v_limit", c.v_limit}};
    for (const auto& [k, v] : consts) os << "constants." << k << ": " << fmt(v) << '\n';
    const std::pair<const char*, double> coeffs[] = {
        {"alpha0", p.alpha0}, {"alphaLB", p.alphaLB}, {"alphaUB", p.alphaUB},
        {"alpha2_plus", p.alpha2_plus}, {"alpha2_minus", p.alpha2_minus}, {"alpha3", p.alpha3},
        {"lambda", p.lambda}, {"alpha3_plus", p.alpha3_plus}, {"log_alpha3_plus", p.log_alpha3_plus}, {"alpha3_minus", p.alpha3_minus},
        {"k1", p.k1}, {"k2", p.k2}, {"chi_slope", p.chi_slope}, {"z_low", p.z_low}, {"z_high", p.z_high},
        {"K1", p.K1}, {"K2", p.K2}, {"gamma3", p.gamma3}};
    for (const auto& [k, v] : coeffs) os << "coeff." << k << ": " << fmt(v) << '\n';
}

std::size_t grid_rows(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
        throw RangeError("grid", "bounds and step must be finite");
    }
    if (lo < 0.0) throw RangeError("grid", "x_min must be >= 0");
    if (hi < lo) throw RangeError("grid", "x_max must be >= x_min");
    if (!(step > 0.0)) throw RangeError("grid", "step must be > 0");
    const double n = std::floor((hi - lo) / step + 1e-9);
    if (n > 1e7) throw RangeError("grid", "more than 1e7 rows requested");
    return static_cast<std::size_t>(n) + 1;
}

void write_curve(std::ostream& os, const SolvedPolicy& p, double lo, double hi, double step) {
    const std::size_t rows = grid_rows(lo, hi, step);
    os << "# regime: " << to_string(p.regime.tag) << '\n'
       << "# scenario: " << to_string(p.scenario) << '\n'
       << "# w0: " << fmt(p.w0) << '\n'
       << "# u1: " << fmt(p.u1) << '\n'
       << "# u2: " << fmt(p.u2) << '\n'
       << "# v_limit: " << fmt(p.constants.v_limit) << '\n'
       << "x,g,g_prime,g_double_prime,theta1,theta2,c1,c2\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const ValueTriple v = eval(p, x);
        const ControlDecision d = controls_at(p, x);
        os << fmt(x) << ',' << fmt(v.g) << ',' << fmt(v.g_prime) << ',' << fmt(v.g_double_prime) << ','
           << fmt(d.theta1) << ',' << fmt(d.theta2) << ',' << fmt(d.c1) << ',' << fmt(d.c2) << '\n';
    }
}

std::string report_json(const VerificationReport& r, const SolvedPolicy& p) {
    ojson j;
    j["passed"] = r.passed();
    j["policy_hash"] = r.policy_hash;
    j["scenario"] = to_string(p.scenario);
    j["regime"] = to_string(p.regime.tag);
    j["switching_points"] = {{"w0", num(p.w0)}, {"u1", num(p.u1)}, {"u2", num(p.u2)}};
    const GridSpec& g = r.grid;
    j["grid"] = {{"points", g.points}, {"bruteforce_n", g.bruteforce_n}, {"fd_points", g.fd_points},
                 {"x_max", num(r.x_max)}, {"seed", g.seed}};
    j["tolerances"] = {{"smooth", g.smooth_tol},
                       {"smooth_integral", g.smooth_tol_integral},
                       {"slope", g.slope_tol},
                       {"residual", g.residual_tol},
                       {"residual_integral", g.residual_tol_integral},
                       {"bruteforce", g.bruteforce_tol},
                       {"fd_first", g.fd_tol_first},
                       {"fd_second", g.fd_tol_second},
                       {"fd_h_first", g.fd_h_first},
                       {"fd_h_second", g.fd_h_second},
                       {"kkt", g.kkt_tol}};
    ojson gaps = ojson::array();
    for (const SmoothFitGap& s : r.smooth_fit_gaps) {
        gaps.push_back({{"point", s.point}, {"x", num(s.x)}, {"value", s.value}, {"first", s.first},
                        {"second", s.second}, {"tolerance", s.tolerance}, {"pass", s.pass}});
    }
    j["smooth_fit"] = gaps;
    j["slope_gap_u1"] = r.slope_gap_u1;
    j["slope_gap_u2"] = r.slope_gap_u2;
    j["monotone"] = r.monotone;
    j["concave"] = r.concave;
    j["bounded"] = r.bounded;
    j["theta_positive"] = r.theta_positive;
    j["tail_gap"] = r.tail_gap;
    j["max_hjb_residual"] = r.max_hjb_residual_at_optimum;
    j["max_hjb_residual_integral"] = r.max_hjb_residual_integral;
    j["max_bruteforce_violation"] = r.max_bruteforce_violation;
    j["max_kkt_violation"] = r.max_kkt_violation;
    j["fd_max_rel_error_first"] = r.fd_max_rel_error;
    j["fd_max_rel_error_second"] = r.fd_max_rel_error_second;
    j["failures"] = r.failures;
    return j.dump(2) + "\n";
}

void write_region(std::ostream& os, const SolvedPolicy& p, double x1, double x2) {
    os << "x1: " << fmt(x1) << '\n' << "x2: " << fmt(x2) << '\n';
    os << "region: " << to_string(region_of(p, x1, x2)) << '\n';
    for (int line = 1; line <= 2; ++line) {
        // A hit of line k moves its reserve into the other line first.
        const double h1 = line == 1 ? 0.0 : x1 + x2;
        const double h2 = line == 1 ? x1 + x2 : 0.0;
        const InjectionAction ruin = injection_on_hit(p, h1, h2, line, OriginRule::Ruin);
        const InjectionAction rescue = injection_on_hit(p, h1, h2, line, OriginRule::Rescue);
        os << "hit_line" << line << ".action: " << to_string(ruin.kind) << '\n'
           << "hit_line" << line << ".amount: " << fmt(ruin.amount) << '\n'
           << "hit_line" << line << ".after: (" << fmt(ruin.x1_after) << ", " << fmt(ruin.x2_after) << ")\n";
        if (rescue.kind != ruin.kind) {
            os << "hit_line" << line << ".rescue_action: " << to_string(rescue.kind) << '\n'
               << "hit_line" << line << ".rescue_after: (" << fmt(rescue.x1_after) << ", "
               << fmt(rescue.x2_after) << ")\n";
        }
    }
}

void write_simulation(std::ostream& os, const SolvedPolicy& p, const SimConfig& cfg,
                      const std::vector<RuleEstimate>& rows) {
    const double x = cfg.x1_0 + cfg.x2_0;
    const double g = eval(p, x).g;
    os << "x1: " << fmt(cfg.x1_0) << '\n'
       << "x2: " << fmt(cfg.x2_0) << '\n'
       << "paths: " << cfg.n_paths << '\n'
       << "dt: " << fmt(cfg.dt) << '\n'
       << "horizon: " << fmt(cfg.horizon) << '\n'
       << "seed: " << cfg.seed << '\n'
       << "origin: " << to_string(cfg.origin) << '\n'
       << "g(x1+x2): " << fmt(g) << '\n';
    char line[256];
    for (const RuleEstimate& r : rows) {
        const double z = r.est.std_err > 0.0 ? (r.est.mean - g) / r.est.std_err : 0.0;
        std::snprintf(line, sizeof line,
                      "rule %-30s mean %.6f +- %.6f  z %+.3f  ruin %.4f  transfers/path %.3f\n",
                      r.rule.c_str(), r.est.mean, r.est.std_err, z, r.est.ruin_fraction,
                      r.est.transfers_per_path);
        os << line;
    }
}

}  // namespace divctl
