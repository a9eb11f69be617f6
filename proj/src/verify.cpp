#include "divctl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>

#include "divctl/error.hpp"

namespace divctl {

namespace {

struct Hamiltonian {
    double mu1, mu2, s1, s2, rho, beta, a;

    double operator()(const ValueTriple& v, double t1, double t2, double c1, double c2) const {
        const double r1 = 1.0 - t1, r2 = 1.0 - t2;
        const double drift = r1 * mu1 + r2 * mu2 - c1 - c2;
        const double var = r1 * r1 * s1 * s1 + r2 * r2 * s2 * s2 + 2.0 * rho * r1 * r2 * s1 * s2;
        return -beta * v.g + a * c1 + (1.0 - a) * c2 + drift * v.g_prime + 0.5 * var * v.g_double_prime;
    }
};

Hamiltonian hamiltonian_of(const SolvedPolicy& p) {
    const ModelParams& m = p.params;
    return {m.mu1, m.mu2, m.sigma1, m.sigma2, m.rho, m.beta, m.a};
}

double rel_gap(double l, double r) {
    return std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)});
}

struct Segment {
    Branch branch;
    double lo, hi;
};

std::vector<Segment> nonempty_segments(const SolvedPolicy& p) {
    const BranchLayout l = layout(p);
    std::vector<Segment> out;
    for (std::size_t i = 0; i < l.branches.size(); ++i) {
        const double lo = l.lower[i];
        const double hi = i + 1 < l.lower.size() ? l.lower[i + 1] : std::numeric_limits<double>::infinity();
        if (hi > lo) out.push_back({l.branches[i], lo, hi});
    }
    return out;
}

const char* point_name(const SolvedPolicy& p, double x) {
    if (x == p.u2) return "u2";
    if (x == p.u1) return "u1";
    if (x == p.w0) return "w0";
    return "?";
}

void fnv(std::uint64_t& h, double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
}

}  // namespace

double hjb_residual(const SolvedPolicy& p, double x, const ControlDecision& d) {
    if (!(x > 0.0)) throw DomainError("HJB residual needs x > 0 (g'' is singular at the origin)");
    return hamiltonian_of(p)(eval(p, x), d.theta1, d.theta2, d.c1, d.c2);
}

BruteForceResult bruteforce_sup_check(const SolvedPolicy& p, double x, int grid_n) {
    if (grid_n < 2) throw PreconditionError("grid_n must be at least 2");
    const Hamiltonian h = hamiltonian_of(p);
    const ValueTriple v = eval(p, x);
    const ControlDecision opt = controls_at(p, x);
    const double at_opt = h(v, opt.theta1, opt.theta2, opt.c1, opt.c2);

    BruteForceResult r;
    r.grid_max = -std::numeric_limits<double>::infinity();
    const double caps1[2] = {0.0, p.params.cbar1};
    const double caps2[2] = {0.0, p.params.cbar2};
    const double step = 1.0 / (grid_n - 1);
    for (double c1 : caps1) {
        for (double c2 : caps2) {
            for (int i = 0; i < grid_n; ++i) {
                const double t1 = i * step;
                for (int j = 0; j < grid_n; ++j) {
                    const double t2 = j * step;
                    const double val = h(v, t1, t2, c1, c2);
                    if (val > r.grid_max) {
                        r.grid_max = val;
                        r.theta1 = t1;
                        r.theta2 = t2;
                        r.c1 = c1;
                        r.c2 = c2;
                    }
                }
            }
        }
    }
    r.excess = r.grid_max - at_opt;
    return r;
}

std::string policy_hash(const SolvedPolicy& p) {
    std::uint64_t h = 1469598103934665603ULL;
    const double fields[] = {p.w0, p.u1, p.u2, p.alpha3_plus, p.alpha3_minus, p.lambda, p.k1, p.k2,
                             p.K1, p.K2, p.gamma3, p.params.mu1, p.params.mu2, p.params.sigma1,
                             p.params.sigma2, p.params.rho, p.params.beta, p.params.a,
                             p.params.cbar1, p.params.cbar2};
    for (double f : fields) fnv(h, f);
    fnv(h, static_cast<double>(static_cast<int>(p.scenario)));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

VerificationReport run_battery(const SolvedPolicy& p, const GridSpec& grid) {
    VerificationReport rep;
    rep.grid = grid;
    rep.policy_hash = policy_hash(p);
    const double gt = tail_exponent(p);
    rep.x_max = grid.x_max > 0.0 ? grid.x_max : p.u2 + 30.0 / std::abs(gt);
    const double a = p.effective.a;
    const double v_limit = p.constants.v_limit;
    const Hamiltonian ham = hamiltonian_of(p);
    auto fail = [&](const std::string& what) { rep.failures.push_back(what); };
    char msg[256];

    // Smooth fit between consecutive non-empty branches.
    const std::vector<Segment> segs = nonempty_segments(p);
    for (std::size_t i = 1; i < segs.size(); ++i) {
        const double s = segs[i].lo;
        SmoothFitGap gap;
        gap.point = point_name(p, s);
        gap.x = s;
        const ValueTriple l = eval_branch(p, segs[i - 1].branch, s);
        const ValueTriple r = eval_branch(p, segs[i].branch, s);
        gap.value = rel_gap(l.g, r.g);
        gap.first = rel_gap(l.g_prime, r.g_prime);
        gap.second = rel_gap(l.g_double_prime, r.g_double_prime);
        const bool integral = segs[i - 1].branch == Branch::Integral || segs[i].branch == Branch::Integral;
        gap.tolerance = integral ? grid.smooth_tol_integral : grid.smooth_tol;
        gap.pass = gap.value <= gap.tolerance && gap.first <= gap.tolerance && gap.second <= gap.tolerance;
        if (!gap.pass) {
            std::snprintf(msg, sizeof msg, "smooth fit at %s: gaps (%.3e, %.3e, %.3e) > %.1e",
                          gap.point.c_str(), gap.value, gap.first, gap.second, gap.tolerance);
            fail(msg);
        }
        rep.smooth_fit_gaps.push_back(gap);
    }

    // Defining slopes at the dividend thresholds.
    rep.slope_gap_u1 = std::abs(eval(p, p.u1).g_prime - (1.0 - a));
    rep.slope_gap_u2 = std::abs(eval(p, p.u2).g_prime - a);
    if (rep.slope_gap_u1 > grid.slope_tol) fail("g'(u1) differs from 1-a");
    if (rep.slope_gap_u2 > grid.slope_tol) fail("g'(u2) differs from a");

    // Grid sweep: shape, residual at the analytic controls, brute force, KKT.
    rep.monotone = rep.concave = rep.bounded = true;
    for (int k = 1; k <= grid.points; ++k) {
        const double x = rep.x_max * k / grid.points;
        const ValueTriple v = eval(p, x);
        if (!(v.g_prime > 0.0)) rep.monotone = false;
        if (!(v.g_double_prime < 0.0)) rep.concave = false;
        if (!(v.g < v_limit)) rep.bounded = false;

        const ControlDecision d = controls_at(p, x);
        if (p.scenario == Scenario::T3_NoW0 && !(d.theta1 > 0.0 && d.theta2 > 0.0)) rep.theta_positive = false;

        const double res = std::abs(ham(v, d.theta1, d.theta2, d.c1, d.c2)) / (1.0 + v.g);
        const bool integral = branch_at(p, x) == Branch::Integral;
        if (integral) {
            rep.max_hjb_residual_integral = std::max(rep.max_hjb_residual_integral, res);
        } else {
            rep.max_hjb_residual_at_optimum = std::max(rep.max_hjb_residual_at_optimum, res);
        }

        const BruteForceResult bf = bruteforce_sup_check(p, x, grid.bruteforce_n);
        rep.max_bruteforce_violation = std::max(rep.max_bruteforce_violation, bf.excess);

        // Coordinatewise KKT conditions of the reinsurance maximization.
        const ModelParams& m = p.params;
        const double r1 = 1.0 - d.theta1, r2 = 1.0 - d.theta2;
        const double d1 = -m.mu1 * v.g_prime - (r1 * m.sigma1 * m.sigma1 + m.rho * r2 * m.sigma1 * m.sigma2) * v.g_double_prime;
        const double d2 = -m.mu2 * v.g_prime - (r2 * m.sigma2 * m.sigma2 + m.rho * r1 * m.sigma1 * m.sigma2) * v.g_double_prime;
        const double sc1 = m.mu1 * v.g_prime + (m.sigma1 * m.sigma1 + std::abs(m.rho) * m.sigma1 * m.sigma2) * std::abs(v.g_double_prime);
        const double sc2 = m.mu2 * v.g_prime + (m.sigma2 * m.sigma2 + std::abs(m.rho) * m.sigma1 * m.sigma2) * std::abs(v.g_double_prime);
        auto kkt = [](double theta, double grad, double scale) {
            if (theta <= 0.0) return std::max(0.0, grad) / scale;
            if (theta >= 1.0) return std::max(0.0, -grad) / scale;
            return std::abs(grad) / scale;
        };
        rep.max_kkt_violation = std::max({rep.max_kkt_violation, kkt(d.theta1, d1, sc1), kkt(d.theta2, d2, sc2)});
    }
    if (!rep.monotone) fail("g' is not positive on the grid");
    if (!rep.concave) fail("g'' is not negative on the grid");
    if (!rep.bounded) fail("g reaches v_limit on the grid");
    if (!rep.theta_positive) fail("T3 requires theta_i* > 0 everywhere");
    if (rep.max_hjb_residual_at_optimum > grid.residual_tol) fail("HJB residual above tolerance on closed-form branches");
    if (rep.max_hjb_residual_integral > grid.residual_tol_integral) fail("HJB residual above tolerance on the integral branch");
    if (rep.max_bruteforce_violation > grid.bruteforce_tol) fail("brute-force grid beats the analytic controls");
    if (rep.max_kkt_violation > grid.kkt_tol) fail("reinsurance KKT conditions violated");

    // The tail must match v_limit + (a/gt) e^{gt (x - u2)} and stay below v_limit.
    {
        const double x = rep.x_max;
        const double expect = v_limit + a / gt * std::exp(gt * (x - p.u2));
        rep.tail_gap = std::abs(eval(p, x).g - expect);
        if (rep.tail_gap > 1e-12 * v_limit) fail("tail does not follow the analytic exponential");
    }

    // Finite differences at random points away from the switching points.
    {
        std::vector<double> switches;
        for (const Segment& s : segs) {
            if (s.lo > 0.0) switches.push_back(s.lo);
        }
        const double x_lo = 0.2 * segs.at(1).lo;
        const double x_hi = p.u2 + 5.0 / std::abs(gt);
        std::mt19937_64 rng(grid.seed);
        std::uniform_real_distribution<double> unif(x_lo, x_hi);
        const double h1 = grid.fd_h_first, h2 = grid.fd_h_second;
        int accepted = 0;
        for (int tries = 0; accepted < grid.fd_points && tries < 100 * grid.fd_points; ++tries) {
            const double x = unif(rng);
            bool near = false;
            for (double s : switches) near = near || std::abs(x - s) < 10.0 * h2;
            if (near) continue;
            ++accepted;
            const ValueTriple v = eval(p, x);
            const double fd1 = (eval(p, x + h1).g - eval(p, x - h1).g) / (2.0 * h1);
            const double fd2 = (eval(p, x + h2).g - 2.0 * v.g + eval(p, x - h2).g) / (h2 * h2);
            rep.fd_max_rel_error = std::max(rep.fd_max_rel_error, std::abs(fd1 - v.g_prime) / std::abs(v.g_prime));
            rep.fd_max_rel_error_second =
                std::max(rep.fd_max_rel_error_second, std::abs(fd2 - v.g_double_prime) / std::abs(v.g_double_prime));
        }
        if (rep.fd_max_rel_error > grid.fd_tol_first) fail("finite-difference g' mismatch");
        if (rep.fd_max_rel_error_second > grid.fd_tol_second) fail("finite-difference g'' mismatch");
    }
    return rep;
}

}  // namespace divctl
