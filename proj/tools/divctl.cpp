// divctl: solve, tabulate, verify and simulate the two-line dividend /
// reinsurance / capital-injection policy from a JSON run configuration.
//
// Exit codes: 0 ok, 1 verification failure, 2 validation, 3 solver,
// 4 I/O, 5 simulation config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divctl/config.hpp"
#include "divctl/error.hpp"
#include "divctl/report.hpp"
#include "divctl/sim.hpp"
#include "divctl/solver.hpp"
#include "divctl/verify.hpp"

namespace {

using namespace divctl;

enum Exit { kOk = 0, kVerifyFailed = 1, kValidation = 2, kSolver = 3, kIo = 4, kSimConfig = 5 };

struct Options {
    std::string config;
    std::string out;
    std::string grid;
    std::uint64_t seed = 0;
    std::uint64_t paths = 0;
    double dt = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    std::string origin;
    std::vector<std::string> rules;
    double perturb_u2 = 0.0;  // test hook: shifts u2 after solving
};

// Writes to --out if given, stdout otherwise.
void emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << body;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::array<double, 3> parse_grid(const std::string& s) {
    std::array<double, 3> g{};
    std::istringstream in(s);
    std::string part;
    int k = 0;
    while (std::getline(in, part, ':')) {
        if (k == 3) throw RangeError("grid", "expected MIN:MAX:STEP, got '" + s + "'");
        try {
            std::size_t used = 0;
            g[k] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw RangeError("grid", "cannot parse '" + part + "' as a number");
        }
        ++k;
    }
    if (k != 3) throw RangeError("grid", "expected MIN:MAX:STEP, got '" + s + "'");
    return g;
}

int cmd_solve(const RunConfig& rc, const Options& o) {
    const SolvedPolicy p = solve(rc.model);
    std::ostringstream os;
    if (!rc.name.empty()) os << "name: " << rc.name << '\n';
    write_summary(os, p);
    emit(o.out, os.str());
    return kOk;
}

int cmd_curve(const RunConfig& rc, const Options& o, bool grid_given) {
    const SolvedPolicy p = solve(rc.model);
    const std::array<double, 3> g = grid_given ? parse_grid(o.grid) : rc.curve.grid;
    std::ostringstream os;
    write_curve(os, p, g[0], g[1], g[2]);
    emit(o.out.empty() ? rc.curve.out : o.out, os.str());
    return kOk;
}

int cmd_verify(const RunConfig& rc, const Options& o) {
    SolvedPolicy p = solve(rc.model);
    if (o.perturb_u2 != 0.0) p.u2 += o.perturb_u2;
    const VerificationReport r = run_battery(p, rc.verify.grid);
    const std::string out = o.out.empty() ? rc.verify.out : o.out;
    emit(out, report_json(r, p));
    if (!out.empty()) {
        std::cout << "verification: " << (r.passed() ? "PASS" : "FAIL") << '\n';
        for (const std::string& f : r.failures) std::cout << "  " << f << '\n';
    }
    return r.passed() ? kOk : kVerifyFailed;
}

int cmd_simulate(const RunConfig& rc, const Options& o, const CLI::App& sub) {
    const SolvedPolicy p = solve(rc.model);
    SimConfig cfg = rc.simulate.sim;
    if (sub.count("--seed")) cfg.seed = o.seed;
    if (sub.count("--paths")) cfg.n_paths = o.paths;
    if (sub.count("--dt")) cfg.dt = o.dt;
    if (sub.count("--x1")) cfg.x1_0 = o.x1;
    if (sub.count("--x2")) cfg.x2_0 = o.x2;
    if (sub.count("--origin")) cfg.origin = parse_origin(o.origin);
    cfg = resolve(cfg, p);

    std::vector<std::string> names{"optimal"};
    const std::vector<std::string>& extra = sub.count("--rule") ? o.rules : rc.simulate.compare;
    names.insert(names.end(), extra.begin(), extra.end());

    std::vector<RuleEstimate> rows;
    for (const std::string& n : names) {
        const auto rule = make_rule(n, p);
        rows.push_back({n, estimate_value(p, *rule, cfg)});
    }
    std::ostringstream os;
    write_simulation(os, p, cfg, rows);
    emit(o.out, os.str());
    return kOk;
}

int cmd_region(const RunConfig& rc, const Options& o, const CLI::App& sub) {
    const SolvedPolicy p = solve(rc.model);
    double x1 = o.x1, x2 = o.x2;
    if (!sub.count("--x1") || !sub.count("--x2")) {
        if (!rc.region) throw RangeError("x1", "region needs --x1 and --x2 or a region block in the config");
        x1 = sub.count("--x1") ? o.x1 : (*rc.region)[0];
        x2 = sub.count("--x2") ? o.x2 : (*rc.region)[1];
    }
    if (!(x1 >= 0.0)) throw RangeError("x1", "must be >= 0");
    if (!(x2 >= 0.0)) throw RangeError("x2", "must be >= 0");
    std::ostringstream os;
    write_region(os, p, x1, x2);
    emit(o.out, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal dividends, reinsurance and capital injection for two collaborating lines"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config, "Run configuration (JSON)")->required();
        s->add_option("--out", o.out, "Output file (default: stdout)");
    };
    CLI::App* solve_cmd = app.add_subcommand("solve", "Print the solved policy");
    CLI::App* curve_cmd = app.add_subcommand("curve", "Tabulate g, its derivatives and the controls as CSV");
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the verification battery");
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the value");
    CLI::App* region_cmd = app.add_subcommand("region", "Capital-injection region of a state");
    for (CLI::App* s : {solve_cmd, curve_cmd, verify_cmd, sim_cmd, region_cmd}) common(s);

    curve_cmd->add_option("--grid", o.grid, "MIN:MAX:STEP");
    verify_cmd->add_option("--perturb-u2", o.perturb_u2)->group("");
    sim_cmd->add_option("--seed", o.seed, "RNG seed");
    sim_cmd->add_option("--paths", o.paths, "Number of paths");
    sim_cmd->add_option("--dt", o.dt, "Euler step");
    sim_cmd->add_option("--origin", o.origin, "A7 hit rule: rescue or ruin");
    sim_cmd->add_option("--rule", o.rules, "Comparison rule (repeatable)");
    for (CLI::App* s : {sim_cmd, region_cmd}) {
        s->add_option("--x1", o.x1, "Line-1 surplus");
        s->add_option("--x2", o.x2, "Line-2 surplus");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        const RunConfig rc = load_run_config(o.config);
        if (solve_cmd->parsed()) return cmd_solve(rc, o);
        if (curve_cmd->parsed()) return cmd_curve(rc, o, curve_cmd->count("--grid") > 0);
        if (verify_cmd->parsed()) return cmd_verify(rc, o);
        if (sim_cmd->parsed()) return cmd_simulate(rc, o, *sim_cmd);
        return cmd_region(rc, o, *region_cmd);
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const InconsistentGross& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSimConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    }
}
