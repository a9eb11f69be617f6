#include <doctest.h>

#include "divctl/config.hpp"
#include "divctl/error.hpp"

using namespace divctl;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "model": {"mu1": 4, "mu2": 2, "sigma1": 1.5, "sigma2": 1, "rho": 0.6,
            "beta": 0.5, "a": 0.3, "cbar1": 3, "cbar2": 2}
})";

std::string with(const std::string& extra) {
    std::string s = kMinimal;
    s.insert(s.rfind('}'), "," + extra);
    return s;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    const RunConfig rc = parse_run_config(kMinimal);
    CHECK(rc.model.mu1 == 4.0);
    CHECK(rc.model.cbar2 == 2.0);
    CHECK_FALSE(rc.model.gross.has_value());
    CHECK(rc.simulate.sim.n_paths == 0);
    CHECK(rc.curve.grid[2] == 0.01);
    CHECK_FALSE(rc.region.has_value());
}

TEST_CASE("optional blocks") {
    const RunConfig rc = parse_run_config(with(R"("simulate": {"paths": 10, "dt": 1e-4, "seed": 5, "x1": 0.2,
        "x2": 0.3, "origin": "ruin", "compare": ["late-dividends"]},
        "curve": {"grid": [0, 1, 0.5], "out": "c.csv"}, "region": {"x1": 1, "x2": 2},
        "verify": {"points": 50, "bruteforce_n": 101})"));
    CHECK(rc.simulate.sim.n_paths == 10);
    CHECK(rc.simulate.sim.origin == OriginRule::Ruin);
    CHECK(rc.simulate.compare.size() == 1);
    CHECK(rc.curve.grid[1] == 1.0);
    CHECK(rc.curve.out == "c.csv");
    CHECK((*rc.region)[1] == 2.0);
    CHECK(rc.verify.grid.points == 50);
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(parse_run_config("{"), SchemaError);
    CHECK_THROWS_AS(parse_run_config("[]"), SchemaError);
    CHECK_THROWS_AS(parse_run_config(with(R"("colour": "red")")), SchemaError);
    CHECK_THROWS_AS(parse_run_config(with(R"("simulate": {"pathz": 3})")), SchemaError);
    CHECK_THROWS_AS(parse_run_config(with(R"("simulate": {"paths": -3})")), SchemaError);
    CHECK_THROWS_AS(parse_run_config(with(R"("simulate": {"origin": "maybe"})")), SchemaError);
    CHECK_THROWS_AS(parse_run_config(with(R"("curve": {"grid": [0, 1]})")), SchemaError);
    std::string bad = kMinimal;
    bad.replace(bad.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
    CHECK_THROWS_AS(parse_run_config(bad), SchemaError);
    std::string missing = kMinimal;
    missing.replace(missing.find("\"beta\": 0.5, "), 13, "");
    CHECK_THROWS_AS(parse_run_config(missing), SchemaError);
    std::string typed = kMinimal;
    typed.replace(typed.find("\"rho\": 0.6"), 10, "\"rho\": \"x\"");
    CHECK_THROWS_AS(parse_run_config(typed), SchemaError);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.json"), IoError);
}
