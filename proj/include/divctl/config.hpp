#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "divctl/params.hpp"
#include "divctl/sim.hpp"
#include "divctl/verify.hpp"

namespace divctl {

inline constexpr int kSchemaVersion = 1;

struct CurveOptions {
    std::array<double, 3> grid{0.0, 4.0, 0.01};  // min, max, step
    std::string out;                             // empty: stdout
};

struct SimulateOptions {
    SimConfig sim;
    std::vector<std::string> compare;  // extra rules to estimate next to the optimum
};

struct VerifyOptions {
    GridSpec grid;
    std::string out;  // report path; empty: stdout
};

// One run configuration file. Every block except "model" is optional; the
// CLI flags override the fields they name.
struct RunConfig {
    int schema_version = kSchemaVersion;
    std::string name;
    ModelParams model;
    CurveOptions curve;
    SimulateOptions simulate;
    VerifyOptions verify;
    std::optional<std::array<double, 2>> region;  // (x1, x2)
};

// Parses the JSON text. Throws SchemaError on malformed documents, unknown
// keys, wrong types or an unsupported schema_version. Parameter ranges are
// not checked here; that is validate()'s job.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);  // IoError if unreadable

OriginRule parse_origin(const std::string& s);
const char* to_string(OriginRule r);

}  // namespace divctl
