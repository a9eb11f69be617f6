#include "divctl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "divctl/error.hpp"

namespace divctl {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw SchemaError("unknown key '" + it.key() + "' in " + where);
    }
}

const json& object_at(const json& parent, const char* key, const std::string& where) {
    const json& v = parent.at(key);
    if (!v.is_object()) throw SchemaError(where + "." + key + " must be an object");
    return v;
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw SchemaError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::uint64_t count(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw SchemaError(where + "." + key + " must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw SchemaError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

template <typename T, typename F>
void optional_field(const json& obj, const char* key, T& dst, F read) {
    if (obj.contains(key)) dst = read(obj, key);
}

ModelParams read_model(const json& m) {
    reject_unknown(m, "model", {"mu1", "mu2", "sigma1", "sigma2", "rho", "beta", "a", "cbar1", "cbar2", "gross"});
    ModelParams p;
    const std::string w = "model";
    p.mu1 = number(m, "mu1", w);
    p.mu2 = number(m, "mu2", w);
    p.sigma1 = number(m, "sigma1", w);
    p.sigma2 = number(m, "sigma2", w);
    p.rho = number(m, "rho", w);
    p.beta = number(m, "beta", w);
    p.a = number(m, "a", w);
    p.cbar1 = number(m, "cbar1", w);
    p.cbar2 = number(m, "cbar2", w);
    if (m.contains("gross")) {
        const json& g = object_at(m, "gross", w);
        reject_unknown(g, "model.gross", {"tilde_mu1", "tilde_mu2", "kappa1", "kappa2"});
        GrossBlock b;
        b.tilde_mu1 = number(g, "tilde_mu1", "model.gross");
        b.tilde_mu2 = number(g, "tilde_mu2", "model.gross");
        b.kappa1 = number(g, "kappa1", "model.gross");
        b.kappa2 = number(g, "kappa2", "model.gross");
        p.gross = b;
    }
    return p;
}

}  // namespace

OriginRule parse_origin(const std::string& s) {
    if (s == "rescue") return OriginRule::Rescue;
    if (s == "ruin") return OriginRule::Ruin;
    throw SchemaError("origin must be \"rescue\" or \"ruin\", got \"" + s + "\"");
}

const char* to_string(OriginRule r) { return r == OriginRule::Rescue ? "rescue" : "ruin"; }

RunConfig parse_run_config(const std::string& src) {
    json doc;
    try {
        doc = json::parse(src);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("config root must be an object");

    try {
        reject_unknown(doc, "config", {"schema_version", "name", "model", "curve", "simulate", "verify", "region"});
        RunConfig rc;
        if (!doc.contains("schema_version")) throw SchemaError("missing schema_version");
        const json& ver = doc.at("schema_version");
        if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
            throw SchemaError("unsupported schema_version " + ver.dump() + " (expected " +
                              std::to_string(kSchemaVersion) + ")");
        }
        if (doc.contains("name")) rc.name = text(doc, "name", "config");
        rc.model = read_model(object_at(doc, "model", "config"));

        if (doc.contains("curve")) {
            const json& c = object_at(doc, "curve", "config");
            reject_unknown(c, "curve", {"grid", "out"});
            if (c.contains("grid")) {
                const json& g = c.at("grid");
                if (!g.is_array() || g.size() != 3 || !g[0].is_number() || !g[1].is_number() || !g[2].is_number()) {
                    throw SchemaError("curve.grid must be [min, max, step]");
                }
                rc.curve.grid = {g[0].get<double>(), g[1].get<double>(), g[2].get<double>()};
            }
            optional_field(c, "out", rc.curve.out, [](const json& o, const char* k) { return text(o, k, "curve"); });
        }

        if (doc.contains("simulate")) {
            const json& s = object_at(doc, "simulate", "config");
            const std::string w = "simulate";
            reject_unknown(s, w, {"paths", "dt", "horizon", "seed", "x1", "x2", "origin", "threads", "compare"});
            SimConfig& sc = rc.simulate.sim;
            auto num = [&](const json& o, const char* k) { return number(o, k, w); };
            auto cnt = [&](const json& o, const char* k) { return count(o, k, w); };
            optional_field(s, "paths", sc.n_paths, cnt);
            optional_field(s, "dt", sc.dt, num);
            optional_field(s, "horizon", sc.horizon, num);
            optional_field(s, "seed", sc.seed, cnt);
            optional_field(s, "x1", sc.x1_0, num);
            optional_field(s, "x2", sc.x2_0, num);
            if (s.contains("threads")) sc.threads = static_cast<unsigned>(cnt(s, "threads"));
            if (s.contains("origin")) sc.origin = parse_origin(text(s, "origin", w));
            if (s.contains("compare")) {
                const json& c = s.at("compare");
                if (!c.is_array()) throw SchemaError("simulate.compare must be an array of rule names");
                for (const json& r : c) {
                    if (!r.is_string()) throw SchemaError("simulate.compare entries must be strings");
                    rc.simulate.compare.push_back(r.get<std::string>());
                }
            }
        }

        if (doc.contains("verify")) {
            const json& v = object_at(doc, "verify", "config");
            const std::string w = "verify";
            reject_unknown(v, w, {"points", "bruteforce_n", "fd_points", "x_max", "seed", "out"});
            GridSpec& g = rc.verify.grid;
            auto num = [&](const json& o, const char* k) { return number(o, k, w); };
            auto cnt = [&](const json& o, const char* k) { return count(o, k, w); };
            if (v.contains("points")) g.points = static_cast<int>(cnt(v, "points"));
            if (v.contains("bruteforce_n")) g.bruteforce_n = static_cast<int>(cnt(v, "bruteforce_n"));
            if (v.contains("fd_points")) g.fd_points = static_cast<int>(cnt(v, "fd_points"));
            optional_field(v, "x_max", g.x_max, num);
            optional_field(v, "seed", g.seed, cnt);
            optional_field(v, "out", rc.verify.out, [&](const json& o, const char* k) { return text(o, k, w); });
        }

        if (doc.contains("region")) {
            const json& r = object_at(doc, "region", "config");
            reject_unknown(r, "region", {"x1", "x2"});
            rc.region = std::array<double, 2>{number(r, "x1", "region"), number(r, "x2", "region")};
        }
        return rc;
    } catch (const json::out_of_range& e) {
        throw SchemaError(std::string("missing required key: ") + e.what());
    } catch (const json::type_error& e) {
        throw SchemaError(std::string("wrong value type: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace divctl
