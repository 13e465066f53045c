#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ldev/checks.hpp"
#include "ldev/error.hpp"
#include "embedded_tolerances.hpp"

namespace ldev::cli {

struct ToleranceConfig {
    int version = 0;
    std::string source;
    Tolerances values;
};

/// Reads {"version": int, "tolerances": {name: value}}; unknown names are
/// rejected so that a typo cannot silently leave a default in place.
inline ToleranceConfig parse_tolerances(const std::string& text, const std::string& source)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_parameter("tolerance config " + source + ": " + e.what());
    }
    ToleranceConfig cfg;
    cfg.source = source;
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw invalid_parameter("tolerance config " + source + ": integer 'version' required");
    cfg.version = j["version"].get<int>();
    if (!j.contains("tolerances") || !j["tolerances"].is_object())
        throw invalid_parameter("tolerance config " + source + ": object 'tolerances' required");
    Tolerances& t = cfg.values;
    const std::pair<const char*, double*> fields[] = {
        {"rates", &t.rates},
        {"fluctuation", &t.fluctuation},
        {"normalization_beta2", &t.normalization_beta2},
        {"normalization_beta1", &t.normalization_beta1},
        {"brute_force", &t.brute_force},
        {"table_beta2", &t.table_beta2},
        {"table_laguerre_beta1", &t.table_laguerre_beta1},
        {"table_jacobi_beta1", &t.table_jacobi_beta1},
        {"scaling", &t.scaling},
        {"bulk_z", &t.bulk_z},
        {"hard_edge_slope", &t.hard_edge_slope},
    };
    for (const auto& [key, value] : j["tolerances"].items()) {
        bool known = false;
        for (const auto& [name, slot] : fields) {
            if (key != name) continue;
            if (!value.is_number() || !(value.get<double>() >= 0.0))
                throw invalid_parameter("tolerance config " + source + ": '" + key + "' must be a nonnegative number");
            *slot = value.get<double>();
            known = true;
        }
        if (!known) throw invalid_parameter("tolerance config " + source + ": unknown tolerance '" + key + "'");
    }
    return cfg;
}

inline ToleranceConfig embedded_tolerances() { return parse_tolerances(kEmbeddedTolerances, "embedded"); }

inline ToleranceConfig load_tolerances(const std::string& path)
{
    if (path.empty()) return embedded_tolerances();
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot read tolerance config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tolerances(ss.str(), path);
}

} // namespace ldev::cli
