#pragma once

// Run configuration: a flat JSON object, overridable key by key.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dampkit/io.hpp"
#include "dampkit/models.hpp"

namespace dampkit {

struct RunConfig {
    std::string command = "validate";
    ModelConfig model;
    std::string kind;          // generator kind for propagate/lindblad; empty: native
    std::string from;          // convert source; empty: native
    std::string to = "red";    // convert target
    std::string output_dir;    // empty: $DAMPKIT_OUTPUT_DIR or "dampkit_out"
    std::uint64_t seed = 20240501;
    int resolution = 60;
    std::vector<double> times{0.0, 1.0, 3.0, 20.0};
    double scan_dt = 0.01;
    double horizon = 20.0;
    int threads = 0;
    int record_every = 1;
    std::vector<double> snapshot_times{0.5, 1.0, 2.0};
    bool full_matrices = false;
    // Per-check overrides; the key "all" applies to every check.
    std::map<std::string, double> tolerances;
};

RunConfig default_config();

Json config_to_json(const RunConfig& c);
// Keys absent from j keep their value in base. Unknown keys throw InvalidArgument.
RunConfig config_from_json(const Json& j, const RunConfig& base = default_config());
RunConfig load_config(const std::string& path, const RunConfig& base = default_config());

// String override for a single key, e.g. ("x", "0.2,0.3,0.5") or ("tol.all", "1e-6").
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);

// Explicit override, then "all", then fallback.
double tolerance_for(const RunConfig& c, const std::string& check, double fallback);

std::string resolved_output_dir(const RunConfig& c);

} // namespace dampkit
