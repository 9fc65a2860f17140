// dampkit command-line front end. Talks to the library only through dampkit.h.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dampkit/dampkit.h"

namespace {

enum Exit { kOk = 0, kValidation = 1, kUsage = 2, kNumerical = 3 };

int exit_code(dk_status s)
{
    switch (s) {
    case DK_OK: return kOk;
    case DK_ERR_VALIDATION_FAILED: return kValidation;
    case DK_ERR_INVALID_ARGUMENT:
    case DK_ERR_UNKNOWN_MODEL:
    case DK_ERR_IO: return kUsage;
    default: return kNumerical;
    }
}

int report_error(dk_status s)
{
    nlohmann::ordered_json j;
    j["error"] = {{"status", dk_status_name(s)}, {"code", static_cast<int>(s)}, {"message", dk_last_error()},
                  {"exit_code", exit_code(s)}};
    std::cout << j.dump(2) << std::endl;
    return exit_code(s);
}

struct Overrides {
    std::map<std::string, std::string> values;
    std::vector<std::string> tolerances;
};

void add_options(CLI::App& app, Overrides& o)
{
    struct Spec {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const Spec specs[] = {
        {"--model", "model", "model id or alias (ex1, ex2, ex3, ex3bar, ex4, qutrit)"},
        {"--profile", "profile", "time profile of the model"},
        {"--amplitude", "amplitude", "scale of gamma(t) or k(t)"},
        {"--x", "x", "simplex point x1,x2,x3 for ex4"},
        {"--t-end", "t_end", "final time"},
        {"--n-steps", "n_steps", "number of time steps"},
        {"--kind", "kind", "generator kind for propagate/lindblad (tcl, nz, red)"},
        {"--from", "from", "source kind for convert"},
        {"--to", "to", "target kind for convert"},
        {"--output-dir,-o", "output_dir", "output directory (default $DAMPKIT_OUTPUT_DIR or ./dampkit_out)"},
        {"--seed", "seed", "seed for randomized checks"},
        {"--resolution", "resolution", "simplex grid resolution for scan"},
        {"--times", "times", "comma-separated scan times"},
        {"--scan-dt", "scan_dt", "time step of the scan"},
        {"--horizon", "horizon", "scan horizon"},
        {"--threads", "threads", "scan worker threads (0: hardware)"},
        {"--record-every", "record_every", "keep every n-th propagated map"},
        {"--snapshot-times", "snapshot_times", "comma-separated times for lindblad snapshots"},
        {"--full-matrices", "full_matrices", "also write full map matrices (true/false)"},
    };
    for (const auto& s : specs) {
        const std::string key = s.key;
        app.add_option_function<std::string>(
            s.flag, [&o, key](const std::string& v) { o.values[key] = v; }, s.help);
    }
    app.add_option("--tol", o.tolerances, "tolerance override name=value (name 'all' sets every check)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interconvert, propagate and analyse commutative open-system dynamics"};
    app.set_version_flag("--version", std::string(dk_version()));
    Overrides overrides;
    std::string config_path;
    bool print_config = false;
    app.add_option("--config,-c", config_path, "flat JSON configuration file")->check(CLI::ExistingFile);
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");
    add_options(app, overrides);
    app.require_subcommand(0, 1);
    app.fallthrough();

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"convert", "convert eigen-signals between TCL, NZ and Redfield-like descriptions"},
        {"propagate", "propagate the dynamical map"},
        {"lindblad", "canonical Lindblad form along the trajectory"},
        {"divisibility", "CP and P divisibility of exact and Redfield-like dynamics"},
        {"scan", "random-dephasing divisibility region scan"},
        {"validate", "run the invariant suite on the model zoo"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    dk_config* cfg = nullptr;
    dk_status st = config_path.empty() ? dk_config_new(&cfg) : dk_config_load(config_path.c_str(), &cfg);
    if (st != DK_OK) return report_error(st);

    auto set = [&](const std::string& key, const std::string& value) {
        const dk_status s = dk_config_set(cfg, key.c_str(), value.c_str());
        if (s != DK_OK) throw s;
    };
    try {
        if (!app.get_subcommands().empty()) set("command", app.get_subcommands().front()->get_name());
        for (const auto& [k, v] : overrides.values) {
            if (k != "x") set(k, v);
        }
        // x last so --model ex4 --x ... and the reverse order both work
        if (auto it = overrides.values.find("x"); it != overrides.values.end()) set("x", it->second);
        for (const auto& t : overrides.tolerances) {
            const auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::cerr << "--tol expects name=value, got '" << t << "'\n";
                dk_config_free(cfg);
                return kUsage;
            }
            set("tol." + t.substr(0, eq), t.substr(eq + 1));
        }
    } catch (dk_status s) {
        const int rc = report_error(s);
        dk_config_free(cfg);
        return rc;
    }

    if (print_config) {
        char* json = nullptr;
        st = dk_config_to_json(cfg, &json);
        dk_config_free(cfg);
        if (st != DK_OK) return report_error(st);
        std::cout << json << std::endl;
        dk_string_free(json);
        return kOk;
    }
    if (app.get_subcommands().empty() && config_path.empty()) {
        std::cerr << app.help();
        dk_config_free(cfg);
        return kUsage;
    }

    char* report = nullptr;
    st = dk_run(cfg, &report);
    dk_config_free(cfg);
    if (report) {
        std::cout << report << std::endl;
        dk_string_free(report);
    }
    if (st == DK_ERR_VALIDATION_FAILED) {
        std::cerr << "validation failed: " << dk_last_error() << '\n';
        return kValidation;
    }
    if (st != DK_OK) return report_error(st);
    return kOk;
}
