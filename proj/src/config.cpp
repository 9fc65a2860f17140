#include "dampkit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dampkit/errors.hpp"

namespace dampkit {

namespace {

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("'" + key + "' expects a number, got '" + v + "'");
}

long long to_integer(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long n = std::stoll(v, &used);
        if (used == v.size()) return n;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("'" + key + "' expects an integer, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw InvalidArgument("'" + key + "' expects true or false, got '" + v + "'");
}

SimplexPoint to_simplex(const std::vector<double>& v)
{
    if (v.size() != 3) throw InvalidArgument("x needs exactly three components");
    SimplexPoint x{v[0], v[1], v[2]};
    validate_simplex(x);
    return x;
}

void check(RunConfig& c)
{
    if (c.model.grid.n_steps() < 2) throw InvalidArgument("n_steps must be at least 2");
    if (c.resolution < 1) throw InvalidArgument("resolution must be positive");
    if (c.record_every < 1) throw InvalidArgument("record_every must be positive");
    if (c.threads < 0) throw InvalidArgument("threads must be non-negative");
    if (!(c.scan_dt > 0.0) || !(c.horizon > 0.0)) throw InvalidArgument("scan_dt and horizon must be positive");
    if (!c.kind.empty()) parse_generator_kind(c.kind);
    if (!c.from.empty()) parse_generator_kind(c.from);
    parse_generator_kind(c.to);
    for (const auto& [k, v] : c.tolerances) {
        if (!(v > 0.0)) throw InvalidArgument("tolerance '" + k + "' must be positive");
    }
}

std::string scalar_text(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (!e.is_number()) throw InvalidArgument("list entries must be numbers");
            if (!s.empty()) s += ',';
            s += format_double(e.get<double>());
        }
        return s;
    }
    throw InvalidArgument("unsupported JSON value " + v.dump());
}

} // namespace

RunConfig default_config()
{
    return RunConfig{};
}

Json config_to_json(const RunConfig& c)
{
    Json j;
    j["command"] = c.command;
    j["model"] = model_alias(c.model.id);
    j["profile"] = c.model.profile.empty() ? default_profile(c.model.id) : c.model.profile;
    j["amplitude"] = c.model.amplitude;
    j["x"] = Json::array({c.model.x[0], c.model.x[1], c.model.x[2]});
    j["t_end"] = c.model.grid.t_end();
    j["n_steps"] = c.model.grid.n_steps();
    j["kind"] = c.kind;
    j["from"] = c.from;
    j["to"] = c.to;
    j["output_dir"] = resolved_output_dir(c);
    j["seed"] = c.seed;
    j["resolution"] = c.resolution;
    j["times"] = c.times;
    j["scan_dt"] = c.scan_dt;
    j["horizon"] = c.horizon;
    j["threads"] = c.threads;
    j["record_every"] = c.record_every;
    j["snapshot_times"] = c.snapshot_times;
    j["full_matrices"] = c.full_matrices;
    Json tol = Json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    j["tolerances"] = tol;
    return j;
}

RunConfig config_from_json(const Json& j, const RunConfig& base)
{
    if (!j.is_object()) throw InvalidArgument("configuration must be a JSON object");
    RunConfig c = base;
    for (const auto& [key, value] : j.items()) {
        if (key == "tolerances") {
            if (!value.is_object()) throw InvalidArgument("'tolerances' must be an object");
            for (const auto& [name, tol] : value.items()) {
                if (!tol.is_number()) throw InvalidArgument("tolerance '" + name + "' must be a number");
                c.tolerances[name] = tol.get<double>();
            }
            continue;
        }
        set_config_value(c, key, scalar_text(value));
    }
    check(c);
    return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config '" + path + "': " + e.what());
    }
    return config_from_json(j, base);
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value)
{
    if (key == "command") {
        c.command = value;
    } else if (key == "model") {
        c.model.id = parse_model_id(value);
    } else if (key == "profile") {
        c.model.profile = value;
    } else if (key == "amplitude") {
        c.model.amplitude = to_double(key, value);
    } else if (key == "x") {
        c.model.x = to_simplex(to_list(key, value));
    } else if (key == "t_end") {
        c.model.grid = TimeGrid(to_double(key, value), c.model.grid.n_steps());
    } else if (key == "n_steps") {
        c.model.grid = TimeGrid(c.model.grid.t_end(), static_cast<int>(to_integer(key, value)));
    } else if (key == "kind") {
        c.kind = value;
    } else if (key == "from") {
        c.from = value;
    } else if (key == "to") {
        c.to = value;
    } else if (key == "output_dir") {
        c.output_dir = value;
    } else if (key == "seed") {
        const long long s = to_integer(key, value);
        if (s < 0) throw InvalidArgument("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "resolution") {
        c.resolution = static_cast<int>(to_integer(key, value));
    } else if (key == "times") {
        c.times = to_list(key, value);
    } else if (key == "scan_dt") {
        c.scan_dt = to_double(key, value);
    } else if (key == "horizon") {
        c.horizon = to_double(key, value);
    } else if (key == "threads") {
        c.threads = static_cast<int>(to_integer(key, value));
    } else if (key == "record_every") {
        c.record_every = static_cast<int>(to_integer(key, value));
    } else if (key == "snapshot_times") {
        c.snapshot_times = to_list(key, value);
    } else if (key == "full_matrices") {
        c.full_matrices = to_bool(key, value);
    } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
        c.tolerances[key.substr(4)] = to_double(key, value);
    } else {
        throw InvalidArgument("unknown configuration key '" + key + "'");
    }
    check(c);
}

double tolerance_for(const RunConfig& c, const std::string& name, double fallback)
{
    if (auto it = c.tolerances.find(name); it != c.tolerances.end()) return it->second;
    if (auto it = c.tolerances.find("all"); it != c.tolerances.end()) return it->second;
    return fallback;
}

std::string resolved_output_dir(const RunConfig& c)
{
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv("DAMPKIT_OUTPUT_DIR"); env && *env) return env;
    return "dampkit_out";
}

} // namespace dampkit
