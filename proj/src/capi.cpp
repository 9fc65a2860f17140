#include "dampkit/dampkit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "dampkit/commands.hpp"
#include "dampkit/config.hpp"
#include "dampkit/errors.hpp"

struct dk_config {
    dampkit::RunConfig value;
};
struct dk_model {
    dampkit::Model value;
};
struct dk_signal_set {
    dampkit::GeneratorSpec value;
};
struct dk_trajectory {
    dampkit::MapTrajectory value;
};

namespace {

thread_local std::string last_error;

dk_status fail(dk_status s, const std::string& msg)
{
    last_error = msg;
    return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
dk_status guard(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const dampkit::Error& e) {
        return fail(static_cast<dk_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DK_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

#define DK_REQUIRE(cond, what)                                             \
    do {                                                                   \
        if (!(cond)) return fail(DK_ERR_INVALID_ARGUMENT, what);           \
    } while (0)

} // namespace

extern "C" {

const char* dk_version(void)
{
    return "0.1.0";
}

const char* dk_status_name(dk_status status)
{
    switch (status) {
    case DK_OK: return "OK";
    case DK_ERR_VALIDATION_FAILED: return "ValidationFailed";
    case DK_ERR_INTERNAL: return "Internal";
    default: break;
    }
    const int code = static_cast<int>(status);
    if (code >= 1 && code <= 8) return dampkit::error_code_name(static_cast<dampkit::ErrorCode>(code));
    return "Unknown";
}

const char* dk_last_error(void)
{
    return last_error.c_str();
}

void dk_string_free(char* s)
{
    std::free(s);
}

dk_status dk_config_new(dk_config** out)
{
    DK_REQUIRE(out, "null output pointer");
    return guard([&] {
        *out = new dk_config{dampkit::default_config()};
        return DK_OK;
    });
}

dk_status dk_config_load(const char* path, dk_config** out)
{
    DK_REQUIRE(path && out, "null argument");
    return guard([&] {
        *out = new dk_config{dampkit::load_config(path)};
        return DK_OK;
    });
}

dk_status dk_config_from_json(const char* json, dk_config** out)
{
    DK_REQUIRE(json && out, "null argument");
    return guard([&] {
        dampkit::Json j;
        try {
            j = dampkit::Json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            throw dampkit::InvalidArgument(std::string("config JSON: ") + e.what());
        }
        *out = new dk_config{dampkit::config_from_json(j)};
        return DK_OK;
    });
}

dk_status dk_config_set(dk_config* config, const char* key, const char* value)
{
    DK_REQUIRE(config && key && value, "null argument");
    return guard([&] {
        // Apply to a copy so a rejected value leaves the config untouched.
        dampkit::RunConfig next = config->value;
        dampkit::set_config_value(next, key, value);
        config->value = std::move(next);
        return DK_OK;
    });
}

dk_status dk_config_to_json(const dk_config* config, char** json_out)
{
    DK_REQUIRE(config && json_out, "null argument");
    return guard([&] {
        *json_out = dup_string(dampkit::config_to_json(config->value).dump(2));
        return DK_OK;
    });
}

void dk_config_free(dk_config* config)
{
    delete config;
}

dk_status dk_run(const dk_config* config, char** report_out)
{
    DK_REQUIRE(config && report_out, "null argument");
    *report_out = nullptr;
    return guard([&] {
        const auto result = dampkit::run_command(config->value);
        dampkit::Json j = result.report;
        j["files"] = result.files;
        *report_out = dup_string(j.dump(2));
        if (!result.passed) return fail(DK_ERR_VALIDATION_FAILED, "validation checks failed");
        return DK_OK;
    });
}

dk_status dk_model_build(const dk_config* config, dk_model** out)
{
    DK_REQUIRE(config && out, "null argument");
    return guard([&] {
        *out = new dk_model{dampkit::build(config->value.model)};
        return DK_OK;
    });
}

void dk_model_free(dk_model* model)
{
    delete model;
}

dk_status dk_model_info(const dk_model* model, int* dim, int* channels, int* n_times)
{
    DK_REQUIRE(model, "null model");
    const auto& g = model->value.generator;
    if (dim) *dim = g.basis()->dim();
    if (channels) *channels = g.channel_count();
    if (n_times) *n_times = g.grid().size();
    return DK_OK;
}

dk_status dk_model_structure_eigenvalues(const dk_model* model, double* re, double* im, int capacity)
{
    DK_REQUIRE(model && re && im, "null argument");
    const auto& ev = model->value.generator.decomposition.eigenvalues;
    DK_REQUIRE(capacity >= static_cast<int>(ev.size()), "buffer too small");
    for (std::size_t a = 0; a < ev.size(); ++a) {
        re[a] = ev[a].real();
        im[a] = ev[a].imag();
    }
    return DK_OK;
}

dk_status dk_model_signals(const dk_model* model, const char* kind, dk_signal_set** out)
{
    DK_REQUIRE(model && kind && out, "null argument");
    return guard([&] {
        const auto k = dampkit::parse_generator_kind(kind);
        const auto& g = model->value.generator;
        *out = new dk_signal_set{g.kind == k ? g : dampkit::convert_generator(g, k)};
        return DK_OK;
    });
}

void dk_signal_set_free(dk_signal_set* set)
{
    delete set;
}

dk_status dk_signal_set_size(const dk_signal_set* set, int* channels, int* n_times)
{
    DK_REQUIRE(set, "null signal set");
    if (channels) *channels = set->value.channel_count();
    if (n_times) *n_times = set->value.grid().size();
    return DK_OK;
}

dk_status dk_signal_set_times(const dk_signal_set* set, double* t, int capacity)
{
    DK_REQUIRE(set && t, "null argument");
    const auto& g = set->value.grid();
    DK_REQUIRE(capacity >= g.size(), "buffer too small");
    for (int k = 0; k < g.size(); ++k) t[k] = g.time(k);
    return DK_OK;
}

dk_status dk_signal_set_channel(const dk_signal_set* set, int channel, double* re, double* im, int capacity,
                                double* delta_re, double* delta_im)
{
    DK_REQUIRE(set && re && im, "null argument");
    DK_REQUIRE(channel >= 0 && channel < set->value.channel_count(), "channel out of range");
    const auto& s = set->value.signals[static_cast<std::size_t>(channel)];
    DK_REQUIRE(capacity >= s.size(), "buffer too small");
    for (int k = 0; k < s.size(); ++k) {
        re[k] = s[k].real();
        im[k] = s[k].imag();
    }
    if (delta_re) *delta_re = s.delta_weight.real();
    if (delta_im) *delta_im = s.delta_weight.imag();
    return DK_OK;
}

dk_status dk_model_propagate(const dk_model* model, const char* kind, int record_every, dk_trajectory** out)
{
    DK_REQUIRE(model && kind && out, "null argument");
    DK_REQUIRE(record_every >= 1, "record_every must be positive");
    return guard([&] {
        const auto k = dampkit::parse_generator_kind(kind);
        const auto& g = model->value.generator;
        const auto gen = g.kind == k ? g : dampkit::convert_generator(g, k);
        dampkit::PropagationOptions opts;
        opts.record_every = record_every;
        *out = new dk_trajectory{dampkit::propagate(gen, opts)};
        return DK_OK;
    });
}

void dk_trajectory_free(dk_trajectory* traj)
{
    delete traj;
}

dk_status dk_trajectory_size(const dk_trajectory* traj, int* n_times, int* side)
{
    DK_REQUIRE(traj, "null trajectory");
    if (n_times) *n_times = traj->value.size();
    if (side) *side = traj->value.size() ? static_cast<int>(traj->value.at(0).matrix.rows()) : 0;
    return DK_OK;
}

dk_status dk_trajectory_map(const dk_trajectory* traj, int index, double* t, double* re, double* im, int capacity)
{
    DK_REQUIRE(traj && re && im, "null argument");
    DK_REQUIRE(index >= 0 && index < traj->value.size(), "index out of range");
    const auto& m = traj->value.at(index).matrix;
    DK_REQUIRE(capacity >= m.rows() * m.cols(), "buffer too small");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re[i * m.cols() + j] = m(i, j).real();
            im[i * m.cols() + j] = m(i, j).imag();
        }
    }
    if (t) *t = traj->value.grid.time(index);
    return DK_OK;
}

} // extern "C"
