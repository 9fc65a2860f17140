#ifndef DAMPKIT_H
#define DAMPKIT_H

/* C interface to libdampkit. Every function returns a dk_status; on failure
   dk_last_error() describes the problem (per thread). Strings returned
   through char** are owned by the caller and released with dk_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dk_status {
    DK_OK = 0,
    DK_ERR_INVALID_ARGUMENT = 1,
    DK_ERR_DIMENSION_MISMATCH = 2,
    DK_ERR_NOT_DIAGONALIZABLE = 3,
    DK_ERR_SINGULAR_MAP = 4,
    DK_ERR_CONTOUR_FAILURE = 5,
    DK_ERR_PRECONDITION_VIOLATED = 6,
    DK_ERR_UNKNOWN_MODEL = 7,
    DK_ERR_IO = 8,
    DK_ERR_VALIDATION_FAILED = 100,
    DK_ERR_INTERNAL = 101
} dk_status;

typedef struct dk_config dk_config;
typedef struct dk_model dk_model;
typedef struct dk_signal_set dk_signal_set;
typedef struct dk_trajectory dk_trajectory;

const char* dk_version(void);
const char* dk_status_name(dk_status status);
/* Message of the last failing call on this thread; "" if none. */
const char* dk_last_error(void);
void dk_string_free(char* s);

/* --- configuration ------------------------------------------------------ */
dk_status dk_config_new(dk_config** out);
dk_status dk_config_load(const char* path, dk_config** out);
dk_status dk_config_from_json(const char* json, dk_config** out);
/* Flat keys as in the JSON file; "tol.<name>" sets a tolerance override. */
dk_status dk_config_set(dk_config* config, const char* key, const char* value);
dk_status dk_config_to_json(const dk_config* config, char** json_out);
void dk_config_free(dk_config* config);

/* Runs config's command and returns its JSON report. A failing validate run
   still fills *report_out and returns DK_ERR_VALIDATION_FAILED. */
dk_status dk_run(const dk_config* config, char** report_out);

/* --- models and signals --------------------------------------------------- */
dk_status dk_model_build(const dk_config* config, dk_model** out);
void dk_model_free(dk_model* model);
/* Any output pointer may be NULL. */
dk_status dk_model_info(const dk_model* model, int* dim, int* channels, int* n_times);
/* Writes `channels` values into re/im. */
dk_status dk_model_structure_eigenvalues(const dk_model* model, double* re, double* im, int capacity);

/* kind: "tcl", "nz" or "red". */
dk_status dk_model_signals(const dk_model* model, const char* kind, dk_signal_set** out);
void dk_signal_set_free(dk_signal_set* set);
dk_status dk_signal_set_size(const dk_signal_set* set, int* channels, int* n_times);
dk_status dk_signal_set_times(const dk_signal_set* set, double* t, int capacity);
/* channel is zero-based; delta_re/delta_im may be NULL. */
dk_status dk_signal_set_channel(const dk_signal_set* set, int channel, double* re, double* im, int capacity,
                                double* delta_re, double* delta_im);

/* --- propagation ---------------------------------------------------------- */
dk_status dk_model_propagate(const dk_model* model, const char* kind, int record_every, dk_trajectory** out);
void dk_trajectory_free(dk_trajectory* traj);
/* side is N^2, each map being side x side. */
dk_status dk_trajectory_size(const dk_trajectory* traj, int* n_times, int* side);
/* Row-major superoperator matrix at record `index`; capacity >= side*side. */
dk_status dk_trajectory_map(const dk_trajectory* traj, int index, double* t, double* re, double* im, int capacity);

#ifdef __cplusplus
}
#endif

#endif
