/*
 * C interface to the ECA complexity library.
 *
 * Every function returns an ecacm_status; on failure a description of the
 * last error on the calling thread is available from ecacm_last_error().
 * Handles are opaque and must be released with the matching _destroy call.
 */
#ifndef ECACM_H
#define ECACM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ECACM_BUILDING)
#    define ECACM_API __declspec(dllexport)
#  else
#    define ECACM_API __declspec(dllimport)
#  endif
#else
#  define ECACM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ecacm_status {
    ECACM_OK = 0,
    ECACM_ERR_INVALID_ARGUMENT = 1, /* null handle, unknown key, unparsable value */
    ECACM_ERR_DOMAIN = 2,           /* value outside an operation's domain */
    ECACM_ERR_NUMERICAL = 3,        /* non-convergence, PSD violation */
    ECACM_ERR_IO = 4,               /* unreadable or unwritable path */
    ECACM_ERR_RESOURCE = 5,         /* allocation or size overflow */
    ECACM_ERR_BUFFER_TOO_SMALL = 6, /* *count holds the required size */
    ECACM_ERR_INTERNAL = 7
} ecacm_status;

typedef struct ecacm_config ecacm_config;
typedef struct ecacm_experiment ecacm_experiment;

/* Per-row measurement. c_mu is NaN and n_states 0 when the classical path
 * is disabled. */
typedef struct ecacm_point {
    uint64_t t;
    double c_q;
    double c_mu;
    uint64_t n_states;
    uint64_t gram_dim;
    double past_entropy;
    double gram_trace;
    double gram_min_eigenvalue;
    double stationary_residual;
} ecacm_point;

ECACM_API const char* ecacm_version(void);
ECACM_API const char* ecacm_last_error(void);
ECACM_API const char* ecacm_status_string(ecacm_status status);
ECACM_API void ecacm_free_string(char* s);

/* Rules. */
ECACM_API ecacm_status ecacm_canonical_rules(int* out, size_t capacity, size_t* count);
ECACM_API ecacm_status ecacm_rule_orbit(int rule, int out[4], size_t* count);

/* Configuration. Keys mirror the CLI flags without leading dashes:
 * rules, width, tmax, window-l, seeds, chi2-alpha, out, format,
 * classical, kink-filter, pbm, futures, schedule, threads. */
ECACM_API ecacm_status ecacm_config_create(ecacm_config** out);
ECACM_API void ecacm_config_destroy(ecacm_config* config);
ECACM_API ecacm_status ecacm_config_set(ecacm_config* config, const char* key, const char* value);
/* Flat "key = value" lines; '#' starts a comment. */
ECACM_API ecacm_status ecacm_config_load_file(ecacm_config* config, const char* path);
ECACM_API ecacm_status ecacm_config_validate(const ecacm_config* config);
/* Newly allocated "key = value" listing of every setting. */
ECACM_API ecacm_status ecacm_config_dump(const ecacm_config* config, char** out);

/* Experiments. */
typedef void (*ecacm_progress_fn)(int rule, uint64_t seed, int ok, void* user);

ECACM_API ecacm_status ecacm_run(const ecacm_config* config, ecacm_progress_fn progress, void* user,
                                 ecacm_experiment** out);
ECACM_API void ecacm_experiment_destroy(ecacm_experiment* experiment);
ECACM_API size_t ecacm_experiment_trace_count(const ecacm_experiment* experiment);
/* ok is 0 for a failed unit; its message is returned through error (may be null). */
ECACM_API ecacm_status ecacm_experiment_trace(const ecacm_experiment* experiment, size_t index, int* rule,
                                              uint64_t* seed, size_t* n_points, int* ok, const char** error);
ECACM_API ecacm_status ecacm_experiment_point(const ecacm_experiment* experiment, size_t trace, size_t point,
                                              ecacm_point* out);
/* Rules by descending growth rate; rates are NaN where undefined. */
ECACM_API ecacm_status ecacm_experiment_ranking(const ecacm_experiment* experiment, int* rules, double* rates,
                                                size_t capacity, size_t* count);
ECACM_API ecacm_status ecacm_experiment_csv(const ecacm_experiment* experiment, char** out);
/* Writes the configured formats; out_dir overrides the configured one when non-null. */
ECACM_API ecacm_status ecacm_experiment_write(const ecacm_experiment* experiment, const char* out_dir);

/* Single rows. cells holds one byte (0 or 1) per cell. */
ECACM_API ecacm_status ecacm_analyze_row(const uint8_t* cells, size_t width, int window_l, double chi2_alpha,
                                         int classical, ecacm_point* out);
ECACM_API ecacm_status ecacm_dump_row(const uint8_t* cells, size_t width, int window_l, double chi2_alpha,
                                      char** machine_dump, char** gram_dump);

/* Evolution with open boundaries from a seeded random row. rows_out receives
 * t_max * width bytes, row t (after t updates) at offset (t - 1) * width. */
ECACM_API ecacm_status ecacm_evolve(int rule, size_t width, size_t t_max, uint64_t seed, int kink_filter,
                                    uint8_t* rows_out);

#ifdef __cplusplus
}
#endif

#endif /* ECACM_H */
