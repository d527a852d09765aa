/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the reinforcement-schedule simulator.
 *
 * All functions return an rffsim_status; on failure the message is available
 * from rffsim_last_error() (thread-local, valid until the next call on the
 * same thread). Objects are opaque handles released with the matching
 * *_free function; passing NULL to a free function is a no-op.
 */
#ifndef RFFSIM_RFFSIM_H
#define RFFSIM_RFFSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#    if defined(RFFSIM_BUILDING_LIBRARY)
#        define RFFSIM_API __declspec(dllexport)
#    else
#        define RFFSIM_API __declspec(dllimport)
#    endif
#else
#    define RFFSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rffsim_status
{
    RFFSIM_OK = 0,
    RFFSIM_ERR_CONFIG = 1,  /* invalid specification or configuration */
    RFFSIM_ERR_SOLVER = 2,  /* no feasible (T, p) */
    RFFSIM_ERR_RUNTIME = 3, /* IO, degenerate fit, internal failure */
    RFFSIM_ERR_ARGUMENT = 4 /* NULL handle or out-of-range index */
} rffsim_status;

typedef enum rffsim_family
{
    RFFSIM_BAUM = 0,
    RFFSIM_KILLEEN = 1,
    RFFSIM_PRELEC = 2,
    RFFSIM_RACHLIN = 3,
    RFFSIM_RDRL_2EXP = 4,
    RFFSIM_RDRL_REDUCED = 5
} rffsim_family;

typedef struct rffsim_experiment rffsim_experiment;
typedef struct rffsim_sweep rffsim_sweep;
typedef struct rffsim_fit_set rffsim_fit_set;

typedef struct rffsim_solver_result
{
    double cycle_s;
    double arming_p;
    double mean_s;
    double sd_s;
    double mean_err;
    double sd_ratio;
} rffsim_solver_result;

typedef struct rffsim_point
{
    double rate_nominal;
    double rate_realized;
    double reinforcement_mean;
    double hdi_lo;
    double hdi_hi;
    size_t repetitions;
} rffsim_point;

typedef struct rffsim_model
{
    rffsim_family family;
    double size_s;
    double c;
    double m;
    double bmax;
    double b;
} rffsim_model;

typedef struct rffsim_rdrl_points
{
    double b;
    double c;
    double rate_max;
    double reinforcement_max;
    double rate_inflection;
    double reinforcement_inflection;
} rffsim_rdrl_points;

typedef struct rffsim_fit_options
{
    double size_hint_s; /* <= 0: take from sweep metadata */
    int max_iterations;
    double rss_tolerance;
    int include_origin;
} rffsim_fit_options;

typedef struct rffsim_fit_summary
{
    rffsim_model model;
    size_t n;
    int k;
    double rss;
    double r_squared;
    double aic;
    double bic;
    int converged;
    int iterations;
    int bic_rank;
    int aic_rank;
    int good;
    int excellent;
} rffsim_fit_summary;

typedef struct rffsim_burst_pair
{
    double p_run;
    double p_break;
} rffsim_burst_pair;

RFFSIM_API char const* rffsim_version(void);
RFFSIM_API char const* rffsim_last_error(void);

/* Families */
RFFSIM_API char const* rffsim_family_name(rffsim_family family);
RFFSIM_API rffsim_status rffsim_family_from_name(char const* name,
                                                 rffsim_family* out);

/* Cycle parameter solver; p_step <= 0 means p = T / x exactly. */
RFFSIM_API rffsim_status rffsim_solve_cycle(double size_s,
                                            double dt_s,
                                            double max_cycle_s,
                                            double p_step,
                                            rffsim_solver_result* out);

RFFSIM_API rffsim_status rffsim_response_probability(double rate_per_min,
                                                     double step_s,
                                                     double* out);

/* Experiments */
RFFSIM_API rffsim_status rffsim_experiment_load(char const* path,
                                                int force,
                                                rffsim_experiment** out);
RFFSIM_API void rffsim_experiment_free(rffsim_experiment* exp);
RFFSIM_API rffsim_status rffsim_experiment_set_seed(rffsim_experiment* exp,
                                                    uint64_t seed);
RFFSIM_API rffsim_status
rffsim_experiment_set_threads(rffsim_experiment* exp, unsigned threads);
RFFSIM_API rffsim_status
rffsim_experiment_set_output_dir(rffsim_experiment* exp, char const* dir);
RFFSIM_API rffsim_status rffsim_experiment_run(rffsim_experiment const* exp,
                                               rffsim_sweep** out);
/* Writes the sweep CSV (and samples CSV when configured) into the output
 * directory; the sweep path is copied to path_buf when non-NULL. */
RFFSIM_API rffsim_status
rffsim_experiment_write_outputs(rffsim_experiment const* exp,
                                rffsim_sweep const* sweep,
                                char* path_buf,
                                size_t path_cap);

/* Burst sweeps over lors[] for each pair versus plain responders at the
 * effective rate; writes a CSV and counts rows outside the plain HDI. */
RFFSIM_API rffsim_status
rffsim_break_run(rffsim_experiment const* exp,
                 double const* lors,
                 size_t lor_count,
                 rffsim_burst_pair const* pairs,
                 size_t pair_count,
                 char const* out_path,
                 size_t* rows_outside);

/* Sweeps */
RFFSIM_API rffsim_status rffsim_sweep_load(char const* path,
                                           rffsim_sweep** out);
RFFSIM_API void rffsim_sweep_free(rffsim_sweep* sweep);
RFFSIM_API size_t rffsim_sweep_size(rffsim_sweep const* sweep);
RFFSIM_API rffsim_status rffsim_sweep_point(rffsim_sweep const* sweep,
                                            size_t index,
                                            rffsim_point* out);
/* Nominal schedule size from metadata; RFFSIM_ERR_ARGUMENT if absent. */
RFFSIM_API rffsim_status rffsim_sweep_nominal_size(rffsim_sweep const* sweep,
                                                   double* out);

/* Models */
RFFSIM_API rffsim_status rffsim_model_eval(rffsim_model const* model,
                                           double rate_per_min,
                                           double* out,
                                           int* in_domain);
RFFSIM_API rffsim_status rffsim_rdrl_predictions(double size_s,
                                                 rffsim_rdrl_points* out);
RFFSIM_API rffsim_status rffsim_rachlin_m(double size_s, double* out);
/* Default-parameter model for a family and size (m from the size law,
 * Bmax 200, RDRL b and c from the reduced law, Killeen c = Bm guess). */
RFFSIM_API rffsim_status rffsim_model_default(rffsim_family family,
                                              double size_s,
                                              rffsim_model* out);

/* Fitting */
RFFSIM_API void rffsim_fit_options_init(rffsim_fit_options* opts);
RFFSIM_API rffsim_status rffsim_fit_set_create(rffsim_sweep const* sweep,
                                               rffsim_family const* families,
                                               size_t family_count,
                                               rffsim_fit_options const* opts,
                                               rffsim_fit_set** out);
RFFSIM_API void rffsim_fit_set_free(rffsim_fit_set* set);
RFFSIM_API size_t rffsim_fit_set_size(rffsim_fit_set const* set);
/* Entries are in ranking order (ascending BIC). */
RFFSIM_API rffsim_status rffsim_fit_set_get(rffsim_fit_set const* set,
                                            size_t index,
                                            rffsim_fit_summary* out);
RFFSIM_API rffsim_status rffsim_fit_set_write_json(rffsim_fit_set const* set,
                                                   char const* path);
RFFSIM_API rffsim_status rffsim_fit_set_load_json(char const* path,
                                                  rffsim_fit_set** out);
/* Copies the ranking table; *needed receives the full length + 1. */
RFFSIM_API rffsim_status
rffsim_fit_set_format_table(rffsim_fit_set const* set,
                            char* buf,
                            size_t cap,
                            size_t* needed);

/* Plot data; set may be NULL for an observed-only file. */
RFFSIM_API rffsim_status rffsim_write_plot_data(rffsim_sweep const* sweep,
                                                rffsim_fit_set const* set,
                                                char const* path);

/* Statistics */
RFFSIM_API rffsim_status rffsim_hdi(double const* samples,
                                    size_t count,
                                    double mass,
                                    double* lo,
                                    double* hi);

#ifdef __cplusplus
}
#endif

#endif
