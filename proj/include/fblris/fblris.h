// SPDX-License-Identifier: Apache-2.0
//
// fblris: finite-blocklength rate optimization for (STAR-)RIS-assisted MISO networks
// Copyright (C) 2026 The fblris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


/* C interface to fblris. Every function returns a status code; on failure the
 * thread-local message from fblris_last_error() describes the cause. Objects are
 * opaque and released with their matching *_free function. */

#ifndef FBLRIS_H
#define FBLRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FBLRIS_API __declspec(dllexport)
#else
#define FBLRIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fblris_status
{
    FBLRIS_OK = 0,
    FBLRIS_ERR_INVALID_ARGUMENT = 1,
    FBLRIS_ERR_INDEX_OUT_OF_RANGE = 2,
    FBLRIS_ERR_ZERO_SINR_EXPANSION = 3,
    FBLRIS_ERR_BRACKET_FAILURE = 4,
    FBLRIS_ERR_INFEASIBLE = 5,
    FBLRIS_ERR_INFEASIBLE_THRESHOLDS = 6,
    FBLRIS_ERR_INITIALIZATION_INFEASIBLE = 7,
    FBLRIS_ERR_MAX_ITERATIONS = 8,
    FBLRIS_ERR_IO = 9,
    FBLRIS_ERR_PARSE = 10,
    FBLRIS_ERR_INTERNAL = 99
} fblris_status;

typedef struct fblris_scenario fblris_scenario;
typedef struct fblris_sweep fblris_sweep;
typedef struct fblris_table fblris_table;
typedef struct fblris_run fblris_run;

FBLRIS_API const char *fblris_version(void);
FBLRIS_API const char *fblris_status_string(fblris_status status);
/* Message of the last failed call on this thread; empty after a success. */
FBLRIS_API const char *fblris_last_error(void);

/* Scalar rate functions; rates are in bits per channel use. */
FBLRIS_API fblris_status fblris_q_inverse(double eps, double *out);
FBLRIS_API fblris_status fblris_shannon_rate(double gamma, double *out);
FBLRIS_API fblris_status fblris_fbl_rate(double gamma, double n_t, double eps_c, double *out);
/* Penalty coefficient a of f(g) = ln(1+g) - a*sqrt(g/(1+g)) for a packet length and error probability. */
FBLRIS_API fblris_status fblris_fbl_coefficient(double n_t, double eps_c, double *out);
FBLRIS_API fblris_status fblris_fbl_analysis(double a, double *gamma_star, double *gamma_zero, double *f_min);
/* Writes `points` samples of f on [0, gamma_max] as csv (gamma,f) or json. */
FBLRIS_API fblris_status fblris_fbl_curve_write(double a, double gamma_max, int points, const char *path,
                                                const char *format);

FBLRIS_API fblris_status fblris_scenario_from_json(const char *json, fblris_scenario **out);
FBLRIS_API fblris_status fblris_scenario_from_file(const char *path, fblris_scenario **out);
FBLRIS_API fblris_status fblris_scenario_fbl_coefficient(const fblris_scenario *scenario, double *out);
FBLRIS_API void fblris_scenario_free(fblris_scenario *scenario);

/* Runs one baseline on one draw. Baseline names: NoRIS, RandomRIS, TI, TU, TC, Shannon-TI,
 * StarES-TSU, StarES-TSI, StarES-TSN, StarMS, StarTS. */
FBLRIS_API fblris_status fblris_run_single(const fblris_scenario *scenario, const char *baseline, uint64_t seed,
                                           fblris_run **out);
FBLRIS_API fblris_status fblris_run_utility(const fblris_run *run, double *out);
FBLRIS_API fblris_status fblris_run_iterations(const fblris_run *run, int *out);
FBLRIS_API fblris_status fblris_run_converged(const fblris_run *run, int *out);
/* Per-iteration utility and user rates, csv or json. */
FBLRIS_API fblris_status fblris_run_write(const fblris_run *run, const char *path, const char *format);
FBLRIS_API void fblris_run_free(fblris_run *run);

FBLRIS_API fblris_status fblris_sweep_from_json(const char *json, fblris_sweep **out);
FBLRIS_API fblris_status fblris_sweep_from_file(const char *path, fblris_sweep **out);
FBLRIS_API fblris_status fblris_sweep_set_seed(fblris_sweep *sweep, uint64_t base_seed);
FBLRIS_API fblris_status fblris_sweep_set_draws(fblris_sweep *sweep, int draws);
FBLRIS_API void fblris_sweep_free(fblris_sweep *sweep);

/* Runs every (value, draw, baseline) cell. Failed runs are dropped from the row
 * statistics and counted in fblris_table_failed_runs; the call itself still succeeds. */
FBLRIS_API fblris_status fblris_run_sweep(const fblris_sweep *sweep, fblris_table **out);
FBLRIS_API fblris_status fblris_table_from_json(const char *json, fblris_table **out);
FBLRIS_API fblris_status fblris_table_row_count(const fblris_table *table, size_t *out);
FBLRIS_API fblris_status fblris_table_failed_runs(const fblris_table *table, int *out);
/* Any output pointer may be NULL. `baseline` stays valid while the table lives. */
FBLRIS_API fblris_status fblris_table_row(const fblris_table *table, size_t index, double *value,
                                          const char **baseline, double *mean, double *stderr_, int *draws,
                                          double *seconds);
FBLRIS_API fblris_status fblris_table_write(const fblris_table *table, const char *path, const char *format);
/* Caller releases *out with fblris_string_free. */
FBLRIS_API fblris_status fblris_table_to_string(const fblris_table *table, const char *format, char **out);
FBLRIS_API void fblris_table_free(fblris_table *table);
FBLRIS_API void fblris_string_free(char *text);

#ifdef __cplusplus
}
#endif

#endif
