// Copyright 2026 The bsmcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BSMCERT_BSMCERT_H_
#define BSMCERT_BSMCERT_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(BSMCERT_BUILDING_LIBRARY)
#define BSMCERT_API __attribute__((visibility("default")))
#else
#define BSMCERT_API
#endif

typedef enum bsmcert_status {
    BSMCERT_OK = 0,
    BSMCERT_ERR_INVALID_ARGUMENT = 1,
    BSMCERT_ERR_DIMENSION_MISMATCH = 2,
    BSMCERT_ERR_NUMERICAL = 3,
    BSMCERT_ERR_PARSE = 4,
    BSMCERT_ERR_IO = 5,
    BSMCERT_ERR_MISSING_FIELD = 6,
    BSMCERT_ERR_NULL_POINTER = 7,
    BSMCERT_ERR_INTERNAL = 8
} bsmcert_status;

typedef enum bsmcert_mode {
    BSMCERT_MODE_DETERMINISTIC = 0,
    BSMCERT_MODE_INDEPENDENT_SOURCES = 1,
    BSMCERT_MODE_PARTIAL = 2
} bsmcert_mode;

typedef enum bsmcert_delta_model { BSMCERT_DELTA_EXPLICIT = 0, BSMCERT_DELTA_CHSH_SCALED = 1 } bsmcert_delta_model;

typedef enum bsmcert_format { BSMCERT_FORMAT_JSON = 0, BSMCERT_FORMAT_CSV = 1 } bsmcert_format;

typedef enum bsmcert_figure { BSMCERT_FIG3 = 0, BSMCERT_FIG5 = 1, BSMCERT_FIG6 = 2 } bsmcert_figure;

typedef enum bsmcert_suite {
    BSMCERT_SUITE_ALL = 0,
    BSMCERT_SUITE_OPERATOR_INEQUALITY = 1,
    BSMCERT_SUITE_RELABELING = 2,
    BSMCERT_SUITE_TELEPORT = 3,
    BSMCERT_SUITE_LEMMA1 = 4,
    BSMCERT_SUITE_SOUNDNESS = 5
} bsmcert_suite;

typedef enum bsmcert_gain_convention { BSMCERT_GAIN_CORRECTED = 0, BSMCERT_GAIN_UNCORRECTED = 1 } bsmcert_gain_convention;

#define BSMCERT_FLAG_NON_CERTIFYING 0x1u
#define BSMCERT_FLAG_REGIME_VIOLATED 0x2u
#define BSMCERT_FLAG_CLAMPED 0x4u

typedef struct bsmcert_stats bsmcert_stats;
typedef struct bsmcert_report bsmcert_report;
typedef struct bsmcert_scenario bsmcert_scenario;

/* Fields not produced by the report's mode are NaN. */
typedef struct bsmcert_report_values {
    bsmcert_mode mode;
    double f_o_k[4];
    double f_o;
    double f_i;
    double f_bsm;
    double f_bsm_independent_sources;
    double f_cond;
    double zeta_0;
    double delta_used;
    uint32_t flags;
} bsmcert_report_values;

typedef struct bsmcert_verify_options {
    int grid_points;
    int relabeling_grid_points;
    int extraction_samples;
    int teleport_trials;
    int negativity_trials;
    int lemma1_trials;
    int fidelity_trials;
    uint64_t seed;
    double tolerance;
    bsmcert_gain_convention convention;
} bsmcert_verify_options;

BSMCERT_API const char *bsmcert_version(void);
BSMCERT_API const char *bsmcert_status_string(bsmcert_status status);
/* Message of the last failed call on this thread, "" if none. */
BSMCERT_API const char *bsmcert_last_error(void);
/* Releases strings returned through char** out-parameters. */
BSMCERT_API void bsmcert_string_free(char *text);

BSMCERT_API bsmcert_status bsmcert_stats_create(bsmcert_stats **out);
BSMCERT_API void bsmcert_stats_destroy(bsmcert_stats *stats);
BSMCERT_API bsmcert_status bsmcert_stats_set_beta(bsmcert_stats *stats, int k, double beta);
BSMCERT_API bsmcert_status bsmcert_stats_set_p(bsmcert_stats *stats, int k, double p);
BSMCERT_API bsmcert_status bsmcert_stats_clear(bsmcert_stats *stats, int k);
BSMCERT_API bsmcert_status bsmcert_stats_set_delta(bsmcert_stats *stats, double delta);
BSMCERT_API bsmcert_status bsmcert_stats_set_delta_model(bsmcert_stats *stats, bsmcert_delta_model model);
/* *present is 0 when the entry is unset; *value is then left untouched. */
BSMCERT_API bsmcert_status bsmcert_stats_get_beta(const bsmcert_stats *stats, int k, double *value, int *present);
BSMCERT_API bsmcert_status bsmcert_stats_get_p(const bsmcert_stats *stats, int k, double *value, int *present);
BSMCERT_API bsmcert_status bsmcert_stats_get_delta(const bsmcert_stats *stats, double *value, int *present);
BSMCERT_API bsmcert_status bsmcert_stats_load_json(bsmcert_stats *stats, const char *json_text);
BSMCERT_API bsmcert_status bsmcert_stats_load_file(bsmcert_stats *stats, const char *path);
BSMCERT_API bsmcert_status bsmcert_stats_to_json(const bsmcert_stats *stats, char **out);

BSMCERT_API bsmcert_status bsmcert_certify(const bsmcert_stats *stats, bsmcert_mode mode, bsmcert_report **out);
BSMCERT_API void bsmcert_report_destroy(bsmcert_report *report);
BSMCERT_API bsmcert_status bsmcert_report_get(const bsmcert_report *report, bsmcert_report_values *out);
BSMCERT_API bsmcert_status bsmcert_report_render(const bsmcert_report *report, bsmcert_format format, char **out);

BSMCERT_API bsmcert_status bsmcert_scenario_create(bsmcert_scenario **out);
BSMCERT_API void bsmcert_scenario_destroy(bsmcert_scenario *scenario);
/* Sets both source visibilities. */
BSMCERT_API bsmcert_status bsmcert_scenario_set_visibility(bsmcert_scenario *scenario, double visibility);
/* source is 0 or 1. */
BSMCERT_API bsmcert_status bsmcert_scenario_set_source_visibility(bsmcert_scenario *scenario, int source,
                                                                  double visibility);
BSMCERT_API bsmcert_status bsmcert_scenario_set_bsm_depolarization(bsmcert_scenario *scenario, double w);
BSMCERT_API bsmcert_status bsmcert_scenario_set_misalignment(bsmcert_scenario *scenario, double radians);
/* shots = 0 selects the analytic mode. */
BSMCERT_API bsmcert_status bsmcert_scenario_set_shots(bsmcert_scenario *scenario, uint64_t shots);
BSMCERT_API bsmcert_status bsmcert_scenario_set_seed(bsmcert_scenario *scenario, uint64_t seed);
BSMCERT_API bsmcert_status bsmcert_scenario_set_delta_model(bsmcert_scenario *scenario, bsmcert_delta_model model);
BSMCERT_API bsmcert_status bsmcert_scenario_set_delta(bsmcert_scenario *scenario, double delta);
/* Replaces the whole configuration with the key = value text. */
BSMCERT_API bsmcert_status bsmcert_scenario_load_config(bsmcert_scenario *scenario, const char *config_text);
BSMCERT_API bsmcert_status bsmcert_scenario_load_config_file(bsmcert_scenario *scenario, const char *path);
BSMCERT_API bsmcert_status bsmcert_simulate(const bsmcert_scenario *scenario, bsmcert_stats **out);
/* Brute-force fidelities of the simulated devices, as JSON. */
BSMCERT_API bsmcert_status bsmcert_scenario_oracle_json(const bsmcert_scenario *scenario, char **out);

BSMCERT_API void bsmcert_verify_options_default(bsmcert_verify_options *options);
/* options may be NULL for the defaults. *passed is 1 iff every check passed. */
BSMCERT_API bsmcert_status bsmcert_verify(bsmcert_suite suite, const bsmcert_verify_options *options, int *passed,
                                          char **report_json);

BSMCERT_API bsmcert_status bsmcert_figure_csv(bsmcert_figure which, int resolution, char **out);

BSMCERT_API bsmcert_status bsmcert_f_o_from_chsh(double beta, double *value, uint32_t *flags);
BSMCERT_API bsmcert_status bsmcert_f_i_from_delta(double delta, double *value, uint32_t *flags);
BSMCERT_API bsmcert_status bsmcert_independent_sources_threshold(double target, double *beta);

#ifdef __cplusplus
}
#endif

#endif /* BSMCERT_BSMCERT_H_ */
