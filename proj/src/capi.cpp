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

#include "bsmcert/bsmcert.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "bsmcert/bounds.hpp"
#include "bsmcert/error.hpp"
#include "bsmcert/figures.hpp"
#include "bsmcert/scenario.hpp"
#include "bsmcert/selftest.hpp"
#include "bsmcert/serialize.hpp"
#include "bsmcert/verify.hpp"

struct bsmcert_stats {
    bsmcert::ExperimentStatistics stats;
};

struct bsmcert_report {
    bsmcert::CertificateReport report;
};

struct bsmcert_scenario {
    bsmcert::ScenarioConfig config;
};

namespace {

thread_local std::string last_error;

bsmcert_status to_status(bsmcert::ErrorCode code) {
    switch (code) {
        case bsmcert::ErrorCode::invalid_argument:
            return BSMCERT_ERR_INVALID_ARGUMENT;
        case bsmcert::ErrorCode::dimension_mismatch:
            return BSMCERT_ERR_DIMENSION_MISMATCH;
        case bsmcert::ErrorCode::numerical:
            return BSMCERT_ERR_NUMERICAL;
        case bsmcert::ErrorCode::parse:
            return BSMCERT_ERR_PARSE;
        case bsmcert::ErrorCode::io:
            return BSMCERT_ERR_IO;
        case bsmcert::ErrorCode::missing_field:
            return BSMCERT_ERR_MISSING_FIELD;
    }
    return BSMCERT_ERR_INTERNAL;
}

template <typename Fn>
bsmcert_status guarded(Fn &&fn) {
    try {
        fn();
        last_error.clear();
        return BSMCERT_OK;
    } catch (const bsmcert::Error &e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return BSMCERT_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return BSMCERT_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return BSMCERT_ERR_INTERNAL;
    }
}

bsmcert_status null_error(const char *name) {
    last_error = std::string(name) + " is null";
    return BSMCERT_ERR_NULL_POINTER;
}

void check_index(int k) {
    if (k < 0 || k > 3) bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "outcome index must be in 0..3");
}

char *copy_string(const std::string &text) {
    char *out = static_cast<char *>(std::malloc(text.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

// Applies `edit` to a copy and commits it only if the result validates.
template <typename Edit>
void edit_stats(bsmcert_stats *handle, Edit &&edit) {
    bsmcert::ExperimentStatistics copy = handle->stats;
    edit(copy);
    copy.validate();
    handle->stats = std::move(copy);
}

template <typename Edit>
void edit_config(bsmcert_scenario *handle, Edit &&edit) {
    bsmcert::ScenarioConfig copy = handle->config;
    edit(copy);
    copy.noise.validate();
    if (copy.delta && !(*copy.delta >= 0.0 && *copy.delta <= 1.0)) {
        bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "delta must lie in [0, 1]");
    }
    handle->config = std::move(copy);
}

bsmcert::VerifyOptions to_options(const bsmcert_verify_options &o) {
    bsmcert::VerifyOptions out;
    out.grid_points = o.grid_points;
    out.relabeling_grid_points = o.relabeling_grid_points;
    out.extraction_samples = o.extraction_samples;
    out.teleport_trials = o.teleport_trials;
    out.negativity_trials = o.negativity_trials;
    out.lemma1_trials = o.lemma1_trials;
    out.fidelity_trials = o.fidelity_trials;
    out.seed = o.seed;
    out.tolerance = o.tolerance;
    out.convention = o.convention == BSMCERT_GAIN_UNCORRECTED ? bsmcert::GainConvention::uncorrected
                                                              : bsmcert::GainConvention::corrected;
    return out;
}

}  // namespace

extern "C" {

const char *bsmcert_version(void) { return "0.1.0"; }

const char *bsmcert_status_string(bsmcert_status status) {
    switch (status) {
        case BSMCERT_OK:
            return "ok";
        case BSMCERT_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case BSMCERT_ERR_DIMENSION_MISMATCH:
            return "dimension mismatch";
        case BSMCERT_ERR_NUMERICAL:
            return "numerical error";
        case BSMCERT_ERR_PARSE:
            return "parse error";
        case BSMCERT_ERR_IO:
            return "i/o error";
        case BSMCERT_ERR_MISSING_FIELD:
            return "missing field";
        case BSMCERT_ERR_NULL_POINTER:
            return "null pointer";
        case BSMCERT_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

const char *bsmcert_last_error(void) { return last_error.c_str(); }

void bsmcert_string_free(char *text) { std::free(text); }

bsmcert_status bsmcert_stats_create(bsmcert_stats **out) {
    if (out == nullptr) return null_error("out");
    return guarded([&] { *out = new bsmcert_stats(); });
}

void bsmcert_stats_destroy(bsmcert_stats *stats) { delete stats; }

bsmcert_status bsmcert_stats_set_beta(bsmcert_stats *stats, int k, double beta) {
    if (stats == nullptr) return null_error("stats");
    return guarded([&] {
        check_index(k);
        edit_stats(stats, [&](bsmcert::ExperimentStatistics &s) { s.beta[k] = beta; });
    });
}

bsmcert_status bsmcert_stats_set_p(bsmcert_stats *stats, int k, double p) {
    if (stats == nullptr) return null_error("stats");
    return guarded([&] {
        check_index(k);
        edit_stats(stats, [&](bsmcert::ExperimentStatistics &s) { s.p[k] = p; });
    });
}

bsmcert_status bsmcert_stats_clear(bsmcert_stats *stats, int k) {
    if (stats == nullptr) return null_error("stats");
    return guarded([&] {
        check_index(k);
        stats->stats.beta[k].reset();
        stats->stats.p[k].reset();
    });
}

bsmcert_status bsmcert_stats_set_delta(bsmcert_stats *stats, double delta) {
    if (stats == nullptr) return null_error("stats");
    return guarded([&] { edit_stats(stats, [&](bsmcert::ExperimentStatistics &s) { s.delta = delta; }); });
}

bsmcert_status bsmcert_stats_set_delta_model(bsmcert_stats *stats, bsmcert_delta_model model) {
    if (stats == nullptr) return null_error("stats");
    return guarded([&] {
        if (model != BSMCERT_DELTA_EXPLICIT && model != BSMCERT_DELTA_CHSH_SCALED) {
            bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown delta model");
        }
        stats->stats.delta_model =
            model == BSMCERT_DELTA_EXPLICIT ? bsmcert::DeltaModel::explicit_value : bsmcert::DeltaModel::chsh_scaled;
    });
}

static bsmcert_status get_optional(const std::optional<double> &v, double *value, int *present) {
    if (value == nullptr) return null_error("value");
    if (present == nullptr) return null_error("present");
    *present = v ? 1 : 0;
    if (v) *value = *v;
    last_error.clear();
    return BSMCERT_OK;
}

bsmcert_status bsmcert_stats_get_beta(const bsmcert_stats *stats, int k, double *value, int *present) {
    if (stats == nullptr) return null_error("stats");
    if (k < 0 || k > 3) {
        last_error = "outcome index must be in 0..3";
        return BSMCERT_ERR_INVALID_ARGUMENT;
    }
    return get_optional(stats->stats.beta[k], value, present);
}

bsmcert_status bsmcert_stats_get_p(const bsmcert_stats *stats, int k, double *value, int *present) {
    if (stats == nullptr) return null_error("stats");
    if (k < 0 || k > 3) {
        last_error = "outcome index must be in 0..3";
        return BSMCERT_ERR_INVALID_ARGUMENT;
    }
    return get_optional(stats->stats.p[k], value, present);
}

bsmcert_status bsmcert_stats_get_delta(const bsmcert_stats *stats, double *value, int *present) {
    if (stats == nullptr) return null_error("stats");
    return get_optional(stats->stats.delta, value, present);
}

bsmcert_status bsmcert_stats_load_json(bsmcert_stats *stats, const char *json_text) {
    if (stats == nullptr) return null_error("stats");
    if (json_text == nullptr) return null_error("json_text");
    return guarded([&] { stats->stats = bsmcert::parse_stats(json_text); });
}

bsmcert_status bsmcert_stats_load_file(bsmcert_stats *stats, const char *path) {
    if (stats == nullptr) return null_error("stats");
    if (path == nullptr) return null_error("path");
    return guarded([&] { stats->stats = bsmcert::parse_stats(bsmcert::read_text_file(path)); });
}

bsmcert_status bsmcert_stats_to_json(const bsmcert_stats *stats, char **out) {
    if (stats == nullptr) return null_error("stats");
    if (out == nullptr) return null_error("out");
    return guarded([&] { *out = copy_string(bsmcert::stats_to_string(stats->stats)); });
}

bsmcert_status bsmcert_certify(const bsmcert_stats *stats, bsmcert_mode mode, bsmcert_report **out) {
    if (stats == nullptr) return null_error("stats");
    if (out == nullptr) return null_error("out");
    return guarded([&] {
        bsmcert::CertificationMode m = bsmcert::CertificationMode::deterministic;
        switch (mode) {
            case BSMCERT_MODE_DETERMINISTIC:
                break;
            case BSMCERT_MODE_INDEPENDENT_SOURCES:
                m = bsmcert::CertificationMode::independent_sources;
                break;
            case BSMCERT_MODE_PARTIAL:
                m = bsmcert::CertificationMode::partial;
                break;
            default:
                bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown certification mode");
        }
        *out = new bsmcert_report{bsmcert::certify(stats->stats, m)};
    });
}

void bsmcert_report_destroy(bsmcert_report *report) { delete report; }

bsmcert_status bsmcert_report_get(const bsmcert_report *report, bsmcert_report_values *out) {
    if (report == nullptr) return null_error("report");
    if (out == nullptr) return null_error("out");
    const bsmcert::CertificateReport &r = report->report;
    switch (r.mode) {
        case bsmcert::CertificationMode::deterministic:
            out->mode = BSMCERT_MODE_DETERMINISTIC;
            break;
        case bsmcert::CertificationMode::independent_sources:
            out->mode = BSMCERT_MODE_INDEPENDENT_SOURCES;
            break;
        case bsmcert::CertificationMode::partial:
            out->mode = BSMCERT_MODE_PARTIAL;
            break;
    }
    for (int k = 0; k < 4; ++k) out->f_o_k[k] = r.f_o_k[k];
    out->f_o = r.f_o;
    out->f_i = r.f_i;
    out->f_bsm = r.f_bsm;
    out->f_bsm_independent_sources = r.f_bsm_independent_sources;
    out->f_cond = r.f_cond;
    out->zeta_0 = r.zeta_0;
    out->delta_used = r.delta_used;
    out->flags = r.flags.bits();
    last_error.clear();
    return BSMCERT_OK;
}

bsmcert_status bsmcert_report_render(const bsmcert_report *report, bsmcert_format format, char **out) {
    if (report == nullptr) return null_error("report");
    if (out == nullptr) return null_error("out");
    return guarded([&] {
        if (format == BSMCERT_FORMAT_CSV) {
            *out = copy_string(bsmcert::report_to_csv(report->report));
        } else if (format == BSMCERT_FORMAT_JSON) {
            *out = copy_string(bsmcert::report_to_json(report->report).dump(2) + "\n");
        } else {
            bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown output format");
        }
    });
}

bsmcert_status bsmcert_scenario_create(bsmcert_scenario **out) {
    if (out == nullptr) return null_error("out");
    return guarded([&] { *out = new bsmcert_scenario(); });
}

void bsmcert_scenario_destroy(bsmcert_scenario *scenario) { delete scenario; }

bsmcert_status bsmcert_scenario_set_visibility(bsmcert_scenario *scenario, double visibility) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] {
        edit_config(scenario, [&](bsmcert::ScenarioConfig &c) { c.noise.source_visibility = {visibility, visibility}; });
    });
}

bsmcert_status bsmcert_scenario_set_source_visibility(bsmcert_scenario *scenario, int source, double visibility) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] {
        if (source != 0 && source != 1) bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "source must be 0 or 1");
        edit_config(scenario, [&](bsmcert::ScenarioConfig &c) { c.noise.source_visibility[source] = visibility; });
    });
}

bsmcert_status bsmcert_scenario_set_bsm_depolarization(bsmcert_scenario *scenario, double w) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] { edit_config(scenario, [&](bsmcert::ScenarioConfig &c) { c.noise.bsm_depolarization = w; }); });
}

bsmcert_status bsmcert_scenario_set_misalignment(bsmcert_scenario *scenario, double radians) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded(
        [&] { edit_config(scenario, [&](bsmcert::ScenarioConfig &c) { c.noise.setting_misalignment = radians; }); });
}

bsmcert_status bsmcert_scenario_set_shots(bsmcert_scenario *scenario, uint64_t shots) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] { scenario->config.shots = shots; });
}

bsmcert_status bsmcert_scenario_set_seed(bsmcert_scenario *scenario, uint64_t seed) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] { scenario->config.seed = seed; });
}

bsmcert_status bsmcert_scenario_set_delta_model(bsmcert_scenario *scenario, bsmcert_delta_model model) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] {
        if (model != BSMCERT_DELTA_EXPLICIT && model != BSMCERT_DELTA_CHSH_SCALED) {
            bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown delta model");
        }
        scenario->config.delta_model =
            model == BSMCERT_DELTA_EXPLICIT ? bsmcert::DeltaModel::explicit_value : bsmcert::DeltaModel::chsh_scaled;
    });
}

bsmcert_status bsmcert_scenario_set_delta(bsmcert_scenario *scenario, double delta) {
    if (scenario == nullptr) return null_error("scenario");
    return guarded([&] { edit_config(scenario, [&](bsmcert::ScenarioConfig &c) { c.delta = delta; }); });
}

bsmcert_status bsmcert_scenario_load_config(bsmcert_scenario *scenario, const char *config_text) {
    if (scenario == nullptr) return null_error("scenario");
    if (config_text == nullptr) return null_error("config_text");
    return guarded([&] { scenario->config = bsmcert::parse_scenario_config(config_text); });
}

bsmcert_status bsmcert_scenario_load_config_file(bsmcert_scenario *scenario, const char *path) {
    if (scenario == nullptr) return null_error("scenario");
    if (path == nullptr) return null_error("path");
    return guarded([&] { scenario->config = bsmcert::parse_scenario_config(bsmcert::read_text_file(path)); });
}

bsmcert_status bsmcert_simulate(const bsmcert_scenario *scenario, bsmcert_stats **out) {
    if (scenario == nullptr) return null_error("scenario");
    if (out == nullptr) return null_error("out");
    return guarded([&] { *out = new bsmcert_stats{bsmcert::simulate(scenario->config)}; });
}

bsmcert_status bsmcert_scenario_oracle_json(const bsmcert_scenario *scenario, char **out) {
    if (scenario == nullptr) return null_error("scenario");
    if (out == nullptr) return null_error("out");
    return guarded([&] {
        scenario->config.validate();
        *out = copy_string(bsmcert::truth_to_json(bsmcert::ground_truth(scenario->config)).dump(2) + "\n");
    });
}

void bsmcert_verify_options_default(bsmcert_verify_options *options) {
    if (options == nullptr) return;
    const bsmcert::VerifyOptions d;
    options->grid_points = d.grid_points;
    options->relabeling_grid_points = d.relabeling_grid_points;
    options->extraction_samples = d.extraction_samples;
    options->teleport_trials = d.teleport_trials;
    options->negativity_trials = d.negativity_trials;
    options->lemma1_trials = d.lemma1_trials;
    options->fidelity_trials = d.fidelity_trials;
    options->seed = d.seed;
    options->tolerance = d.tolerance;
    options->convention = BSMCERT_GAIN_CORRECTED;
}

bsmcert_status bsmcert_verify(bsmcert_suite suite, const bsmcert_verify_options *options, int *passed,
                              char **report_json) {
    if (passed == nullptr) return null_error("passed");
    return guarded([&] {
        bsmcert_verify_options o;
        bsmcert_verify_options_default(&o);
        if (options != nullptr) o = *options;
        if (suite < BSMCERT_SUITE_ALL || suite > BSMCERT_SUITE_SOUNDNESS) {
            bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown verification suite");
        }
        const bsmcert::VerificationSummary summary =
            bsmcert::run_verification(static_cast<bsmcert::VerifySuite>(suite), to_options(o));
        *passed = summary.passed() ? 1 : 0;
        if (report_json != nullptr) *report_json = copy_string(bsmcert::verification_to_json(summary).dump(2) + "\n");
    });
}

bsmcert_status bsmcert_figure_csv(bsmcert_figure which, int resolution, char **out) {
    if (out == nullptr) return null_error("out");
    return guarded([&] {
        bsmcert::FigureId id = bsmcert::FigureId::fig3;
        switch (which) {
            case BSMCERT_FIG3:
                break;
            case BSMCERT_FIG5:
                id = bsmcert::FigureId::fig5;
                break;
            case BSMCERT_FIG6:
                id = bsmcert::FigureId::fig6;
                break;
            default:
                bsmcert::fail(bsmcert::ErrorCode::invalid_argument, "unknown figure");
        }
        *out = copy_string(bsmcert::figure_to_csv(bsmcert::figure_table(id, resolution)));
    });
}

bsmcert_status bsmcert_f_o_from_chsh(double beta, double *value, uint32_t *flags) {
    if (value == nullptr) return null_error("value");
    return guarded([&] {
        const bsmcert::BoundValue v = bsmcert::f_o_from_chsh(beta);
        *value = v.value;
        if (flags != nullptr) *flags = v.flags.bits();
    });
}

bsmcert_status bsmcert_f_i_from_delta(double delta, double *value, uint32_t *flags) {
    if (value == nullptr) return null_error("value");
    return guarded([&] {
        const bsmcert::BoundValue v = bsmcert::f_i_from_delta(delta);
        *value = v.value;
        if (flags != nullptr) *flags = v.flags.bits();
    });
}

bsmcert_status bsmcert_independent_sources_threshold(double target, double *beta) {
    if (beta == nullptr) return null_error("beta");
    return guarded([&] { *beta = bsmcert::independent_sources_threshold(target); });
}

}  // extern "C"
