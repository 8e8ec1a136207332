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

#pragma once

#include <string>

#include "bsmcert/bounds.hpp"
#include "bsmcert/figures.hpp"
#include "bsmcert/scenario.hpp"
#include "bsmcert/selftest.hpp"
#include "bsmcert/verify.hpp"
#include "json.hpp"

namespace bsmcert {

using Json = nlohmann::ordered_json;

/// Locale-independent decimal with 12 significant digits, used for CSV cells.
std::string format_number(double value);

const char *delta_model_name(DeltaModel model);
DeltaModel parse_delta_model(const std::string &name);
const char *mode_name(CertificationMode mode);
CertificationMode parse_mode(const std::string &name);

/// Statistics document:
///   {"beta": [b0, b1, b2, b3], "p": [...], "delta": d, "delta_model": "explicit" | "chsh-scaled",
///    "shots": n, "beta_stderr": [...], "p_stderr": [...], "beta_raw": [...]}
/// Array entries may be null; every key except beta and p is optional.
Json stats_to_json(const ExperimentStatistics &stats);
ExperimentStatistics stats_from_json(const Json &doc);
std::string stats_to_string(const ExperimentStatistics &stats);
/// Also accepts a document whose "statistics" member holds the statistics.
ExperimentStatistics parse_stats(const std::string &text);

/// NaN fields are written as null.
Json report_to_json(const CertificateReport &report);
/// Header row plus one value row; NaN fields are empty cells.
std::string report_to_csv(const CertificateReport &report);

Json truth_to_json(const GroundTruth &truth);
Json verification_to_json(const VerificationSummary &summary);

/// key = value lines, '#' starts a comment. Keys: visibility,
/// source1_visibility, source2_visibility, bsm_depolarization, misalignment,
/// shots, seed, delta_model, delta. Unknown keys are an error.
ScenarioConfig parse_scenario_config(const std::string &text);

/// Header row (x label, curve labels) then one row per abscissa. Cells whose
/// bound is outside its regime hold the text "regime_violated".
std::string figure_to_csv(const FigureTable &table);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &contents);

}  // namespace bsmcert
