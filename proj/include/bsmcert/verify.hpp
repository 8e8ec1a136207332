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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bsmcert/selftest.hpp"

namespace bsmcert {

enum class VerifySuite { all, operator_inequality, relabeling, teleport, lemma1, soundness };

struct VerifyOptions {
    int grid_points = 101;
    int relabeling_grid_points = 51;
    int extraction_samples = 101;
    int teleport_trials = 100;
    int negativity_trials = 1000;
    int lemma1_trials = 500;
    int fidelity_trials = 500;
    std::uint64_t seed = 20190523;
    double tolerance = kDefaultTolerances.positivity;
    GainConvention convention = GainConvention::corrected;
};

/// One named property with its outcome and the numbers behind it.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;
};

struct VerificationSummary {
    VerifySuite suite = VerifySuite::all;
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Runs the selected properties. Failures are recorded, never thrown.
VerificationSummary run_verification(VerifySuite suite, const VerifyOptions &options = {});

const char *suite_name(VerifySuite suite);
/// Throws ErrorCode::invalid_argument on an unknown name.
VerifySuite parse_suite(const std::string &name);

}  // namespace bsmcert
