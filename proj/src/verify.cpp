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

#include "bsmcert/verify.hpp"

#include <algorithm>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

bool includes(VerifySuite selected, VerifySuite part) { return selected == VerifySuite::all || selected == part; }

CheckResult operator_check(const VerifyOptions &o) {
    const OperatorInequalityReport r = verify_operator_inequality(o.grid_points, o.convention, o.tolerance);
    CheckResult c{"operator_inequality", r.passed, {}, {}};
    c.metrics = {{"grid_points", r.grid_points},
                 {"min_eigenvalue", r.min_eigenvalue},
                 {"worst_a", r.worst_a},
                 {"worst_b", r.worst_b},
                 {"refined_min_eigenvalue", r.refined_min_eigenvalue},
                 {"min_gain", r.min_gain},
                 {"max_gain", r.max_gain},
                 {"channel_valid", r.channel_valid ? 1.0 : 0.0}};
    if (o.convention == GainConvention::corrected) {
        c.notes.emplace_back("g(lambda) = (1 + sqrt 2)(sin lambda + cos lambda - 1); the +1 variant is not completely positive");
    } else {
        c.notes.emplace_back("negative control: g(lambda) = (1 + sqrt 2)(sin lambda + cos lambda + 1)");
    }
    if (!r.channel_valid) c.notes.emplace_back("extraction map leaves [0, 1] gain range: not completely positive");
    return c;
}

CheckResult extraction_check(const VerifyOptions &o) {
    const ExtractionValidityReport r = verify_extraction_validity(o.extraction_samples, o.convention);
    return CheckResult{"extraction_channel_validity",
                       r.passed,
                       {{"samples", r.samples},
                        {"max_completeness_error", r.max_completeness_error},
                        {"min_gain", r.min_gain},
                        {"max_gain", r.max_gain}},
                       {}};
}

CheckResult fidelity_check(const VerifyOptions &o) {
    const FidelitySquaredReport r = verify_fidelity_squared_bound(o.fidelity_trials, o.seed, o.convention, o.tolerance);
    return CheckResult{"fidelity_squared_bound", r.passed, {{"trials", r.trials}, {"min_margin", r.min_margin}}, {}};
}

CheckResult relabeling_check(const VerifyOptions &o) {
    const RelabelingReport r = verify_relabeling_covariance(o.relabeling_grid_points);
    CheckResult c{"relabeling_covariance", r.passed, {}, {}};
    c.metrics = {{"grid_points", r.grid_points},
                 {"second_party_conjugation", r.second_party_conjugation},
                 {"first_party_conjugation", r.first_party_conjugation},
                 {"second_party_commutation", r.second_party_commutation},
                 {"first_party_commutation", r.first_party_commutation},
                 {"branch_boundary", r.branch_boundary},
                 {"frame_identity", r.frame_identity},
                 {"bell_targets", r.bell_targets}};
    for (int k = 0; k < 4; ++k) c.metrics.emplace_back("chsh_phi_" + std::to_string(k), r.bell_chsh[k]);
    return c;
}

std::vector<CheckResult> teleport_checks(const VerifyOptions &o) {
    const TeleportReport r = verify_teleport_identity(o.teleport_trials, o.seed);
    CheckResult identity{"teleport_averaging_identity",
                         r.identity_passed,
                         {{"trials", r.trials}, {"max_deviation", r.max_average_identity_deviation}},
                         {}};
    CheckResult bound{"teleport_fidelity_lower_bound",
                      r.lower_bound_passed,
                      {{"min_margin", r.min_lower_bound_margin},
                       {"max_closed_form_deviation", r.max_closed_form_deviation},
                       {"max_deviation_from_half_plus_sqrt_q", r.max_stated_value_deviation},
                       {"worst_q", r.worst_q}},
                      {}};
    if (!r.stated_value_passed) {
        bound.notes.emplace_back(
            "F equals sqrt(1/2 + 2q(1-q)), which exceeds 1/2 + sqrt(q(1-q)) except at q = 0, 1/2, 1; "
            "only the inequality is asserted");
    }
    const NegativityReport n = verify_negativity_bound(o.negativity_trials, o.seed, o.tolerance);
    CheckResult neg{"negativity_bound", n.passed, {{"trials", n.trials}, {"min_margin", n.min_margin}}, {}};
    return {identity, bound, neg};
}

CheckResult lemma1_check(const VerifyOptions &o) {
    const Lemma1Report r = verify_lemma1(o.lemma1_trials, o.seed, o.tolerance);
    return CheckResult{"lemma1",
                       r.passed,
                       {{"trials", r.trials}, {"min_slack", r.min_slack}, {"min_rhs_margin", r.min_rhs_margin}},
                       {}};
}

CheckResult soundness_check(const VerifyOptions &o) {
    const SoundnessReport r = soundness_sweep(default_noise_grid(), o.tolerance);
    CheckResult c{"soundness", r.passed, {{"points", static_cast<double>(r.points.size())}, {"min_margin", r.min_margin}}, {}};
    for (const SoundnessPoint &p : r.points) {
        for (const std::string &v : p.violations) {
            c.notes.push_back(v + " at v=" + std::to_string(p.noise.source_visibility[0]) +
                              " w=" + std::to_string(p.noise.bsm_depolarization) +
                              " misalignment=" + std::to_string(p.noise.setting_misalignment));
        }
    }
    return c;
}

}  // namespace

bool VerificationSummary::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

VerificationSummary run_verification(VerifySuite suite, const VerifyOptions &options) {
    VerificationSummary summary;
    summary.suite = suite;
    if (includes(suite, VerifySuite::operator_inequality)) {
        summary.checks.push_back(operator_check(options));
        summary.checks.push_back(extraction_check(options));
        summary.checks.push_back(fidelity_check(options));
    }
    if (includes(suite, VerifySuite::relabeling)) summary.checks.push_back(relabeling_check(options));
    if (includes(suite, VerifySuite::teleport)) {
        for (CheckResult &c : teleport_checks(options)) summary.checks.push_back(std::move(c));
    }
    if (includes(suite, VerifySuite::lemma1)) summary.checks.push_back(lemma1_check(options));
    if (includes(suite, VerifySuite::soundness)) summary.checks.push_back(soundness_check(options));
    return summary;
}

const char *suite_name(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::all:
            return "all";
        case VerifySuite::operator_inequality:
            return "operator_inequality";
        case VerifySuite::relabeling:
            return "relabeling";
        case VerifySuite::teleport:
            return "teleport";
        case VerifySuite::lemma1:
            return "lemma1";
        case VerifySuite::soundness:
            return "soundness";
    }
    return "all";
}

VerifySuite parse_suite(const std::string &name) {
    for (VerifySuite s : {VerifySuite::all, VerifySuite::operator_inequality, VerifySuite::relabeling,
                          VerifySuite::teleport, VerifySuite::lemma1, VerifySuite::soundness}) {
        if (name == suite_name(s)) return s;
    }
    fail(ErrorCode::invalid_argument, "unknown verification suite '" + name + "'");
}

}  // namespace bsmcert
