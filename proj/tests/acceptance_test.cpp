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

// Release acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bsmcert/bounds.hpp"
#include "bsmcert/figures.hpp"
#include "bsmcert/scenario.hpp"
#include "bsmcert/selftest.hpp"

namespace {

using namespace bsmcert;

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char *pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Outcome ideal_point() {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentStatistics stats = simulate(ScenarioConfig{});
    const CertificateReport r = certify(stats, CertificationMode::deterministic);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double beta_dev = 0.0, p_dev = 0.0;
    for (int k = 0; k < 4; ++k) {
        beta_dev = std::max(beta_dev, std::abs(*stats.beta[k] - kTsirelson));
        p_dev = std::max(p_dev, std::abs(*stats.p[k] - 0.25));
    }
    const double f_dev = std::abs(r.f_bsm - 1.0);
    return {beta_dev <= 1e-9 && p_dev <= 1e-12 && f_dev <= 1e-9 && seconds < 1.0,
            fmt("max|beta-2sqrt2|=%.2e max|p-1/4|=%.2e |f_bsm-1|=%.2e", beta_dev, p_dev, f_dev) +
                fmt(" time=%.3fs", seconds)};
}

Outcome bsm_curves() {
    const auto start = std::chrono::steady_clock::now();
    const FigureTable t = figure_table(FigureId::fig3, 4001);
    double dev_full = 0.0, dev_scaled = 0.0;
    double crossing = std::nan("");
    const double ds = BoundConstants::delta_star;
    for (size_t i = 0; i < t.x.size(); ++i) {
        const double beta = t.x[i];
        const double radicand = 1.0 - 0.5 * (kTsirelson - beta) / (kTsirelson - BoundConstants::beta_star);
        const double fo = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
        dev_full = std::max(dev_full, std::abs(t.rows[i][0].value - fo));
        const double delta = beta / kTsirelson;
        const double fi_radicand = 0.25 * (1.0 + 3.0 * (delta - ds) / (1.0 - ds));
        const double fi = fi_radicand > 0.0 ? std::sqrt(fi_radicand) : 0.0;
        const double angle = std::acos(fo) + std::acos(fi);
        const double scaled = angle > std::numbers::pi / 2 ? 0.0 : std::cos(angle);
        dev_scaled = std::max(dev_scaled, std::abs(t.rows[i][1].value - scaled));
        if (i > 0 && std::isnan(crossing) && t.rows[i - 1][2].value < kInvSqrt2 && t.rows[i][2].value >= kInvSqrt2) {
            crossing = beta;
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {dev_full <= 1e-12 && dev_scaled <= 1e-12 && crossing >= 2.72 && crossing <= 2.74 && seconds < 1.0,
            fmt("delta=1 dev=%.2e scaled dev=%.2e crossing=%.4f", dev_full, dev_scaled, crossing) +
                fmt(" time=%.3fs", seconds)};
}

Outcome threshold_constants() {
    const double beta_star = 2.0 * (8.0 + 7.0 * std::numbers::sqrt2) / 17.0;
    const double fo_dev = std::abs(f_o_from_chsh(beta_star).value - kInvSqrt2);
    const double fi_dev = std::abs(f_i_from_delta(0.744).value - 0.5);
    double affine_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double beta = beta_star + (kTsirelson - beta_star) * i / 999.0;
        const double f = f_o_from_chsh(beta).value;
        affine_dev = std::max(affine_dev, std::abs(BoundConstants::s * beta + BoundConstants::mu - f * f));
    }
    return {fo_dev <= 1e-12 && fi_dev <= 1e-12 && affine_dev <= 1e-12,
            fmt("|F(beta*)-1/sqrt2|=%.2e |F_i(0.744)-1/2|=%.2e affine dev=%.2e", fo_dev, fi_dev, affine_dev)};
}

Outcome operator_inequality_check() {
    const auto start = std::chrono::steady_clock::now();
    const OperatorInequalityReport r = verify_operator_inequality(101, GainConvention::corrected, 1e-9);
    const ExtractionValidityReport control = verify_extraction_validity(101, GainConvention::uncorrected);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = r.min_eigenvalue >= -1e-9 && r.channel_valid && !control.passed && seconds < 10.0;
    return {ok, fmt("min eig=%.3e (refined %.3e) uncorrected max g=%.3f", r.min_eigenvalue, r.refined_min_eigenvalue,
                    control.max_gain) +
                    (control.passed ? " control valid" : " control invalid") + fmt(" time=%.3fs", seconds)};
}

Outcome relabeling_covariance() {
    const RelabelingReport r = verify_relabeling_covariance(51, 1e-10);
    double worst = std::max({r.second_party_conjugation, r.first_party_conjugation, r.second_party_commutation,
                             r.first_party_commutation});
    double chsh_dev = 0.0;
    const LocalSettings s = LocalSettings::standard();
    for (int k = 0; k < 4; ++k) {
        const double v = chsh_value(QuantumState::from_ket(bell_ket(k), {2, 2}), s.first, s.second, relabeling_for_outcome(k));
        chsh_dev = std::max(chsh_dev, std::abs(v - kTsirelson));
    }
    return {r.passed && worst <= 1e-10 && chsh_dev <= 1e-9,
            fmt("max identity dev=%.2e max|chsh-2sqrt2|=%.2e", worst, chsh_dev)};
}

Outcome teleport_identity() {
    const TeleportReport r = verify_teleport_identity(100, 20190523, 1e-8);
    return {r.stated_value_passed,
            fmt("max|F-(1/2+sqrt(q(1-q)))|=%.3e at q=%.3f; exact sqrt(1/2+2q(1-q)) dev=%.2e", r.max_stated_value_deviation,
                r.worst_q, r.max_closed_form_deviation)};
}

Outcome negativity_property() {
    const NegativityReport r = verify_negativity_bound(1000, 20190523, 1e-9);
    return {r.passed, fmt("min margin=%.3e", r.min_margin)};
}

Outcome branch_fidelity_property() {
    const Lemma1Report r = verify_lemma1(500, 20190523, 1e-9);
    return {r.passed, fmt("min slack=%.3e", r.min_slack)};
}

Outcome soundness_sweep_check() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<NoiseModel> grid = default_noise_grid();
    const SoundnessReport r = soundness_sweep(grid, 1e-9);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {r.passed && grid.size() >= 50 && seconds < 60.0,
            fmt("points=%.0f min margin=%.3e time=%.3fs", static_cast<double>(grid.size()), r.min_margin, seconds)};
}

Outcome partial_curves() {
    ExperimentStatistics stats;
    stats.beta[0] = kTsirelson;
    stats.p[0] = 0.25;
    stats.delta = 1.0;
    const CertificateReport r = certify(stats, CertificationMode::partial);
    const double cond_dev = std::abs(r.f_cond - 1.0);
    const double zeta_dev = std::abs(r.zeta_0 - 1.0);
    bool monotone = true;
    for (FigureId id : {FigureId::fig5, FigureId::fig6}) {
        const FigureTable t = figure_table(id, 1001);
        for (size_t c = 0; c < t.curve_labels.size(); ++c) {
            double previous = -1.0;
            for (size_t i = 0; i < t.x.size(); ++i) {
                const BoundValue &v = t.rows[i][c];
                if (v.flags.has(BoundFlag::regime_violated)) continue;
                if (v.value < previous) monotone = false;
                previous = v.value;
            }
        }
    }
    return {cond_dev <= 1e-9 && zeta_dev <= 1e-9 && monotone,
            fmt("|f_cond-1|=%.2e |zeta0-1|=%.2e", cond_dev, zeta_dev) + (monotone ? " monotone" : " not monotone")};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{
        ideal_point,        bsm_curves,        threshold_constants, operator_inequality_check, relabeling_covariance,
        teleport_identity,  negativity_property, branch_fidelity_property, soundness_sweep_check, partial_curves};
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu: %s %s\n", i + 1, o.passed ? "PASS" : "FAIL", o.detail.c_str());
        if (!o.passed) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
