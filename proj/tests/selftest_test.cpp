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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bsmcert/error.hpp"
#include "bsmcert/random.hpp"
#include "bsmcert/selftest.hpp"

namespace bsmcert {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

TEST(ExtractionGainTest, Values) {
    EXPECT_NEAR(extraction_gain(0.0), 0.0, 1e-15);
    EXPECT_NEAR(extraction_gain(kPi / 2), 0.0, 1e-15);
    EXPECT_NEAR(extraction_gain(kPi / 4), 1.0, 1e-15);
    EXPECT_NEAR(extraction_gain(kPi / 4, GainConvention::uncorrected), 1.0 + 2.0 * (1.0 + std::numbers::sqrt2), 1e-13);
    for (double l = 0.0; l <= kPi / 2; l += 0.01) {
        EXPECT_GE(extraction_gain(l), -1e-15);
        EXPECT_LE(extraction_gain(l), 1.0 + 1e-15);
    }
}

TEST(ExtractionChannelTest, BranchesAndValidity) {
    EXPECT_LT(ExtractionChannel(0.3).flip().max_abs_diff(pauli::x()), 1e-15);
    EXPECT_LT(ExtractionChannel(1.2).flip().max_abs_diff(pauli::z()), 1e-15);
    EXPECT_LT(ExtractionChannel(0.3, GainConvention::corrected, FlipBranch::z).flip().max_abs_diff(pauli::z()), 1e-15);
    const ExtractionChannel ok(0.5);
    EXPECT_TRUE(ok.is_valid());
    EXPECT_TRUE(ok.kraus().is_trace_preserving());
    const ExtractionChannel bad(0.5, GainConvention::uncorrected);
    EXPECT_FALSE(bad.is_valid());
    EXPECT_LT(bad.flip_weight(), 0.0);
    EXPECT_THROW(bad.kraus(), Error);
}

TEST(ExtractionChannelTest, DirectEvaluationMatchesKraus) {
    Rng rng(41);
    const QuantumState rho = random_state({2, 2}, rng);
    const ExtractionChannel a(0.4), b(1.1);
    const ComplexMatrix via_kraus = apply_local_pair(a.kraus(), b.kraus(), rho.matrix(), {2, 2});
    EXPECT_LT(a.apply_pair(b, rho.matrix()).max_abs_diff(via_kraus), 1e-14);
}

TEST(JordanTest, TargetStateReachesTsirelsonAtQuarterPi) {
    const KetVector psi = jordan_target_state();
    const ComplexMatrix w = chsh_operator(kPi / 4, kPi / 4);
    EXPECT_NEAR(psi.eigen().dot(w.eigen() * psi.eigen()).real(), kTsirelson, 1e-12);
    EXPECT_LT(jordan_observable(0, 0.0).max_abs_diff(pauli::x()), 1e-15);
    EXPECT_LT(jordan_observable(1, kPi / 2).max_abs_diff(-pauli::z()), 1e-15);
}

TEST(OperatorInequalityTest, HoldsOnCoarseGrid) {
    const OperatorInequalityReport r = verify_operator_inequality(21);
    EXPECT_TRUE(r.passed);
    EXPECT_TRUE(r.channel_valid);
    EXPECT_GE(r.min_eigenvalue, -1e-9);
    EXPECT_GE(r.refined_min_eigenvalue, -1e-9);
    EXPECT_EQ(r.grid_points, 21);
}

TEST(OperatorInequalityTest, UncorrectedGainIsANegativeControl) {
    const OperatorInequalityReport r = verify_operator_inequality(21, GainConvention::uncorrected);
    EXPECT_FALSE(r.passed);
    EXPECT_FALSE(r.channel_valid);
    EXPECT_GT(r.max_gain, 1.0);
    EXPECT_FALSE(verify_extraction_validity(21, GainConvention::uncorrected).passed);
}

TEST(OperatorInequalityTest, ExtractionValidity) {
    const ExtractionValidityReport r = verify_extraction_validity(51);
    EXPECT_TRUE(r.passed);
    EXPECT_LT(r.max_completeness_error, 1e-12);
}

TEST(RelabelingTest, CovarianceHolds) {
    const RelabelingReport r = verify_relabeling_covariance(11);
    EXPECT_TRUE(r.passed);
    for (double v : r.bell_chsh) EXPECT_NEAR(v, kTsirelson, 1e-10);
    EXPECT_LT(r.frame_identity, 1e-12);
}

TEST(TeleportTest, AveragingIdentityAndLowerBound) {
    const TeleportReport r = verify_teleport_identity(20, 5);
    EXPECT_TRUE(r.identity_passed);
    EXPECT_TRUE(r.lower_bound_passed);
    EXPECT_LT(r.max_average_identity_deviation, 1e-10);
    EXPECT_LT(r.max_closed_form_deviation, 1e-8);
    EXPECT_GE(r.min_lower_bound_margin, -1e-9);
}

TEST(TeleportTest, MaximallyEntangledResourceIsPerfect) {
    const TeleportInjection inj = teleport_injection_map(QuantumState::from_ket(schmidt_form_state(0.5), {2, 2}));
    EXPECT_TRUE(inj.channel.is_trace_preserving());
    EXPECT_NEAR(inj.q, 0.5, 1e-12);
    const QuantumState choi(injection_choi_state(inj.channel), {2, 2});
    EXPECT_NEAR(uhlmann_fidelity(choi, bell_ket(0)), 1.0, 1e-10);
}

TEST(TeleportTest, SchmidtFormClosedForm) {
    for (double q : {0.05, 0.2, 0.35, 0.5, 0.7, 0.95}) {
        const KetVector psi = schmidt_form_state(q);
        const TeleportInjection inj = teleport_injection_map(QuantumState::from_ket(psi, {2, 2}));
        EXPECT_TRUE(inj.channel.is_trace_preserving(1e-10));
        const ComplexMatrix choi = injection_choi_state(inj.channel);
        // The Choi state is the even mixture of the resource and its sigma_X (x) sigma_X image.
        const ComplexMatrix xx = kron(pauli::x(), pauli::x());
        const ComplexMatrix expected = (psi.projector() + xx * psi.projector() * xx) * 0.5;
        EXPECT_LT(choi.max_abs_diff(expected), 1e-10) << q;
        const double f = uhlmann_fidelity(QuantumState(choi, {2, 2}), QuantumState::from_ket(psi, {2, 2}));
        EXPECT_NEAR(f, std::sqrt(0.5 + 2.0 * q * (1.0 - q)), 1e-7) << q;
        EXPECT_GE(f + 1e-9, 0.5 + std::sqrt(q * (1.0 - q)));
    }
}

TEST(TeleportTest, RotatedAndMixedResources) {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix u = kron(random_unitary(2, rng), random_unitary(2, rng));
        const double q = 0.1 + 0.08 * trial;
        const ComplexMatrix rotated = u * schmidt_form_state(q).projector() * u.adjoint();
        const QuantumState resource(rotated, {2, 2});
        const TeleportInjection inj = teleport_injection_map(resource);
        EXPECT_TRUE(inj.channel.is_trace_preserving(1e-10));
        EXPECT_NEAR(std::min(inj.q, 1.0 - inj.q), std::min(q, 1.0 - q), 1e-10);
        const ComplexMatrix choi = injection_choi_state(inj.channel);
        // Reference marginal is untouched by the channel.
        EXPECT_LT(partial_trace(choi, {2, 2}, {1}).max_abs_diff(ComplexMatrix::identity(2) * 0.5), 1e-10);
        const QuantumState mixed = random_state({2, 2}, rng, 2);
        EXPECT_TRUE(teleport_injection_map(mixed).channel.is_trace_preserving(1e-9));
    }
}

TEST(PropertyChecksTest, NegativityLemmaAndFidelitySquare) {
    EXPECT_TRUE(verify_negativity_bound(100, 3).passed);
    const Lemma1Report l = verify_lemma1(100, 4);
    EXPECT_TRUE(l.passed);
    EXPECT_GE(l.min_slack, -1e-9);
    const FidelitySquaredReport f = verify_fidelity_squared_bound(100, 5);
    EXPECT_TRUE(f.passed);
    EXPECT_GE(f.min_margin, -1e-9);
}

TEST(JordanFrameTest, ReproducesMeasuredObservables) {
    for (double theta : {0.0, 0.15, -0.4}) {
        const LocalSettings s = LocalSettings::standard(theta);
        for (const SettingPair *pair : {&s.first, &s.second}) {
            const JordanFrame jf = jordan_frame(*pair);
            for (int r = 0; r < 2; ++r) {
                const ComplexMatrix rebuilt = jf.frame * jordan_observable(r, jf.angle) * jf.frame.adjoint();
                EXPECT_LT(rebuilt.max_abs_diff((*pair)[r].observable()), 1e-12);
            }
            EXPECT_NEAR(jf.angle, kPi / 4, 1e-12);
        }
    }
}

TEST(JordanFrameTest, DegenerateAndNarrowPairs) {
    const double c = std::cos(0.3), s = std::sin(0.3);
    const ComplexMatrix n0 = pauli::x() * c + pauli::z() * s;
    const ComplexMatrix n1 = pauli::x() * c - pauli::z() * s;
    for (const auto &[o0, o1] : std::vector<std::pair<ComplexMatrix, ComplexMatrix>>{
             {pauli::x(), pauli::x()}, {pauli::z(), -pauli::z()}, {n0, n1}, {pauli::y(), pauli::x()}}) {
        const SettingPair pair{BinaryObservableSetting(o0, Party::first, 0), BinaryObservableSetting(o1, Party::first, 1)};
        const JordanFrame jf = jordan_frame(pair);
        EXPECT_LT((jf.frame * jf.frame.adjoint()).max_abs_diff(ComplexMatrix::identity(2)), 1e-12);
        EXPECT_LT((jf.frame * jordan_observable(0, jf.angle) * jf.frame.adjoint()).max_abs_diff(o0), 1e-12);
        EXPECT_LT((jf.frame * jordan_observable(1, jf.angle) * jf.frame.adjoint()).max_abs_diff(o1), 1e-12);
    }
}

TEST(GroundTruthTest, NoiselessDevicesArePerfect) {
    const GroundTruth t = ground_truth(ScenarioConfig{});
    for (double f : t.extracted_fidelity) EXPECT_NEAR(f, 1.0, 1e-9);
    EXPECT_NEAR(t.output_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(t.source_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(t.bsm_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(t.conditional_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(t.zeta_0, 1.0, 1e-9);
}

TEST(GroundTruthTest, WernerClosedForms) {
    ScenarioConfig config;
    const double v1 = 0.93, v2 = 0.97, w = 0.06;
    config.noise.source_visibility = {v1, v2};
    config.noise.bsm_depolarization = w;
    const GroundTruth t = ground_truth(config);
    const double v_eff = v1 * v2 * (1.0 - w);
    for (double f : t.extracted_fidelity) EXPECT_NEAR(f, std::sqrt((1.0 + 3.0 * v_eff) / 4.0), 1e-8);
    EXPECT_NEAR(t.source_fidelity, std::sqrt((1.0 + 3.0 * v1) / 4.0) * std::sqrt((1.0 + 3.0 * v2) / 4.0), 1e-8);
    EXPECT_NEAR(t.bsm_fidelity_passthrough, std::sqrt(1.0 - 0.75 * w), 1e-8);
    EXPECT_GE(t.bsm_fidelity + 1e-12, t.bsm_fidelity_passthrough);
    EXPECT_GE(t.bsm_fidelity + 1e-12, t.bsm_fidelity_teleport);
    EXPECT_NEAR(t.schmidt_q[0], 0.5, 1e-9);
}

TEST(SoundnessTest, BoundsNeverExceedTruthOnSmallGrid) {
    std::vector<NoiseModel> grid;
    for (double v : {0.92, 1.0}) {
        for (double w : {0.0, 0.08}) {
            NoiseModel n;
            n.source_visibility = {v, v};
            n.bsm_depolarization = w;
            n.setting_misalignment = 0.15;
            grid.push_back(n);
        }
    }
    const SoundnessReport r = soundness_sweep(grid);
    EXPECT_TRUE(r.passed);
    ASSERT_EQ(r.points.size(), grid.size());
    for (const SoundnessPoint &p : r.points) EXPECT_TRUE(p.violations.empty());
    EXPECT_GE(r.min_margin, -1e-9);
}

TEST(SoundnessTest, DefaultGridCoversTheNoiseBox) {
    const std::vector<NoiseModel> grid = default_noise_grid();
    EXPECT_GE(grid.size(), 50u);
    for (const NoiseModel &n : grid) {
        EXPECT_GE(n.source_visibility[0], 0.9 - 1e-12);
        EXPECT_LE(n.bsm_depolarization, 0.1 + 1e-12);
    }
}

}  // namespace
}  // namespace bsmcert
