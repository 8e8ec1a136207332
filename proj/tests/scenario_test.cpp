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
#include "bsmcert/scenario.hpp"

namespace bsmcert {
namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

QuantumState bell_state(int k) { return QuantumState::from_ket(bell_ket(k), {2, 2}); }

TEST(SettingsTest, StandardObservables) {
    const LocalSettings s = LocalSettings::standard();
    const double h = 1.0 / std::numbers::sqrt2;
    EXPECT_LT(s.first[0].observable().max_abs_diff(pauli::x()), 1e-15);
    EXPECT_LT(s.first[1].observable().max_abs_diff(pauli::z()), 1e-15);
    EXPECT_LT(s.second[0].observable().max_abs_diff((pauli::x() + pauli::z()) * h), 1e-15);
    EXPECT_LT(s.second[1].observable().max_abs_diff((pauli::x() - pauli::z()) * h), 1e-15);
    EXPECT_EQ(s.first[0].party(), Party::first);
    EXPECT_EQ(s.second[1].setting_index(), 1);
}

TEST(SettingsTest, ProjectorsResolveIdentity) {
    const LocalSettings s = LocalSettings::standard(0.3);
    for (const auto &setting : s.second) {
        EXPECT_LT((setting.projector(0) + setting.projector(1)).max_abs_diff(ComplexMatrix::identity(2)), 1e-14);
        EXPECT_LT((setting.projector(0) * setting.projector(0)).max_abs_diff(setting.projector(0)), 1e-14);
    }
}

TEST(SettingsTest, RejectsNonDichotomicObservables) {
    EXPECT_THROW(BinaryObservableSetting(pauli::x() * 0.5, Party::first, 0), Error);
    EXPECT_THROW(BinaryObservableSetting(pauli::x(), Party::first, 2), Error);
    EXPECT_THROW(BinaryObservableSetting(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, Party::first, 0), Error);
}

TEST(ChshTest, EachBellStateReachesTsirelsonUnderItsRelabeling) {
    const LocalSettings s = LocalSettings::standard();
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(chsh_value(bell_state(k), s.first, s.second, relabeling_for_outcome(k)), kTsirelson, 1e-12) << k;
    }
    EXPECT_NEAR(chsh_value(bell_state(1), s.first, s.second), 0.0, 1e-12);
    EXPECT_NEAR(chsh_value(QuantumState::maximally_mixed({2, 2}), s.first, s.second), 0.0, 1e-12);
}

TEST(ChshTest, MatchesExpectationOfChshOperator) {
    Rng rng(31);
    const LocalSettings s = LocalSettings::standard(0.2);
    const ComplexMatrix a0 = s.first[0].observable(), a1 = s.first[1].observable();
    const ComplexMatrix b0 = s.second[0].observable(), b1 = s.second[1].observable();
    const ComplexMatrix w = kron(a0, b0) + kron(a0, b1) + kron(a1, b0) - kron(a1, b1);
    // T_A negates the first observable of B^(1); T_B swaps the settings of B^(2).
    const ComplexMatrix w_flip = -kron(a0, b0) - kron(a0, b1) + kron(a1, b0) - kron(a1, b1);
    const ComplexMatrix w_swap = kron(a0, b1) + kron(a0, b0) + kron(a1, b1) - kron(a1, b0);
    const ComplexMatrix w_both = -kron(a0, b1) - kron(a0, b0) + kron(a1, b1) - kron(a1, b0);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumState rho = random_state({2, 2}, rng);
        auto expect = [&](const ComplexMatrix &op) { return (rho.matrix() * op).trace().real(); };
        EXPECT_NEAR(chsh_value(rho, s.first, s.second), expect(w), 1e-12);
        EXPECT_NEAR(chsh_value(rho, s.first, s.second, Relabeling::flip_first_output), expect(w_flip), 1e-12);
        EXPECT_NEAR(chsh_value(rho, s.first, s.second, Relabeling::swap_second_settings), expect(w_swap), 1e-12);
        EXPECT_NEAR(chsh_value(rho, s.first, s.second, Relabeling::both), expect(w_both), 1e-12);
    }
}

TEST(ChshTest, TablesAreNormalized) {
    Rng rng(32);
    const LocalSettings s = LocalSettings::standard(0.1);
    const CorrelationTable t = correlation_table(random_state({2, 2}, rng), s.first, s.second);
    for (const auto &by_y2 : t)
        for (const auto &cell : by_y2) EXPECT_NEAR(cell[0][0] + cell[0][1] + cell[1][0] + cell[1][1], 1.0, 1e-12);
}

TEST(ChshTest, PartyMismatchAndBadOutcomeAreRejected) {
    const LocalSettings s = LocalSettings::standard();
    EXPECT_THROW(chsh_value(bell_state(0), s.second, s.first), Error);
    EXPECT_THROW(relabeling_for_outcome(4), Error);
    EXPECT_THROW(relabeling_for_outcome(-1), Error);
}

TEST(BsmTest, NoisyPovmClosedForm) {
    const double w = 0.3;
    const MeasurementInstrument bsm = noisy_bsm(w);
    ASSERT_EQ(bsm.outcomes().size(), 4u);
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix expected = bell_projector(k) * (1.0 - w) + ComplexMatrix::identity(4) * (w / 4.0);
        EXPECT_LT(bsm.povm_element(k).max_abs_diff(expected), 1e-12);
    }
    EXPECT_THROW(noisy_bsm(1.5), Error);
}

TEST(BsmTest, IdealBranchTeleportsBellStates) {
    // Swapping |phi00>|phi00> with outcome k leaves |phi_k> on the outer pair, with probability 1/4.
    const QuantumState phi = bell_state(0);
    const ComplexMatrix joint = joint_source_state(phi, phi);
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix out = ideal_bsm().branch(k, joint, {2, 2, 2, 2});
        EXPECT_NEAR(out.trace().real(), 0.25, 1e-12);
        EXPECT_LT((out * 4.0).max_abs_diff(bell_projector(k)), 1e-12) << k;
    }
}

TEST(SourceTest, WernerClosedForm) {
    const QuantumState rho = werner_source(0.8);
    EXPECT_LT(rho.matrix().max_abs_diff(bell_projector(0) * 0.8 + ComplexMatrix::identity(4) * 0.05), 1e-15);
    EXPECT_THROW(werner_source(-0.1), Error);
}

TEST(SourceTest, JointOrderingIsA1A2B1B2) {
    Rng rng(33);
    const QuantumState a = random_state({2}, rng), b = random_state({2}, rng);
    const QuantumState c = random_state({2}, rng), d = random_state({2}, rng);
    const ComplexMatrix joint = joint_source_state(kron(a, b), kron(c, d));
    const ComplexMatrix expected = kron(kron(a.matrix(), c.matrix()), kron(b.matrix(), d.matrix()));
    EXPECT_LT(joint.max_abs_diff(expected), 1e-14);
}

struct NoisePoint {
    double v1, v2, w, theta;
};

class AnalyticScenarioTest : public ::testing::TestWithParam<NoisePoint> {};

TEST_P(AnalyticScenarioTest, StatisticsFollowClosedForms) {
    const NoisePoint n = GetParam();
    ScenarioConfig config;
    config.noise.source_visibility = {n.v1, n.v2};
    config.noise.bsm_depolarization = n.w;
    config.noise.setting_misalignment = n.theta;
    const ExperimentStatistics stats = simulate(config);
    const double shrink = n.v1 * n.v2 * (1.0 - n.w) * std::cos(n.theta);
    for (int k = 0; k < 4; ++k) {
        ASSERT_TRUE(stats.beta[k].has_value());
        EXPECT_NEAR(*stats.beta[k], kTsirelson * shrink, 1e-10) << k;
        EXPECT_NEAR(*stats.p[k], 0.25, 1e-12);
    }
    ASSERT_TRUE(stats.delta.has_value());
    EXPECT_NEAR(*stats.delta, shrink, 1e-10);
    EXPECT_EQ(stats.delta_model, DeltaModel::chsh_scaled);
}

INSTANTIATE_TEST_SUITE_P(NoiseGrid, AnalyticScenarioTest,
                         ::testing::Values(NoisePoint{1, 1, 0, 0}, NoisePoint{0.9, 0.95, 0, 0}, NoisePoint{1, 1, 0.1, 0},
                                           NoisePoint{1, 1, 0, 0.15}, NoisePoint{0.92, 0.97, 0.04, 0.15},
                                           NoisePoint{0.5, 0.6, 0.3, 0.4}));

TEST(ScenarioTest, ExplicitDeltaIsPassedThrough) {
    ScenarioConfig config;
    config.delta_model = DeltaModel::explicit_value;
    config.delta = 0.9;
    EXPECT_DOUBLE_EQ(*simulate(config).delta, 0.9);
    config.delta.reset();
    EXPECT_THROW(simulate(config), Error);
}

TEST(ScenarioTest, ConfigValidation) {
    ScenarioConfig config;
    config.shots = 100;
    EXPECT_THROW(config.validate(), Error);
    config.seed = 1;
    EXPECT_NO_THROW(config.validate());
    config.noise.source_visibility[1] = 1.2;
    EXPECT_THROW(config.validate(), Error);
    config.noise.source_visibility[1] = 1.0;
    config.noise.setting_misalignment = std::nan("");
    EXPECT_THROW(config.validate(), Error);
    config.noise.setting_misalignment = 0.0;
    config.delta = 1.5;
    EXPECT_THROW(config.validate(), Error);
}

TEST(SamplingTest, DeterministicInSeed) {
    ScenarioConfig config;
    config.noise.source_visibility = {0.95, 0.95};
    config.shots = 20000;
    config.seed = 7;
    const ExperimentStatistics a = simulate(config);
    const ExperimentStatistics b = simulate(config);
    EXPECT_EQ(a, b);
    config.seed = 8;
    EXPECT_NE(a, simulate(config));
}

TEST(SamplingTest, AgreesWithAnalyticWithinFiveSigma) {
    ScenarioConfig config;
    config.noise.source_visibility = {0.95, 0.9};
    config.noise.bsm_depolarization = 0.05;
    config.noise.setting_misalignment = 0.15;
    const ExperimentStatistics exact = simulate(config);
    const ExperimentStatistics sampled = sample_statistics(config, 200000, 12345);
    EXPECT_EQ(sampled.shots, 200000u);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        ASSERT_TRUE(sampled.beta[k] && sampled.beta_stderr[k] && sampled.p[k] && sampled.p_stderr[k]);
        EXPECT_GT(*sampled.beta_stderr[k], 0.0);
        EXPECT_LT(std::abs(*sampled.beta[k] - *exact.beta[k]), 5.0 * *sampled.beta_stderr[k]) << k;
        EXPECT_LT(std::abs(*sampled.p[k] - *exact.p[k]), 5.0 * *sampled.p_stderr[k]) << k;
        total += *sampled.p[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(SamplingTest, RejectsZeroShots) {
    EXPECT_THROW(sample_statistics(ScenarioConfig{}, 0, 1), Error);
}

TEST(StatisticsTest, RangeValidation) {
    ExperimentStatistics stats;
    stats.beta = {2.5, 2.5, 2.5, 2.5};
    stats.p = {0.25, 0.25, 0.25, 0.25};
    EXPECT_NO_THROW(stats.validate());
    stats.beta[2] = 2.9;
    EXPECT_THROW(stats.validate(), Error);
    stats.beta[2] = 2.5;
    stats.p[0] = 0.5;
    EXPECT_THROW(stats.validate(), Error);
    stats.p[0] = -0.01;
    EXPECT_THROW(stats.validate(), Error);
    stats.p[0] = 0.25;
    stats.delta = 1.01;
    EXPECT_THROW(stats.validate(), Error);
}

TEST(StatisticsTest, ChshScaledDeltaIsWeightedAndClamped) {
    ExperimentStatistics stats;
    stats.beta = {2.8, 2.0, std::nullopt, std::nullopt};
    stats.p = {0.75, 0.25, 0.0, 0.0};
    EXPECT_NEAR(chsh_scaled_delta(stats), (0.75 * 2.8 + 0.25 * 2.0) / kTsirelson, 1e-15);
    stats.beta = {-1.0, std::nullopt, std::nullopt, std::nullopt};
    EXPECT_EQ(chsh_scaled_delta(stats), 0.0);
    stats.beta = {};
    EXPECT_THROW(chsh_scaled_delta(stats), Error);
    stats.delta_model = DeltaModel::explicit_value;
    EXPECT_THROW(effective_delta(stats), Error);
    stats.delta = 0.8;
    EXPECT_EQ(effective_delta(stats), 0.8);
}

}  // namespace
}  // namespace bsmcert
