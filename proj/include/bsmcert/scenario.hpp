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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bsmcert/linalg.hpp"

namespace bsmcert {

/// The two parties measuring the post-BSM state: B^(1) and B^(2).
enum class Party { first, second };

/// Dichotomic (+1/-1 valued) qubit observable used as one measurement setting.
class BinaryObservableSetting {
   public:
    BinaryObservableSetting(ComplexMatrix observable, Party party, int setting_index);

    const ComplexMatrix &observable() const { return observable_; }
    Party party() const { return party_; }
    int setting_index() const { return index_; }
    /// Projector onto outcome b (b = 0 for eigenvalue +1).
    ComplexMatrix projector(int outcome) const;

   private:
    ComplexMatrix observable_;
    Party party_;
    int index_;
};

using SettingPair = std::array<BinaryObservableSetting, 2>;

/// Classical post-processing of CHSH statistics. `flip_first_output` negates
/// the first observable of B^(1) (T_A); `swap_second_settings` exchanges the
/// two settings of B^(2) (T_B).
enum class Relabeling { none, flip_first_output, swap_second_settings, both };

/// Relabeling under which outcome k's heralded Bell state |phi_k> reaches 2 sqrt 2
/// with the standard settings: T_B for k = 1, T_A for k = 2, both for k = 3.
Relabeling relabeling_for_outcome(int k);

struct LocalSettings {
    SettingPair first;
    SettingPair second;

    /// B^(1) measures (sigma_X, sigma_Z); B^(2) measures
    /// ((sigma_X + sigma_Z)/sqrt 2, (sigma_X - sigma_Z)/sqrt 2), both rotated
    /// about the Y axis by `misalignment` radians.
    static LocalSettings standard(double misalignment = 0.0);
};

/// p(b1 b2 | y1 y2) for a two-qubit state, indexed [y1][y2][b1][b2].
using CorrelationTable = std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2>;

CorrelationTable correlation_table(const QuantumState &state, const SettingPair &first, const SettingPair &second);

/// sum (-1)^{b1+b2+y1 y2} p(b1 b2 | y1 y2) after the requested relabeling.
double chsh_from_table(const CorrelationTable &table, Relabeling relabeling);

double chsh_value(const QuantumState &state, const SettingPair &first, const SettingPair &second,
                  Relabeling relabeling = Relabeling::none);

/// Instrument whose branches act on the input factors and trace them out:
/// M_k[rho] = Tr_A sum_j (K_kj (x) 1) rho (K_kj (x) 1)^dagger.
class MeasurementInstrument {
   public:
    struct Outcome {
        int label;
        std::vector<ComplexMatrix> kraus_ops;
    };

    /// Throws unless sum_k sum_j K^dagger K = 1 within `completeness_tol`.
    MeasurementInstrument(std::vector<Outcome> outcomes, Dims input_dims,
                          double completeness_tol = kDefaultTolerances.completeness);

    const std::vector<Outcome> &outcomes() const { return outcomes_; }
    const Dims &input_dims() const { return input_dims_; }
    int input_dim() const { return total_dim(input_dims_); }

    ComplexMatrix povm_element(int index) const;

    /// Unnormalized post-measurement operator on the non-input factors.
    /// `rho` must list the input factors first.
    ComplexMatrix branch(int index, const ComplexMatrix &rho, const Dims &rho_dims) const;

   private:
    std::vector<Outcome> outcomes_;
    Dims input_dims_;
};

/// Projective measurement onto the four Bell states of a 2 (x) 2 input.
MeasurementInstrument ideal_bsm();

/// POVM elements (1 - w)|phi_k><phi_k| + w 1/4.
MeasurementInstrument noisy_bsm(double depolarization);

/// v |phi_00><phi_00| + (1 - v) 1/4 on (A_i, B_i).
QuantumState werner_source(double visibility);

struct NoiseModel {
    std::array<double, 2> source_visibility{1.0, 1.0};
    double bsm_depolarization = 0.0;
    double setting_misalignment = 0.0;

    void validate() const;
};

enum class DeltaModel { explicit_value, chsh_scaled };

/// Observed data of the two-step protocol.
struct ExperimentStatistics {
    std::array<std::optional<double>, 4> beta{};
    std::array<std::optional<double>, 4> p{};
    std::optional<double> delta;
    DeltaModel delta_model = DeltaModel::explicit_value;

    // Populated in finite-statistics mode only.
    std::uint64_t shots = 0;
    std::array<std::optional<double>, 4> beta_stderr{};
    std::array<std::optional<double>, 4> p_stderr{};
    std::array<std::optional<double>, 4> beta_raw{};

    /// Range checks on beta, p and delta.
    void validate() const;

    bool operator==(const ExperimentStatistics &) const = default;
};

/// delta = beta_bar / (2 sqrt 2) with beta_bar the p-weighted mean of the
/// defined beta_k, clamped to [0, 1].
double chsh_scaled_delta(const ExperimentStatistics &stats);

/// Resolves the delta to use for certification: the explicit value or the
/// CHSH-scaled model. Throws if an explicit value is required but absent.
double effective_delta(const ExperimentStatistics &stats);

struct ProtocolOutcome {
    ExperimentStatistics stats;
    std::array<std::optional<QuantumState>, 4> conditional_states;
    /// Full input state on (A1, A2, B1, B2).
    ComplexMatrix joint_state;
};

/// Sources are two-qubit states on (A_i, B_i). The BSM acts on (A1, A2).
ProtocolOutcome run_protocol(const QuantumState &source1, const QuantumState &source2, const MeasurementInstrument &bsm,
                             const LocalSettings &settings, DeltaModel delta_model,
                             std::optional<double> explicit_delta = std::nullopt);

/// Reorders source1 (x) source2 from (A1, B1, A2, B2) to (A1, A2, B1, B2).
ComplexMatrix joint_source_state(const QuantumState &source1, const QuantumState &source2);

struct ScenarioConfig {
    NoiseModel noise;
    /// 0 selects the analytic (infinite-statistics) mode.
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    DeltaModel delta_model = DeltaModel::chsh_scaled;
    std::optional<double> delta;

    void validate() const;
};

/// Analytic protocol run for the configured noise.
ProtocolOutcome run_scenario(const ScenarioConfig &config);

/// Finite statistics: one multinomial draw of `shots` rounds over
/// (k, y1, y2, b1, b2) with uniformly random settings. Deterministic in `seed`.
ExperimentStatistics sample_statistics(const ScenarioConfig &config, std::uint64_t shots, std::uint64_t seed);

/// Analytic when config.shots == 0, sampled otherwise (seed required).
ExperimentStatistics simulate(const ScenarioConfig &config);

}  // namespace bsmcert
