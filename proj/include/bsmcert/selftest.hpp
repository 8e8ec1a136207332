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
#include <string>
#include <vector>

#include "bsmcert/bounds.hpp"
#include "bsmcert/channel.hpp"
#include "bsmcert/linalg.hpp"
#include "bsmcert/scenario.hpp"

namespace bsmcert {

/// Which sign the constant takes in g(lambda) = (1 + sqrt 2)(sin + cos -/+ 1).
/// `uncorrected` (+1) is kept only as a negative control: it gives g > 1 and
/// hence a map that is not completely positive.
enum class GainConvention { corrected, uncorrected };

double extraction_gain(double lambda, GainConvention convention = GainConvention::corrected);

/// Branch of the flip operator sigma_lambda. `automatic` is sigma_X for
/// lambda <= pi/4 and sigma_Z above.
enum class FlipBranch { automatic, x, z };

/// Lambda_lambda[rho] = (1+g)/2 rho + (1-g)/2 sigma_lambda rho sigma_lambda.
class ExtractionChannel {
   public:
    explicit ExtractionChannel(double lambda, GainConvention convention = GainConvention::corrected,
                               FlipBranch branch = FlipBranch::automatic);

    double lambda() const { return lambda_; }
    double gain() const { return gain_; }
    const ComplexMatrix &flip() const { return flip_; }
    double keep_weight() const { return 0.5 * (1.0 + gain_); }
    double flip_weight() const { return 0.5 * (1.0 - gain_); }

    /// g in [0, 1], i.e. both weights non-negative (complete positivity).
    bool is_valid(double tol = kDefaultTolerances.positivity) const;
    /// Two-element Kraus set; throws if the map is not completely positive.
    KrausChannel kraus() const;
    /// Evaluates the weighted sum directly, so it also works for the
    /// non-positive negative-control map.
    ComplexMatrix apply(const ComplexMatrix &rho) const;
    ComplexMatrix apply_pair(const ExtractionChannel &second, const ComplexMatrix &rho) const;

   private:
    double lambda_;
    double gain_;
    ComplexMatrix flip_;
};

/// Qubit observable cos(a) sigma_X + (-1)^r sin(a) sigma_Z.
ComplexMatrix jordan_observable(int r, double angle);

struct JordanMeasurement {
    double angle = 0.0;
    ComplexMatrix observable(int r) const { return jordan_observable(r, angle); }
};

/// W_{a,b} = sum_{r,t} (-1)^{r t} A_r(a) (x) B_t(b).
ComplexMatrix chsh_operator(double a, double b);

/// U = -exp(i pi/8 sigma_Y) sigma_X; the self-tested state is (U (x) 1)|phi_00>.
ComplexMatrix jordan_frame_unitary();
KetVector jordan_target_state();
/// Relabeling unitaries U_A = exp(-i pi/4 sigma_Y) sigma_X and U_B = sigma_X.
ComplexMatrix relabel_unitary_first();
ComplexMatrix relabel_unitary_second();

/// (Lambda_a (x) Lambda_b)[|Psi><Psi|] - s W_{a,b} - mu 1.
ComplexMatrix operator_inequality_matrix(double a, double b, GainConvention convention = GainConvention::corrected);

struct OperatorInequalityReport {
    int grid_points = 0;
    GainConvention convention = GainConvention::corrected;
    double min_eigenvalue = 0.0;
    double worst_a = 0.0;
    double worst_b = 0.0;
    /// Minimum after densifying the grid around the worst grid point.
    double refined_min_eigenvalue = 0.0;
    double min_gain = 0.0;
    double max_gain = 0.0;
    bool channel_valid = false;
    bool passed = false;
};

OperatorInequalityReport verify_operator_inequality(int grid_points, GainConvention convention = GainConvention::corrected,
                                                    double tol = kDefaultTolerances.positivity);

struct ExtractionValidityReport {
    int samples = 0;
    double max_completeness_error = 0.0;
    double min_gain = 0.0;
    double max_gain = 0.0;
    bool passed = false;
};

/// Kraus completeness and g in [0, 1] at `samples` values of lambda in [0, pi/2].
ExtractionValidityReport verify_extraction_validity(int samples, GainConvention convention = GainConvention::corrected);

struct RelabelingReport {
    int grid_points = 0;
    double second_party_conjugation = 0.0;  // T_B(W) = (1 (x) U_B) W (1 (x) U_B)
    double first_party_conjugation = 0.0;   // T_A(W) = (U_A (x) 1) W_{pi/2-a,b} (U_A (x) 1)^dagger
    double second_party_commutation = 0.0;  // U_B o Lambda_b = Lambda_b o U_B
    double first_party_commutation = 0.0;   // U_A o Lambda_a = Lambda_{pi/2-a} o U_A
    double branch_boundary = 0.0;           // both sigma_lambda branches at lambda = pi/4
    double frame_identity = 0.0;            // U^dagger U_A U = sigma_Z
    double bell_targets = 0.0;              // (U_A^j (x) U_B^l)|Psi> vs (U (x) 1)|phi_jl>, up to phase
    std::array<double, 4> bell_chsh{};      // standard boxes + relabeling on |phi_k>
    double tol = 1e-10;
    bool passed = false;
};

RelabelingReport verify_relabeling_covariance(int grid_points = 51, double tol = 1e-10);

/// Channel from the teleportation of an input qubit through a purification
/// of rho' (on A (x) B with B a qubit): Bell measurement of the input with
/// B in B's Schmidt basis, sigma_z^j / sigma_x^l correction on the Schmidt
/// subspace of A E, E traced out.
struct TeleportInjection {
    KrausChannel channel;
    /// Schmidt weight of |0>_B.
    double q = 0.5;
    /// Schmidt basis of B as columns (identity when rho'_B is degenerate or
    /// already diagonal).
    ComplexMatrix schmidt_basis;
};

TeleportInjection teleport_injection_map(const QuantumState &rho_prime);

/// (channel (x) 1)[|phi_00><phi_00|] ordered (output, reference).
ComplexMatrix injection_choi_state(const KrausChannel &channel);

/// sqrt(q) |00> + sqrt(1 - q) |11>.
KetVector schmidt_form_state(double q);

struct TeleportReport {
    int trials = 0;
    double max_average_identity_deviation = 0.0;
    /// |F - (1/2 + sqrt(q(1-q)))|, the value stated for the teleported state.
    double max_stated_value_deviation = 0.0;
    /// |F - sqrt(1/2 + 2 q (1-q))|, the exact Uhlmann fidelity.
    double max_closed_form_deviation = 0.0;
    /// min over trials of F - (1/2 + sqrt(q(1-q))).
    double min_lower_bound_margin = 0.0;
    double worst_q = 0.0;
    bool identity_passed = false;
    bool stated_value_passed = false;
    bool lower_bound_passed = false;
};

TeleportReport verify_teleport_identity(int trials, std::uint64_t seed, double value_tol = 1e-8);

struct NegativityReport {
    int trials = 0;
    double min_margin = 0.0;  // N(rho) - (<phi00|rho|phi00> - 1/2)
    bool passed = false;
};

NegativityReport verify_negativity_bound(int trials, std::uint64_t seed, double tol = kDefaultTolerances.positivity);

struct Lemma1Report {
    int trials = 0;
    /// min of sqrt(q0 p0) F(rho0, sigma0) - F + sqrt((1-p0)(1-q0)).
    double min_slack = 0.0;
    /// min of F(rho0, sigma0) - lemma1_rhs(...).
    double min_rhs_margin = 0.0;
    bool passed = false;
};

Lemma1Report verify_lemma1(int trials, std::uint64_t seed, double tol = kDefaultTolerances.positivity);

struct FidelitySquaredReport {
    int trials = 0;
    double min_margin = 0.0;  // F^2 - (s beta + mu)
    bool passed = false;
};

/// F^2((Lambda_a (x) Lambda_b)[rho], Psi) >= s Tr(rho W_{a,b}) + mu for
/// random two-qubit states and angles.
FidelitySquaredReport verify_fidelity_squared_bound(int trials, std::uint64_t seed,
                                                    GainConvention convention = GainConvention::corrected,
                                                    double tol = kDefaultTolerances.positivity);

/// Local frame mapping the Jordan-form pair A_r(angle) onto a measured pair
/// of qubit observables: observable_r = frame A_r(angle) frame^dagger.
struct JordanFrame {
    ComplexMatrix frame;
    double angle = 0.0;
};

JordanFrame jordan_frame(const SettingPair &settings);

/// Extraction map of one B party: rotate into the Jordan frame, apply
/// Lambda_angle and, for the first party, undo U so that outcome k targets |phi_k>.
KrausChannel party_extraction_map(const SettingPair &settings, bool first_party);

/// Brute-force fidelities of the simulated devices under explicit maps.
struct GroundTruth {
    std::array<double, 4> extracted_fidelity{};
    double output_fidelity = 0.0;
    double source_fidelity = 0.0;
    double bsm_fidelity_passthrough = 0.0;
    double bsm_fidelity_teleport = 0.0;
    double bsm_fidelity = 0.0;
    double conditional_fidelity_passthrough = 0.0;
    double conditional_fidelity_teleport = 0.0;
    double conditional_fidelity = 0.0;
    double zeta_0 = 0.0;
    std::array<double, 2> schmidt_q{};
};

GroundTruth ground_truth(const ScenarioConfig &config);

struct SoundnessPoint {
    NoiseModel noise;
    ExperimentStatistics stats;
    CertificateReport deterministic;
    CertificateReport independent;
    CertificateReport partial;
    GroundTruth truth;
    /// Smallest oracle - bound over every certificate at this point.
    double min_margin = 0.0;
    std::vector<std::string> violations;
};

struct SoundnessReport {
    std::vector<SoundnessPoint> points;
    double min_margin = 0.0;
    bool passed = false;
};

/// Werner visibility in [0.9, 1] x BSM depolarization in [0, 0.1] x
/// misalignment in {0, 0.15}.
std::vector<NoiseModel> default_noise_grid();

SoundnessReport soundness_sweep(const std::vector<NoiseModel> &grid, double tol = kDefaultTolerances.positivity);

}  // namespace bsmcert
