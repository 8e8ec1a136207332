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

#include "bsmcert/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bsmcert/error.hpp"
#include "bsmcert/random.hpp"

namespace bsmcert {

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

void check_unit_interval(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) fail(ErrorCode::invalid_argument, std::string(name) + " must lie in [0, 1]");
}

}  // namespace

BinaryObservableSetting::BinaryObservableSetting(ComplexMatrix observable, Party party, int setting_index)
    : observable_(std::move(observable)), party_(party), index_(setting_index) {
    if (observable_.dim() != 2) fail(ErrorCode::dimension_mismatch, "settings are qubit observables");
    if (setting_index != 0 && setting_index != 1) fail(ErrorCode::invalid_argument, "setting index must be 0 or 1");
    if (!observable_.is_hermitian(kDefaultTolerances.completeness)) {
        fail(ErrorCode::invalid_argument, "observable is not Hermitian");
    }
    if ((observable_ * observable_).max_abs_diff(ComplexMatrix::identity(2)) > kDefaultTolerances.completeness) {
        fail(ErrorCode::invalid_argument, "observable is not +1/-1 valued");
    }
}

ComplexMatrix BinaryObservableSetting::projector(int outcome) const {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return (ComplexMatrix::identity(2) + observable_ * sign) * 0.5;
}

Relabeling relabeling_for_outcome(int k) {
    switch (k) {
        case 0:
            return Relabeling::none;
        case 1:
            return Relabeling::swap_second_settings;
        case 2:
            return Relabeling::flip_first_output;
        case 3:
            return Relabeling::both;
        default:
            fail(ErrorCode::invalid_argument, "outcome index must be in 0..3");
    }
}

LocalSettings LocalSettings::standard(double misalignment) {
    const double h = 1.0 / std::numbers::sqrt2;
    const ComplexMatrix r = qubit_rotation(pauli::y(), misalignment);
    const ComplexMatrix plus = (pauli::x() + pauli::z()) * h;
    const ComplexMatrix minus = (pauli::x() - pauli::z()) * h;
    return LocalSettings{
        SettingPair{BinaryObservableSetting(pauli::x(), Party::first, 0), BinaryObservableSetting(pauli::z(), Party::first, 1)},
        SettingPair{BinaryObservableSetting(r * plus * r.adjoint(), Party::second, 0),
                    BinaryObservableSetting(r * minus * r.adjoint(), Party::second, 1)},
    };
}

CorrelationTable correlation_table(const QuantumState &state, const SettingPair &first, const SettingPair &second) {
    if (state.dim() != 4) fail(ErrorCode::dimension_mismatch, "CHSH statistics need a two-qubit state");
    CorrelationTable table{};
    for (int y1 = 0; y1 < 2; ++y1) {
        for (int y2 = 0; y2 < 2; ++y2) {
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    const ComplexMatrix proj = kron(first[y1].projector(b1), second[y2].projector(b2));
                    table[y1][y2][b1][b2] = std::max(0.0, (state.matrix() * proj).trace().real());
                }
            }
        }
    }
    return table;
}

double chsh_from_table(const CorrelationTable &table, Relabeling relabeling) {
    const bool flip = relabeling == Relabeling::flip_first_output || relabeling == Relabeling::both;
    const bool swap = relabeling == Relabeling::swap_second_settings || relabeling == Relabeling::both;
    double value = 0.0;
    for (int y1 = 0; y1 < 2; ++y1) {
        for (int y2 = 0; y2 < 2; ++y2) {
            const int physical_y2 = swap ? 1 - y2 : y2;
            for (int b1 = 0; b1 < 2; ++b1) {
                const int reported_b1 = (flip && y1 == 0) ? 1 - b1 : b1;
                for (int b2 = 0; b2 < 2; ++b2) {
                    const int sign_exp = reported_b1 + b2 + y1 * y2;
                    const double sign = (sign_exp % 2 == 0) ? 1.0 : -1.0;
                    value += sign * table[y1][physical_y2][b1][b2];
                }
            }
        }
    }
    return value;
}

double chsh_value(const QuantumState &state, const SettingPair &first, const SettingPair &second, Relabeling relabeling) {
    for (const auto &s : first) {
        if (s.party() != Party::first) fail(ErrorCode::invalid_argument, "first setting pair belongs to the wrong party");
    }
    for (const auto &s : second) {
        if (s.party() != Party::second) fail(ErrorCode::invalid_argument, "second setting pair belongs to the wrong party");
    }
    return chsh_from_table(correlation_table(state, first, second), relabeling);
}

MeasurementInstrument::MeasurementInstrument(std::vector<Outcome> outcomes, Dims input_dims, double completeness_tol)
    : outcomes_(std::move(outcomes)), input_dims_(std::move(input_dims)) {
    if (outcomes_.empty()) fail(ErrorCode::invalid_argument, "instrument has no outcomes");
    const int n = total_dim(input_dims_);
    ComplexMatrix sum = ComplexMatrix::zero(n);
    for (const auto &outcome : outcomes_) {
        if (outcome.kraus_ops.empty()) fail(ErrorCode::invalid_argument, "outcome without Kraus operators");
        for (const auto &k : outcome.kraus_ops) {
            if (k.dim() != n) fail(ErrorCode::dimension_mismatch, "Kraus operator does not match the input dimension");
            sum = sum + k.adjoint() * k;
        }
    }
    if (sum.max_abs_diff(ComplexMatrix::identity(n)) > completeness_tol) {
        fail(ErrorCode::invalid_argument, "instrument is not trace preserving");
    }
}

ComplexMatrix MeasurementInstrument::povm_element(int index) const {
    const auto &ops = outcomes_.at(static_cast<std::size_t>(index)).kraus_ops;
    ComplexMatrix sum = ComplexMatrix::zero(input_dim());
    for (const auto &k : ops) sum = sum + k.adjoint() * k;
    return sum;
}

ComplexMatrix MeasurementInstrument::branch(int index, const ComplexMatrix &rho, const Dims &rho_dims) const {
    if (rho_dims.size() <= input_dims_.size() ||
        !std::equal(input_dims_.begin(), input_dims_.end(), rho_dims.begin())) {
        fail(ErrorCode::dimension_mismatch, "state does not start with the instrument's input factors");
    }
    const int rest = total_dim(rho_dims) / input_dim();
    const Dims split{input_dim(), rest};
    ComplexMatrix out = ComplexMatrix::zero(rest);
    for (const auto &k : outcomes_.at(static_cast<std::size_t>(index)).kraus_ops) {
        const ComplexMatrix big = kron(k, ComplexMatrix::identity(rest));
        out = out + partial_trace(big * rho * big.adjoint(), split, {1});
    }
    return out;
}

MeasurementInstrument ideal_bsm() { return noisy_bsm(0.0); }

MeasurementInstrument noisy_bsm(double depolarization) {
    check_unit_interval(depolarization, "BSM depolarization");
    // sqrt((1-w) P + w/4) = sqrt(1 - 3w/4) P + sqrt(w/4) (1 - P)
    const double on = std::sqrt(1.0 - 0.75 * depolarization);
    const double off = std::sqrt(0.25 * depolarization);
    std::vector<MeasurementInstrument::Outcome> outcomes;
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix p = bell_projector(k);
        ComplexMatrix kraus = p * on;
        if (off > 0.0) kraus = kraus + (ComplexMatrix::identity(4) - p) * off;
        outcomes.push_back({k, {kraus}});
    }
    return MeasurementInstrument(std::move(outcomes), {2, 2});
}

QuantumState werner_source(double visibility) {
    check_unit_interval(visibility, "source visibility");
    const ComplexMatrix rho = bell_projector(0) * visibility + ComplexMatrix::identity(4) * ((1.0 - visibility) / 4.0);
    return QuantumState(rho, {2, 2});
}

void NoiseModel::validate() const {
    check_unit_interval(source_visibility[0], "source visibility");
    check_unit_interval(source_visibility[1], "source visibility");
    check_unit_interval(bsm_depolarization, "BSM depolarization");
    if (!std::isfinite(setting_misalignment)) fail(ErrorCode::invalid_argument, "misalignment must be finite");
}

void ExperimentStatistics::validate() const {
    const double tol = kDefaultTolerances.completeness;
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (beta[k] && !(std::abs(*beta[k]) <= kTsirelson + tol)) {
            fail(ErrorCode::invalid_argument, "beta" + std::to_string(k) + " lies outside [-2 sqrt 2, 2 sqrt 2]");
        }
        if (p[k]) {
            if (!(*p[k] >= 0.0 && *p[k] <= 1.0 + tol)) {
                fail(ErrorCode::invalid_argument, "p" + std::to_string(k) + " must lie in [0, 1]");
            }
            total += *p[k];
        }
    }
    if (total > 1.0 + tol) fail(ErrorCode::invalid_argument, "outcome probabilities sum to more than 1");
    if (delta && !(*delta >= 0.0 && *delta <= 1.0)) fail(ErrorCode::invalid_argument, "delta must lie in [0, 1]");
}

double chsh_scaled_delta(const ExperimentStatistics &stats) {
    double weighted = 0.0;
    double weight = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (!stats.beta[k]) continue;
        const double w = stats.p[k].value_or(0.0);
        weighted += w * *stats.beta[k];
        weight += w;
    }
    if (weight <= 0.0) {
        // Fall back to the unweighted mean when no probabilities are given.
        int n = 0;
        for (const auto &b : stats.beta) {
            if (b) {
                weighted += *b;
                ++n;
            }
        }
        if (n == 0) fail(ErrorCode::missing_field, "delta model chsh-scaled needs at least one CHSH value");
        weight = n;
    }
    return std::clamp(weighted / weight / kTsirelson, 0.0, 1.0);
}

double effective_delta(const ExperimentStatistics &stats) {
    if (stats.delta_model == DeltaModel::chsh_scaled) return chsh_scaled_delta(stats);
    if (!stats.delta) fail(ErrorCode::missing_field, "delta is required with the explicit delta model");
    return *stats.delta;
}

ComplexMatrix joint_source_state(const QuantumState &source1, const QuantumState &source2) {
    if (source1.factor_dims() != Dims{2, 2} || source2.factor_dims() != Dims{2, 2}) {
        fail(ErrorCode::dimension_mismatch, "sources must be two-qubit states on (A_i, B_i)");
    }
    return permute_subsystems(kron(source1.matrix(), source2.matrix()), {2, 2, 2, 2}, {0, 2, 1, 3});
}

ProtocolOutcome run_protocol(const QuantumState &source1, const QuantumState &source2, const MeasurementInstrument &bsm,
                             const LocalSettings &settings, DeltaModel delta_model, std::optional<double> explicit_delta) {
    if (bsm.input_dims() != Dims{2, 2}) fail(ErrorCode::dimension_mismatch, "BSM must act on two qubits");
    if (bsm.outcomes().size() != 4) fail(ErrorCode::invalid_argument, "expected a four-outcome BSM");
    ProtocolOutcome result{{}, {}, joint_source_state(source1, source2)};
    const Dims dims{2, 2, 2, 2};
    const Tolerances tol = kDefaultTolerances;
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix unnormalized = bsm.branch(k, result.joint_state, dims);
        const double pk = std::max(0.0, unnormalized.trace().real());
        result.stats.p[k] = pk;
        if (pk < tol.probability_floor) continue;
        ComplexMatrix rho = unnormalized * (1.0 / pk);
        rho = (rho + rho.adjoint()) * 0.5;
        QuantumState conditional(std::move(rho), {2, 2});
        result.stats.beta[k] = chsh_value(conditional, settings.first, settings.second, relabeling_for_outcome(k));
        result.conditional_states[k] = std::move(conditional);
    }
    result.stats.delta_model = delta_model;
    if (delta_model == DeltaModel::explicit_value) {
        if (!explicit_delta) fail(ErrorCode::missing_field, "explicit delta model needs a delta value");
        result.stats.delta = explicit_delta;
    } else {
        result.stats.delta = chsh_scaled_delta(result.stats);
    }
    result.stats.validate();
    return result;
}

void ScenarioConfig::validate() const {
    noise.validate();
    if (shots > 0 && !seed) fail(ErrorCode::missing_field, "a seed is required whenever shots is finite");
    if (delta_model == DeltaModel::explicit_value && !delta) {
        fail(ErrorCode::missing_field, "explicit delta model needs a delta value");
    }
    if (delta && !(*delta >= 0.0 && *delta <= 1.0)) fail(ErrorCode::invalid_argument, "delta must lie in [0, 1]");
}

ProtocolOutcome run_scenario(const ScenarioConfig &config) {
    config.validate();
    return run_protocol(werner_source(config.noise.source_visibility[0]), werner_source(config.noise.source_visibility[1]),
                        noisy_bsm(config.noise.bsm_depolarization), LocalSettings::standard(config.noise.setting_misalignment),
                        config.delta_model, config.delta);
}

ExperimentStatistics sample_statistics(const ScenarioConfig &config, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) fail(ErrorCode::invalid_argument, "shots must be positive");
    ScenarioConfig analytic_config = config;
    analytic_config.shots = 0;
    const ProtocolOutcome analytic = run_scenario(analytic_config);
    const LocalSettings settings = LocalSettings::standard(config.noise.setting_misalignment);

    // Joint distribution over (k, y1, y2, b1, b2), settings uniform.
    std::array<double, 64> cell{};
    for (int k = 0; k < 4; ++k) {
        if (!analytic.conditional_states[k]) continue;
        const CorrelationTable table = correlation_table(*analytic.conditional_states[k], settings.first, settings.second);
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int b1 = 0; b1 < 2; ++b1)
                    for (int b2 = 0; b2 < 2; ++b2)
                        cell[k * 16 + y1 * 8 + y2 * 4 + b1 * 2 + b2] = 0.25 * *analytic.stats.p[k] * table[y1][y2][b1][b2];
    }

    // Multinomial draw as a chain of conditional binomials.
    Rng rng(seed);
    std::array<std::uint64_t, 64> counts{};
    std::uint64_t remaining = shots;
    double remaining_mass = 0.0;
    for (double c : cell) remaining_mass += c;
    for (std::size_t i = 0; i < cell.size() && remaining > 0; ++i) {
        if (i + 1 == cell.size() || remaining_mass <= 0.0) {
            counts[i] = remaining;
            break;
        }
        const double q = std::clamp(cell[i] / remaining_mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(remaining, q);
        counts[i] = draw(rng);
        remaining -= counts[i];
        remaining_mass -= cell[i];
    }

    ExperimentStatistics stats;
    stats.shots = shots;
    stats.delta_model = config.delta_model;
    const double n = static_cast<double>(shots);
    for (int k = 0; k < 4; ++k) {
        std::uint64_t nk = 0;
        for (int c = 0; c < 16; ++c) nk += counts[k * 16 + c];
        const double pk = static_cast<double>(nk) / n;
        stats.p[k] = pk;
        stats.p_stderr[k] = std::sqrt(pk * (1.0 - pk) / n);

        const Relabeling relabel = relabeling_for_outcome(k);
        const bool flip = relabel == Relabeling::flip_first_output || relabel == Relabeling::both;
        const bool swap = relabel == Relabeling::swap_second_settings || relabel == Relabeling::both;
        double beta = 0.0;
        double variance = 0.0;
        bool defined = true;
        for (int y1 = 0; y1 < 2 && defined; ++y1) {
            for (int y2 = 0; y2 < 2; ++y2) {
                const int py2 = swap ? 1 - y2 : y2;
                double total = 0.0;
                double signed_sum = 0.0;
                for (int b1 = 0; b1 < 2; ++b1) {
                    const int rb1 = (flip && y1 == 0) ? 1 - b1 : b1;
                    for (int b2 = 0; b2 < 2; ++b2) {
                        const double c = static_cast<double>(counts[k * 16 + y1 * 8 + py2 * 4 + b1 * 2 + b2]);
                        total += c;
                        signed_sum += ((rb1 + b2) % 2 == 0 ? 1.0 : -1.0) * c;
                    }
                }
                if (total == 0.0) {
                    defined = false;
                    break;
                }
                const double corr = signed_sum / total;
                beta += (y1 * y2 == 1 ? -1.0 : 1.0) * corr;
                variance += std::max(0.0, 1.0 - corr * corr) / total;
            }
        }
        if (!defined) continue;
        stats.beta_raw[k] = beta;
        stats.beta[k] = std::clamp(beta, -2.0 * std::numbers::sqrt2, 2.0 * std::numbers::sqrt2);
        stats.beta_stderr[k] = std::sqrt(variance);
    }
    if (config.delta_model == DeltaModel::explicit_value) {
        stats.delta = config.delta;
    } else {
        stats.delta = chsh_scaled_delta(stats);
    }
    stats.validate();
    return stats;
}

ExperimentStatistics simulate(const ScenarioConfig &config) {
    config.validate();
    if (config.shots == 0) return run_scenario(config).stats;
    return sample_statistics(config, config.shots, *config.seed);
}

}  // namespace bsmcert
