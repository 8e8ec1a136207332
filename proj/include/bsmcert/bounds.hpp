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
#include <numbers>
#include <string>
#include <vector>

#include "bsmcert/scenario.hpp"

namespace bsmcert {

/// Constants of the CHSH-based extraction bound and the source bound.
struct BoundConstants {
    static constexpr double tsirelson = 2.0 * std::numbers::sqrt2;
    /// CHSH value above which the extracted fidelity exceeds 1/sqrt 2.
    static constexpr double beta_star = 2.0 * (8.0 + 7.0 * std::numbers::sqrt2) / 17.0;
    /// Smallest admissible value of the source-test threshold.
    static constexpr double delta_star = 0.744;
    /// Slope and offset of F^2 >= s beta + mu.
    static constexpr double s = (4.0 + 5.0 * std::numbers::sqrt2) / 16.0;
    static constexpr double mu = -(1.0 + 2.0 * std::numbers::sqrt2) / 4.0;
};

enum class BoundFlag : std::uint32_t {
    none = 0,
    non_certifying = 1u << 0,
    regime_violated = 1u << 1,
    clamped = 1u << 2,
};

/// Bit set of BoundFlag values.
class BoundFlags {
   public:
    constexpr BoundFlags() = default;
    constexpr BoundFlags(BoundFlag f) : bits_(static_cast<std::uint32_t>(f)) {}

    constexpr bool has(BoundFlag f) const { return (bits_ & static_cast<std::uint32_t>(f)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint32_t bits() const { return bits_; }
    static constexpr BoundFlags from_bits(std::uint32_t bits) {
        BoundFlags f;
        f.bits_ = bits;
        return f;
    }

    constexpr BoundFlags &operator|=(BoundFlags other) {
        bits_ |= other.bits_;
        return *this;
    }
    constexpr BoundFlags operator|(BoundFlags other) const { return from_bits(bits_ | other.bits_); }
    constexpr bool operator==(const BoundFlags &) const = default;

    /// Flag names in declaration order, e.g. {"non_certifying", "clamped"}.
    std::vector<std::string> names() const;

   private:
    std::uint32_t bits_ = 0;
};

/// A certified lower bound together with the flags raised computing it.
struct BoundValue {
    double value = 0.0;
    BoundFlags flags;
};

/// Extracted-state fidelity certified by a CHSH value:
/// sqrt(1 - (2 sqrt2 - beta) / (2 (2 sqrt2 - beta_star))). Flags
/// non_certifying at or below 1/sqrt 2; a negative radicand returns 0 with
/// clamped. Throws outside the quantum range.
BoundValue f_o_from_chsh(double beta);

/// sum_k sqrt(p_k / 4) F_k for a complete measurement.
double f_o_combined(const std::array<double, 4> &p, const std::array<double, 4> &f_o_k);

/// Source fidelity certified by the four-partite Bell value delta.
BoundValue f_i_from_delta(double delta);

/// cos(arccos f_o + arccos f_i), 0 with non_certifying once the angles add
/// beyond pi/2.
BoundValue bsm_fidelity_bound(double f_o, double f_i);

/// BSM fidelity from post-measurement statistics only, valid for two
/// independent sources: cos(arccos F^o + arccos((sum_k p_k F_k^2)^2)).
BoundValue bsm_fidelity_independent_sources(const std::array<double, 4> &p, const std::array<double, 4> &f_o_k);

/// Conditional fidelity of a heralded branch. Requires (f_i)^2 + p_0 >= 1;
/// otherwise 0 with regime_violated.
BoundValue conditional_fidelity_bound(double f_o_0, double f_i, double p_0);

/// Lower bound on the success factor zeta_0 (capped at 1 with clamped).
BoundValue zeta_lower_bound(double f_i, double p_0);

/// (F - sqrt((1-p0)(1-q0))) / sqrt(p0 q0): lower bound on the fidelity of
/// the two conditional states of a probabilistic channel. May be negative.
double lemma1_rhs(double fidelity, double p_0, double q_0);

/// CHSH value at which the independent-source bound with equal outcome
/// probabilities and equal beta_k reaches `target` (bisection to `tol`).
double independent_sources_threshold(double target = 1.0 / std::numbers::sqrt2, double tol = 1e-6);

enum class CertificationMode { deterministic, independent_sources, partial };

/// Every field is a fidelity lower bound in [0, 1]; fields not produced by
/// the selected mode are NaN.
struct CertificateReport {
    CertificationMode mode = CertificationMode::deterministic;
    std::array<double, 4> f_o_k{};
    double f_o = 0.0;
    double f_i = 0.0;
    double f_bsm = 0.0;
    double f_bsm_independent_sources = 0.0;
    double f_cond = 0.0;
    double zeta_0 = 0.0;
    double delta_used = 0.0;
    BoundFlags flags;

    bool operator==(const CertificateReport &other) const;
};

/// Dispatches the statistics to the certificates of `mode`. Throws
/// ErrorCode::missing_field when the mode's inputs are absent.
CertificateReport certify(const ExperimentStatistics &stats, CertificationMode mode);

}  // namespace bsmcert
