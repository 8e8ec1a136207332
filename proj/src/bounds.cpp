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

#include "bsmcert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
// Values this close to 1/sqrt 2 count as reaching the trivial threshold.
constexpr double kThresholdSlack = 1e-12;

double clamp_unit(double x, BoundFlags &flags) {
    if (x < 0.0 || x > 1.0) {
        flags |= BoundFlag::clamped;
        return std::clamp(x, 0.0, 1.0);
    }
    return x;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void require_unit(double x, const char *name) {
    if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::invalid_argument, std::string(name) + " must lie in [0, 1]");
}

}  // namespace

std::vector<std::string> BoundFlags::names() const {
    std::vector<std::string> out;
    if (has(BoundFlag::non_certifying)) out.emplace_back("non_certifying");
    if (has(BoundFlag::regime_violated)) out.emplace_back("regime_violated");
    if (has(BoundFlag::clamped)) out.emplace_back("clamped");
    return out;
}

BoundValue f_o_from_chsh(double beta) {
    constexpr double tsirelson = BoundConstants::tsirelson;
    if (!(std::abs(beta) <= tsirelson + kDefaultTolerances.completeness)) {
        fail(ErrorCode::invalid_argument, "CHSH value outside the quantum range [-2 sqrt 2, 2 sqrt 2]");
    }
    BoundValue out;
    beta = std::min(beta, tsirelson);
    const double radicand = 1.0 - 0.5 * (tsirelson - beta) / (tsirelson - BoundConstants::beta_star);
    if (radicand < 0.0) {
        out.flags |= BoundFlag::clamped;
        out.flags |= BoundFlag::non_certifying;
        return out;
    }
    out.value = std::min(1.0, std::sqrt(radicand));
    if (out.value <= kInvSqrt2 + kThresholdSlack) out.flags |= BoundFlag::non_certifying;
    return out;
}

double f_o_combined(const std::array<double, 4> &p, const std::array<double, 4> &f_o_k) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (p[k] < 0.0) fail(ErrorCode::invalid_argument, "probabilities must be non-negative");
        sum += std::sqrt(p[k] / 4.0) * f_o_k[k];
    }
    return sum;
}

BoundValue f_i_from_delta(double delta) {
    require_unit(delta, "delta");
    constexpr double ds = BoundConstants::delta_star;
    BoundValue out;
    const double radicand = 0.25 * (1.0 + 3.0 * (delta - ds) / (1.0 - ds));
    if (radicand < 0.0) {
        out.flags |= BoundFlag::clamped;
        return out;
    }
    out.value = std::min(1.0, std::sqrt(radicand));
    return out;
}

BoundValue bsm_fidelity_bound(double f_o, double f_i) {
    BoundValue out;
    f_o = clamp_unit(f_o, out.flags);
    f_i = clamp_unit(f_i, out.flags);
    const double angle = std::acos(f_o) + std::acos(f_i);
    if (angle > kHalfPi) {
        out.flags |= BoundFlag::non_certifying;
        return out;
    }
    out.value = std::clamp(std::cos(angle), 0.0, 1.0);
    return out;
}

BoundValue bsm_fidelity_independent_sources(const std::array<double, 4> &p, const std::array<double, 4> &f_o_k) {
    double mean_square = 0.0;
    for (int k = 0; k < 4; ++k) mean_square += p[k] * f_o_k[k] * f_o_k[k];
    return bsm_fidelity_bound(f_o_combined(p, f_o_k), mean_square * mean_square);
}

BoundValue conditional_fidelity_bound(double f_o_0, double f_i, double p_0) {
    if (!(p_0 > 0.0 && p_0 <= 1.0)) fail(ErrorCode::invalid_argument, "p_0 must lie in (0, 1]");
    require_unit(f_i, "F^i");
    if (f_i * f_i + p_0 < 1.0) {
        BoundValue out;
        out.flags |= BoundFlag::regime_violated;
        return out;
    }
    const double second = std::sqrt(std::clamp((p_0 + f_i * f_i - 1.0) / p_0, 0.0, 1.0));
    return bsm_fidelity_bound(f_o_0, second);
}

BoundValue zeta_lower_bound(double f_i, double p_0) {
    if (!(p_0 > 0.0 && p_0 <= 1.0)) fail(ErrorCode::invalid_argument, "p_0 must lie in (0, 1]");
    require_unit(f_i, "F^i");
    BoundValue out;
    const double f2 = f_i * f_i;
    const double inner = std::sqrt(p_0 * f2) - std::sqrt((1.0 - p_0) * (1.0 - f2));
    if (inner <= 0.0) {
        out.flags |= BoundFlag::regime_violated;
        return out;
    }
    out.value = 4.0 * inner * inner;
    if (out.value > 1.0) {
        out.value = 1.0;
        out.flags |= BoundFlag::clamped;
    }
    return out;
}

double lemma1_rhs(double fidelity, double p_0, double q_0) {
    require_unit(fidelity, "fidelity");
    require_unit(p_0, "p_0");
    require_unit(q_0, "q_0");
    if (p_0 * q_0 == 0.0) fail(ErrorCode::invalid_argument, "branch probabilities must be positive");
    return (fidelity - std::sqrt((1.0 - p_0) * (1.0 - q_0))) / std::sqrt(p_0 * q_0);
}

double independent_sources_threshold(double target, double tol) {
    auto excess = [target](double beta) {
        const double f = f_o_from_chsh(beta).value;
        return bsm_fidelity_independent_sources({0.25, 0.25, 0.25, 0.25}, {f, f, f, f}).value - target;
    };
    double lo = BoundConstants::beta_star;
    double hi = BoundConstants::tsirelson;
    if (excess(hi) < 0.0) fail(ErrorCode::numerical, "target is not reached below 2 sqrt 2");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

bool CertificateReport::operator==(const CertificateReport &other) const {
    for (int k = 0; k < 4; ++k) {
        if (!same(f_o_k[k], other.f_o_k[k])) return false;
    }
    return mode == other.mode && same(f_o, other.f_o) && same(f_i, other.f_i) && same(f_bsm, other.f_bsm) &&
           same(f_bsm_independent_sources, other.f_bsm_independent_sources) && same(f_cond, other.f_cond) &&
           same(zeta_0, other.zeta_0) && same(delta_used, other.delta_used) && flags == other.flags;
}

CertificateReport certify(const ExperimentStatistics &stats, CertificationMode mode) {
    stats.validate();
    CertificateReport report;
    report.mode = mode;
    report.f_o_k.fill(kNaN);
    report.f_o = report.f_i = report.f_bsm = report.f_bsm_independent_sources = kNaN;
    report.f_cond = report.zeta_0 = report.delta_used = kNaN;

    if (mode == CertificationMode::partial) {
        if (!stats.beta[0]) fail(ErrorCode::missing_field, "partial mode needs beta0");
        if (!stats.p[0]) fail(ErrorCode::missing_field, "partial mode needs p0");
        const BoundValue fo = f_o_from_chsh(*stats.beta[0]);
        double delta = 0.0;
        if (stats.delta_model == DeltaModel::chsh_scaled) {
            delta = std::clamp(*stats.beta[0] / BoundConstants::tsirelson, 0.0, 1.0);
        } else {
            if (!stats.delta) fail(ErrorCode::missing_field, "partial mode needs delta (or the chsh-scaled model)");
            delta = *stats.delta;
        }
        const BoundValue fi = f_i_from_delta(delta);
        const BoundValue cond = conditional_fidelity_bound(fo.value, fi.value, *stats.p[0]);
        const BoundValue zeta = zeta_lower_bound(fi.value, *stats.p[0]);
        report.f_o_k[0] = fo.value;
        report.f_i = fi.value;
        report.f_cond = cond.value;
        report.zeta_0 = zeta.value;
        report.delta_used = delta;
        report.flags = fo.flags | fi.flags | cond.flags | zeta.flags;
        return report;
    }

    std::array<double, 4> p{};
    std::array<double, 4> fk{};
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (!stats.p[k]) fail(ErrorCode::missing_field, "p" + std::to_string(k) + " is required in this mode");
        p[k] = *stats.p[k];
        total += p[k];
        if (stats.beta[k]) {
            const BoundValue fo = f_o_from_chsh(*stats.beta[k]);
            fk[k] = fo.value;
            report.flags |= fo.flags;
        } else if (p[k] >= kDefaultTolerances.probability_floor) {
            fail(ErrorCode::missing_field, "beta" + std::to_string(k) + " is required in this mode");
        }
        report.f_o_k[k] = fk[k];
    }
    if (total < 1.0 - kDefaultTolerances.completeness) {
        fail(ErrorCode::invalid_argument,
             "outcome probabilities sum to less than 1; use partial mode for incomplete measurements");
    }
    report.f_o = f_o_combined(p, fk);

    if (mode == CertificationMode::deterministic) {
        const double delta = effective_delta(stats);
        const BoundValue fi = f_i_from_delta(delta);
        const BoundValue bsm = bsm_fidelity_bound(report.f_o, fi.value);
        report.delta_used = delta;
        report.f_i = fi.value;
        report.f_bsm = bsm.value;
        report.flags |= fi.flags | bsm.flags;
    } else {
        const BoundValue bsm = bsm_fidelity_independent_sources(p, fk);
        report.f_bsm_independent_sources = bsm.value;
        report.flags |= bsm.flags;
    }
    return report;
}

}  // namespace bsmcert
