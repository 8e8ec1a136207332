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

#include "bsmcert/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bsmcert/error.hpp"
#include "bsmcert/random.hpp"

namespace bsmcert {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double grid_angle(int i, int n) { return kHalfPi * static_cast<double>(i) / static_cast<double>(n - 1); }

ComplexMatrix matrix_unit(int dim, int row, int col) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(row, col) = 1.0;
    return ComplexMatrix(std::move(m));
}

ComplexMatrix power(const ComplexMatrix &m, int n) {
    ComplexMatrix out = ComplexMatrix::identity(m.dim());
    for (int i = 0; i < n; ++i) out = out * m;
    return out;
}

Eigen::MatrixXcd as_eigen(const ComplexMatrix &m) { return m.eigen(); }

std::array<double, 3> bloch_vector(const ComplexMatrix &o) {
    return {0.5 * (o * pauli::x()).trace().real(), 0.5 * (o * pauli::y()).trace().real(),
            0.5 * (o * pauli::z()).trace().real()};
}

double dot(const std::array<double, 3> &a, const std::array<double, 3> &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const std::array<double, 3> &a) { return std::sqrt(dot(a, a)); }

std::array<double, 3> scaled(const std::array<double, 3> &a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

std::array<double, 3> cross(const std::array<double, 3> &a, const std::array<double, 3> &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Unit vector orthogonal to `n`, preferring the XZ plane.
std::array<double, 3> perpendicular(const std::array<double, 3> &n) {
    std::array<double, 3> c = cross(n, {0.0, 1.0, 0.0});
    if (norm(c) < 1e-6) c = cross(n, {1.0, 0.0, 0.0});
    return scaled(c, 1.0 / norm(c));
}

ComplexMatrix pauli_along(const std::array<double, 3> &n) {
    return pauli::x() * n[0] + pauli::y() * n[1] + pauli::z() * n[2];
}

ComplexMatrix block_diagonal(const std::array<ComplexMatrix, 4> &blocks) {
    const int d = blocks[0].dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4 * d, 4 * d);
    for (int k = 0; k < 4; ++k) m.block(k * d, k * d, d, d) = blocks[k].eigen();
    return ComplexMatrix(std::move(m));
}

// Choi-type fidelity sum_k F(M_k[input], 1/4 phi_k) as one block-diagonal fidelity.
double bsm_block_fidelity(const MeasurementInstrument &bsm, const ComplexMatrix &input) {
    std::array<ComplexMatrix, 4> actual;
    std::array<ComplexMatrix, 4> ideal;
    for (int k = 0; k < 4; ++k) {
        actual[k] = bsm.branch(k, input, {2, 2, 2, 2});
        ideal[k] = bell_projector(k) * 0.25;
    }
    return std::min(1.0, fidelity(block_diagonal(actual), block_diagonal(ideal)));
}

struct HeraldedBranch {
    double fidelity = 0.0;
    double zeta = 0.0;
};

HeraldedBranch heralded_branch(const MeasurementInstrument &bsm, const ComplexMatrix &input) {
    const ComplexMatrix out = bsm.branch(0, input, {2, 2, 2, 2});
    const double p = out.trace().real();
    HeraldedBranch result;
    result.zeta = 4.0 * p;
    if (p > kDefaultTolerances.probability_floor) {
        const KetVector target = bell_ket(0);
        const double overlap = (target.eigen().adjoint() * out.eigen() * target.eigen())(0, 0).real() / p;
        result.fidelity = std::sqrt(std::clamp(overlap, 0.0, 1.0));
    }
    return result;
}

}  // namespace

double extraction_gain(double lambda, GainConvention convention) {
    const double offset = convention == GainConvention::corrected ? -1.0 : 1.0;
    return (1.0 + std::numbers::sqrt2) * (std::sin(lambda) + std::cos(lambda) + offset);
}

ExtractionChannel::ExtractionChannel(double lambda, GainConvention convention, FlipBranch branch)
    : lambda_(lambda), gain_(extraction_gain(lambda, convention)) {
    if (!std::isfinite(lambda)) fail(ErrorCode::invalid_argument, "extraction angle must be finite");
    bool use_x = lambda <= kQuarterPi;
    if (branch == FlipBranch::x) use_x = true;
    if (branch == FlipBranch::z) use_x = false;
    flip_ = use_x ? pauli::x() : pauli::z();
}

bool ExtractionChannel::is_valid(double tol) const { return gain_ >= -tol && gain_ <= 1.0 + tol; }

KrausChannel ExtractionChannel::kraus() const {
    if (!is_valid()) fail(ErrorCode::numerical, "extraction map is not completely positive (g outside [0, 1])");
    const double keep = std::sqrt(std::max(0.0, keep_weight()));
    const double flip = std::sqrt(std::max(0.0, flip_weight()));
    return KrausChannel({as_eigen(ComplexMatrix::identity(2) * keep), as_eigen(flip_ * flip)});
}

ComplexMatrix ExtractionChannel::apply(const ComplexMatrix &rho) const {
    if (rho.dim() != 2) fail(ErrorCode::dimension_mismatch, "extraction map acts on a qubit");
    return rho * keep_weight() + flip_ * rho * flip_ * flip_weight();
}

ComplexMatrix ExtractionChannel::apply_pair(const ExtractionChannel &second, const ComplexMatrix &rho) const {
    if (rho.dim() != 4) fail(ErrorCode::dimension_mismatch, "pair of extraction maps acts on two qubits");
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const std::array<std::pair<double, ComplexMatrix>, 2> a{{{keep_weight(), id}, {flip_weight(), flip_}}};
    const std::array<std::pair<double, ComplexMatrix>, 2> b{{{second.keep_weight(), id}, {second.flip_weight(), second.flip_}}};
    ComplexMatrix out = ComplexMatrix::zero(4);
    for (const auto &[wa, ka] : a) {
        for (const auto &[wb, kb] : b) {
            const ComplexMatrix k = kron(ka, kb);
            out = out + k * rho * k.adjoint() * (wa * wb);
        }
    }
    return out;
}

ComplexMatrix jordan_observable(int r, double angle) {
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    return pauli::x() * std::cos(angle) + pauli::z() * (sign * std::sin(angle));
}

ComplexMatrix chsh_operator(double a, double b) {
    ComplexMatrix w = ComplexMatrix::zero(4);
    for (int r = 0; r < 2; ++r) {
        for (int t = 0; t < 2; ++t) {
            const double sign = (r * t) % 2 == 0 ? 1.0 : -1.0;
            w = w + kron(jordan_observable(r, a), jordan_observable(t, b)) * sign;
        }
    }
    return w;
}

ComplexMatrix jordan_frame_unitary() { return -(pauli_exponential(pauli::y(), std::numbers::pi / 8.0) * pauli::x()); }

KetVector jordan_target_state() {
    const Eigen::VectorXcd v = kron(jordan_frame_unitary(), ComplexMatrix::identity(2)).eigen() * bell_ket(0).eigen();
    return KetVector::normalized(v);
}

ComplexMatrix relabel_unitary_first() { return pauli_exponential(pauli::y(), -kQuarterPi) * pauli::x(); }

ComplexMatrix relabel_unitary_second() { return pauli::x(); }

ComplexMatrix operator_inequality_matrix(double a, double b, GainConvention convention) {
    const ExtractionChannel la(a, convention);
    const ExtractionChannel lb(b, convention);
    const ComplexMatrix extracted = la.apply_pair(lb, jordan_target_state().projector());
    const ComplexMatrix m = extracted - chsh_operator(a, b) * BoundConstants::s - ComplexMatrix::identity(4) * BoundConstants::mu;
    return (m + m.adjoint()) * 0.5;
}

OperatorInequalityReport verify_operator_inequality(int grid_points, GainConvention convention, double tol) {
    if (grid_points < 2) fail(ErrorCode::invalid_argument, "grid needs at least 2 points per axis");
    OperatorInequalityReport report;
    report.grid_points = grid_points;
    report.convention = convention;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    report.min_gain = std::numeric_limits<double>::infinity();
    report.max_gain = -std::numeric_limits<double>::infinity();
    report.channel_valid = true;

    for (int i = 0; i < grid_points; ++i) {
        const ExtractionChannel channel(grid_angle(i, grid_points), convention);
        report.min_gain = std::min(report.min_gain, channel.gain());
        report.max_gain = std::max(report.max_gain, channel.gain());
        report.channel_valid = report.channel_valid && channel.is_valid(tol);
    }
    for (int i = 0; i < grid_points; ++i) {
        for (int j = 0; j < grid_points; ++j) {
            const double a = grid_angle(i, grid_points);
            const double b = grid_angle(j, grid_points);
            const double e = min_eigenvalue(operator_inequality_matrix(a, b, convention));
            if (e < report.min_eigenvalue) {
                report.min_eigenvalue = e;
                report.worst_a = a;
                report.worst_b = b;
            }
        }
    }

    const double step = kHalfPi / (grid_points - 1);
    report.refined_min_eigenvalue = report.min_eigenvalue;
    constexpr int kRefine = 21;
    for (int i = 0; i < kRefine; ++i) {
        for (int j = 0; j < kRefine; ++j) {
            const double a = std::clamp(report.worst_a + step * (2.0 * i / (kRefine - 1) - 1.0), 0.0, kHalfPi);
            const double b = std::clamp(report.worst_b + step * (2.0 * j / (kRefine - 1) - 1.0), 0.0, kHalfPi);
            report.refined_min_eigenvalue =
                std::min(report.refined_min_eigenvalue, min_eigenvalue(operator_inequality_matrix(a, b, convention)));
        }
    }
    report.passed = report.channel_valid && report.min_eigenvalue >= -tol && report.refined_min_eigenvalue >= -tol;
    return report;
}

ExtractionValidityReport verify_extraction_validity(int samples, GainConvention convention) {
    if (samples < 2) fail(ErrorCode::invalid_argument, "need at least 2 samples");
    ExtractionValidityReport report;
    report.samples = samples;
    report.min_gain = std::numeric_limits<double>::infinity();
    report.max_gain = -std::numeric_limits<double>::infinity();
    bool valid = true;
    for (int i = 0; i < samples; ++i) {
        const ExtractionChannel channel(grid_angle(i, samples), convention);
        report.min_gain = std::min(report.min_gain, channel.gain());
        report.max_gain = std::max(report.max_gain, channel.gain());
        if (!channel.is_valid(0.0) && !channel.is_valid()) {
            valid = false;
            continue;
        }
        const double err = channel.kraus().effect().max_abs_diff(ComplexMatrix::identity(2));
        report.max_completeness_error = std::max(report.max_completeness_error, err);
    }
    report.passed = valid && report.min_gain >= -kDefaultTolerances.positivity &&
                    report.max_gain <= 1.0 + kDefaultTolerances.positivity &&
                    report.max_completeness_error <= kDefaultTolerances.completeness;
    return report;
}

RelabelingReport verify_relabeling_covariance(int grid_points, double tol) {
    if (grid_points < 2) fail(ErrorCode::invalid_argument, "grid needs at least 2 points");
    RelabelingReport report;
    report.grid_points = grid_points;
    report.tol = tol;
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const ComplexMatrix ua = relabel_unitary_first();
    const ComplexMatrix ub = relabel_unitary_second();
    const ComplexMatrix ub_pair = kron(id, ub);
    const ComplexMatrix ua_pair = kron(ua, id);

    for (int i = 0; i < grid_points; ++i) {
        const double a = grid_angle(i, grid_points);
        for (int j = 0; j < grid_points; ++j) {
            const double b = grid_angle(j, grid_points);
            ComplexMatrix swapped = ComplexMatrix::zero(4);
            ComplexMatrix flipped = ComplexMatrix::zero(4);
            for (int r = 0; r < 2; ++r) {
                for (int t = 0; t < 2; ++t) {
                    const double sign = (r * t) % 2 == 0 ? 1.0 : -1.0;
                    swapped = swapped + kron(jordan_observable(r, a), jordan_observable(1 - t, b)) * sign;
                    const double flip = r == 0 ? -1.0 : 1.0;
                    flipped = flipped + kron(jordan_observable(r, a), jordan_observable(t, b)) * (sign * flip);
                }
            }
            report.second_party_conjugation =
                std::max(report.second_party_conjugation, (ub_pair * chsh_operator(a, b) * ub_pair).max_abs_diff(swapped));
            report.first_party_conjugation = std::max(
                report.first_party_conjugation,
                (ua_pair * chsh_operator(kHalfPi - a, b) * ua_pair.adjoint()).max_abs_diff(flipped));
        }

        // Linear maps agree iff they agree on the matrix units.
        const ExtractionChannel la(a);
        const ExtractionChannel mirrored(kHalfPi - a);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const ComplexMatrix e = matrix_unit(2, r, c);
                report.second_party_commutation =
                    std::max(report.second_party_commutation, (ub * la.apply(e) * ub).max_abs_diff(la.apply(ub * e * ub)));
                report.first_party_commutation =
                    std::max(report.first_party_commutation,
                             (ua * la.apply(e) * ua.adjoint()).max_abs_diff(mirrored.apply(ua * e * ua.adjoint())));
            }
        }
    }

    const ExtractionChannel via_x(kQuarterPi, GainConvention::corrected, FlipBranch::x);
    const ExtractionChannel via_z(kQuarterPi, GainConvention::corrected, FlipBranch::z);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const ComplexMatrix e = matrix_unit(2, r, c);
            report.branch_boundary = std::max(report.branch_boundary, via_x.apply(e).max_abs_diff(via_z.apply(e)));
        }
    }

    const ComplexMatrix u = jordan_frame_unitary();
    report.frame_identity = (u.adjoint() * ua * u).max_abs_diff(pauli::z());

    const KetVector psi = jordan_target_state();
    const ComplexMatrix u_pair = kron(u, id);
    for (int k = 0; k < 4; ++k) {
        const int jj = k / 2;
        const int ll = k % 2;
        const Eigen::VectorXcd moved = kron(power(ua, jj), power(ub, ll)).eigen() * psi.eigen();
        const Eigen::VectorXcd target = u_pair.eigen() * bell_ket(k).eigen();
        report.bell_targets = std::max(report.bell_targets, 1.0 - std::abs(moved.dot(target)));
    }

    const LocalSettings settings = LocalSettings::standard();
    bool chsh_ok = true;
    for (int k = 0; k < 4; ++k) {
        const QuantumState bell = QuantumState::from_ket(bell_ket(k), {2, 2});
        report.bell_chsh[k] = chsh_value(bell, settings.first, settings.second, relabeling_for_outcome(k));
        chsh_ok = chsh_ok && std::abs(report.bell_chsh[k] - BoundConstants::tsirelson) <= 1e-9;
    }

    report.passed = chsh_ok && report.second_party_conjugation <= tol && report.first_party_conjugation <= tol &&
                    report.second_party_commutation <= tol && report.first_party_commutation <= tol &&
                    report.branch_boundary <= tol && report.frame_identity <= tol && report.bell_targets <= tol;
    return report;
}

TeleportInjection teleport_injection_map(const QuantumState &rho_prime) {
    const Dims &dims = rho_prime.factor_dims();
    if (dims.size() != 2 || dims[1] != 2) {
        fail(ErrorCode::dimension_mismatch, "teleport injection needs a state on A (x) B with B a qubit");
    }
    const int da = dims[0];
    const int dab = 2 * da;
    const int de = dab;
    const int dae = da * de;

    // Purification |Psi> = sum_m sqrt(lambda_m) |e_m>_{AB} |m>_E, indexed (a, b, m).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> joint(rho_prime.matrix().eigen());
    auto psi = [&](int a, int b, int m) {
        return std::sqrt(std::max(0.0, joint.eigenvalues()(m))) * joint.eigenvectors()(a * 2 + b, m);
    };

    // Schmidt basis of B, phases fixed so that a diagonal marginal yields the computational basis.
    const ComplexMatrix rho_b = partial_trace(rho_prime.matrix(), dims, {1});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> marginal(rho_b.eigen());
    Eigen::Matrix2cd basis = Eigen::Matrix2cd::Identity();
    if (std::abs(marginal.eigenvalues()(1) - marginal.eigenvalues()(0)) > 1e-12) {
        Eigen::Matrix2cd v = marginal.eigenvectors();
        if (std::abs(v(0, 0)) < std::abs(v(0, 1))) v.col(0).swap(v.col(1));
        for (int w = 0; w < 2; ++w) {
            Eigen::Index big = 0;
            v.col(w).cwiseAbs().maxCoeff(&big);
            v.col(w) *= std::conj(v(big, w)) / std::abs(v(big, w));
        }
        basis = v;
    }
    std::array<double, 2> q{};
    for (int w = 0; w < 2; ++w) {
        q[w] = std::clamp((basis.col(w).adjoint() * rho_b.eigen() * basis.col(w))(0, 0).real(), 0.0, 1.0);
    }

    // Schmidt vectors |s_w> in A (x) E, completed to an orthonormal pair if a weight vanishes.
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dae, 2);
    std::array<bool, 2> present{};
    for (int w = 0; w < 2; ++w) {
        if (q[w] <= 1e-14) continue;
        for (int a = 0; a < da; ++a) {
            for (int m = 0; m < de; ++m) {
                Complex amp = 0.0;
                for (int b = 0; b < 2; ++b) amp += std::conj(basis(b, w)) * psi(a, b, m);
                s(a * de + m, w) = amp / std::sqrt(q[w]);
            }
        }
        s.col(w).normalize();
        present[w] = true;
    }
    for (int w = 0; w < 2; ++w) {
        if (present[w]) continue;
        for (int trial = 0; trial < dae && !present[w]; ++trial) {
            Eigen::VectorXcd cand = Eigen::VectorXcd::Unit(dae, trial);
            const int other = 1 - w;
            if (present[other]) cand -= s.col(other) * s.col(other).dot(cand);
            if (cand.norm() > 0.5) {
                s.col(w) = cand.normalized();
                present[w] = true;
            }
        }
    }

    const Eigen::MatrixXcd outside = Eigen::MatrixXcd::Identity(dae, dae) - s * s.adjoint();
    const Eigen::MatrixXcd z_s = s.col(0) * s.col(0).adjoint() - s.col(1) * s.col(1).adjoint() + outside;
    const Eigen::MatrixXcd x_s = s.col(0) * s.col(1).adjoint() + s.col(1) * s.col(0).adjoint() + outside;

    // The input rotation by basis^T re-expresses the reference in the computational basis of B.
    const Eigen::MatrixXcd input_rotation = basis.transpose();
    std::vector<Eigen::MatrixXcd> kraus;
    for (int k = 0; k < 4; ++k) {
        const int j = k / 2;
        const int l = k % 2;
        const KetVector bell = bell_ket(k);  // on (input, B) in B's Schmidt coordinates
        Eigen::MatrixXcd measured = Eigen::MatrixXcd::Zero(dae, 2);
        for (int t = 0; t < 2; ++t) {
            for (int w = 0; w < 2; ++w) measured.col(t) += std::conj(bell[t * 2 + w]) * std::sqrt(q[w]) * s.col(w);
        }
        Eigen::MatrixXcd corrected = measured;
        if (l == 1) corrected = x_s * corrected;
        if (j == 1) corrected = z_s * corrected;
        for (int e = 0; e < de; ++e) {
            Eigen::MatrixXcd op(da, 2);
            for (int a = 0; a < da; ++a) op.row(a) = corrected.row(a * de + e);
            op = op * input_rotation;
            if (op.norm() > 1e-15) kraus.push_back(std::move(op));
        }
    }
    return TeleportInjection{KrausChannel(std::move(kraus)), q[0], ComplexMatrix(Eigen::MatrixXcd(basis))};
}

ComplexMatrix injection_choi_state(const KrausChannel &channel) {
    if (channel.input_dim() != 2) fail(ErrorCode::dimension_mismatch, "injection map must take a qubit input");
    return channel.apply_to(bell_projector(0), {2, 2}, 0);
}

KetVector schmidt_form_state(double q) {
    if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::invalid_argument, "Schmidt weight must lie in [0, 1]");
    return KetVector{std::sqrt(q), 0.0, 0.0, std::sqrt(1.0 - q)};
}

TeleportReport verify_teleport_identity(int trials, std::uint64_t seed, double value_tol) {
    if (trials < 1) fail(ErrorCode::invalid_argument, "need at least one trial");
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const ComplexMatrix xx = kron(pauli::x(), pauli::x());
    TeleportReport report;
    report.trials = trials;
    report.min_lower_bound_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < trials; ++i) {
        const double q = uniform(rng);
        const KetVector psi = schmidt_form_state(q);
        const QuantumState rho_prime = QuantumState::from_ket(psi, {2, 2});
        const TeleportInjection injection = teleport_injection_map(rho_prime);
        const ComplexMatrix out = injection_choi_state(injection.channel);
        const ComplexMatrix expected = (rho_prime.matrix() + xx * rho_prime.matrix() * xx) * 0.5;
        report.max_average_identity_deviation = std::max(report.max_average_identity_deviation, out.max_abs_diff(expected));

        const double f = uhlmann_fidelity(QuantumState(out, {2, 2}), psi);
        const double stated = 0.5 + std::sqrt(q * (1.0 - q));
        const double exact = std::sqrt(0.5 + 2.0 * q * (1.0 - q));
        const double stated_dev = std::abs(f - stated);
        if (stated_dev > report.max_stated_value_deviation) {
            report.max_stated_value_deviation = stated_dev;
            report.worst_q = q;
        }
        report.max_closed_form_deviation = std::max(report.max_closed_form_deviation, std::abs(f - exact));
        report.min_lower_bound_margin = std::min(report.min_lower_bound_margin, f - stated);
    }
    report.identity_passed = report.max_average_identity_deviation <= 1e-10;
    report.stated_value_passed = report.max_stated_value_deviation <= value_tol;
    report.lower_bound_passed = report.min_lower_bound_margin >= -kDefaultTolerances.positivity;
    return report;
}

NegativityReport verify_negativity_bound(int trials, std::uint64_t seed, double tol) {
    if (trials < 1) fail(ErrorCode::invalid_argument, "need at least one trial");
    Rng rng(seed);
    const KetVector phi = bell_ket(0);
    NegativityReport report;
    report.trials = trials;
    report.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < trials; ++i) {
        const QuantumState rho = random_state({2, 2}, rng, 1 + i % 4);
        const double overlap = (phi.eigen().adjoint() * rho.matrix().eigen() * phi.eigen())(0, 0).real();
        report.min_margin = std::min(report.min_margin, negativity(rho) - (overlap - 0.5));
    }
    report.passed = report.min_margin >= -tol;
    return report;
}

Lemma1Report verify_lemma1(int trials, std::uint64_t seed, double tol) {
    if (trials < 1) fail(ErrorCode::invalid_argument, "need at least one trial");
    Rng rng(seed);
    Lemma1Report report;
    report.trials = trials;
    report.min_slack = std::numeric_limits<double>::infinity();
    report.min_rhs_margin = std::numeric_limits<double>::infinity();
    int done = 0;
    while (done < trials) {
        const int dim = 2 + done % 3;
        const QuantumState rho = random_state({dim}, rng, 1 + done % dim);
        const QuantumState sigma = random_state({dim}, rng);
        const auto [success, failure] = random_instrument(dim, 1 + done % 3, rng);
        const ComplexMatrix r0 = success.apply(rho.matrix());
        const ComplexMatrix s0 = success.apply(sigma.matrix());
        const double p0 = r0.trace().real();
        const double q0 = s0.trace().real();
        if (p0 < 1e-9 || q0 < 1e-9) continue;
        const double f = uhlmann_fidelity(rho, sigma);
        const double f0 = std::min(1.0, fidelity(r0 * (1.0 / p0), s0 * (1.0 / q0)));
        const double slack = std::sqrt(q0 * p0) * f0 - f + std::sqrt(std::max(0.0, (1.0 - p0) * (1.0 - q0)));
        report.min_slack = std::min(report.min_slack, slack);
        report.min_rhs_margin =
            std::min(report.min_rhs_margin, f0 - lemma1_rhs(f, std::min(1.0, p0), std::min(1.0, q0)));
        ++done;
    }
    report.passed = report.min_slack >= -tol;
    return report;
}

FidelitySquaredReport verify_fidelity_squared_bound(int trials, std::uint64_t seed, GainConvention convention,
                                                    double tol) {
    if (trials < 1) fail(ErrorCode::invalid_argument, "need at least one trial");
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kHalfPi);
    const KetVector psi = jordan_target_state();
    FidelitySquaredReport report;
    report.trials = trials;
    report.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < trials; ++i) {
        const QuantumState rho = random_state({2, 2}, rng, 1 + i % 4);
        const double a = angle(rng);
        const double b = angle(rng);
        const ComplexMatrix extracted = ExtractionChannel(a, convention).apply_pair(ExtractionChannel(b, convention), rho.matrix());
        const double f2 = (psi.eigen().adjoint() * extracted.eigen() * psi.eigen())(0, 0).real();
        const double beta = (rho.matrix() * chsh_operator(a, b)).trace().real();
        report.min_margin = std::min(report.min_margin, f2 - (BoundConstants::s * beta + BoundConstants::mu));
    }
    report.passed = report.min_margin >= -tol;
    return report;
}

JordanFrame jordan_frame(const SettingPair &settings) {
    const auto n0 = bloch_vector(settings[0].observable());
    const auto n1 = bloch_vector(settings[1].observable());
    if (settings[0].observable().dim() != 2 || std::abs(norm(n0) - 1.0) > 1e-9 || std::abs(norm(n1) - 1.0) > 1e-9) {
        fail(ErrorCode::invalid_argument, "Jordan frame needs traceless qubit observables");
    }
    const double angle = 0.5 * std::acos(std::clamp(dot(n0, n1), -1.0, 1.0));
    std::array<double, 3> xp{n0[0] + n1[0], n0[1] + n1[1], n0[2] + n1[2]};
    std::array<double, 3> zp{n0[0] - n1[0], n0[1] - n1[1], n0[2] - n1[2]};
    if (norm(xp) < 1e-9) {
        zp = n0;
        xp = perpendicular(zp);
    } else if (norm(zp) < 1e-9) {
        xp = n0;
        zp = perpendicular(xp);
    } else {
        xp = scaled(xp, 1.0 / norm(xp));
        zp = scaled(zp, 1.0 / norm(zp));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(pauli_along(zp).eigen());
    const Eigen::Vector2cd up = solver.eigenvectors().col(1);
    const Eigen::Vector2cd down = pauli_along(xp).eigen() * up;
    Eigen::MatrixXcd frame(2, 2);
    frame.col(0) = up;
    frame.col(1) = down;
    return JordanFrame{ComplexMatrix(std::move(frame)), angle};
}

KrausChannel party_extraction_map(const SettingPair &settings, bool first_party) {
    const JordanFrame jf = jordan_frame(settings);
    KrausChannel map = KrausChannel::unitary(jf.frame.adjoint()).then(ExtractionChannel(jf.angle).kraus());
    if (first_party) map = map.then(KrausChannel::unitary(jordan_frame_unitary().adjoint()));
    return map;
}

GroundTruth ground_truth(const ScenarioConfig &config) {
    ScenarioConfig analytic = config;
    analytic.shots = 0;
    const ProtocolOutcome outcome = run_scenario(analytic);
    const LocalSettings settings = LocalSettings::standard(config.noise.setting_misalignment);
    const MeasurementInstrument bsm = noisy_bsm(config.noise.bsm_depolarization);
    const KrausChannel map1 = party_extraction_map(settings.first, true);
    const KrausChannel map2 = party_extraction_map(settings.second, false);
    const std::array<const KrausChannel *, 2> maps{&map1, &map2};

    GroundTruth truth;
    std::array<ComplexMatrix, 4> actual;
    std::array<ComplexMatrix, 4> ideal;
    for (int k = 0; k < 4; ++k) {
        ideal[k] = bell_projector(k) * 0.25;
        actual[k] = ComplexMatrix::zero(4);
        if (!outcome.conditional_states[k]) {
            truth.extracted_fidelity[k] = kNaN;
            continue;
        }
        const ComplexMatrix extracted = apply_local_pair(map1, map2, outcome.conditional_states[k]->matrix(), {2, 2});
        const QuantumState extracted_state(extracted, {2, 2});
        truth.extracted_fidelity[k] = uhlmann_fidelity(extracted_state, bell_ket(k));
        actual[k] = extracted * *outcome.stats.p[k];
    }
    truth.output_fidelity = std::min(1.0, fidelity(block_diagonal(actual), block_diagonal(ideal)));

    // Source side: the conjugate of each B-side frame rotation on A keeps |phi_00> fixed.
    std::array<QuantumState, 2> sources{werner_source(config.noise.source_visibility[0]),
                                        werner_source(config.noise.source_visibility[1])};
    const std::array<ComplexMatrix, 2> frames{
        jordan_frame_unitary().adjoint() * jordan_frame(settings.first).frame.adjoint(),
        jordan_frame(settings.second).frame.adjoint()};
    truth.source_fidelity = 1.0;
    std::array<ComplexMatrix, 2> injected;
    for (int i = 0; i < 2; ++i) {
        const ComplexMatrix with_b = maps[i]->apply_to(sources[i].matrix(), {2, 2}, 1);
        const ComplexMatrix both = KrausChannel::unitary(frames[i].conjugate()).apply_to(with_b, {2, 2}, 0);
        truth.source_fidelity *= uhlmann_fidelity(QuantumState(both, {2, 2}), bell_ket(0));

        const QuantumState rho_prime(with_b, {2, 2});
        const double q = std::clamp(min_eigenvalue(partial_trace(with_b, {2, 2}, {1})), 0.0, 1.0);
        truth.schmidt_q[i] = q;
        injected[i] = injection_choi_state(teleport_injection_map(rho_prime).channel);
    }

    const QuantumState bell = QuantumState::from_ket(bell_ket(0), {2, 2});
    const ComplexMatrix passthrough_input = joint_source_state(bell, bell);
    const ComplexMatrix teleport_input =
        joint_source_state(QuantumState(injected[0], {2, 2}), QuantumState(injected[1], {2, 2}));

    truth.bsm_fidelity_passthrough = bsm_block_fidelity(bsm, passthrough_input);
    truth.bsm_fidelity_teleport = bsm_block_fidelity(bsm, teleport_input);
    truth.bsm_fidelity = std::max(truth.bsm_fidelity_passthrough, truth.bsm_fidelity_teleport);

    const HeraldedBranch pass = heralded_branch(bsm, passthrough_input);
    const HeraldedBranch tele = heralded_branch(bsm, teleport_input);
    truth.conditional_fidelity_passthrough = pass.fidelity;
    truth.conditional_fidelity_teleport = tele.fidelity;
    truth.conditional_fidelity = std::max(pass.fidelity, tele.fidelity);
    truth.zeta_0 = std::max(pass.zeta, tele.zeta);
    return truth;
}

std::vector<NoiseModel> default_noise_grid() {
    std::vector<NoiseModel> grid;
    for (double misalignment : {0.0, 0.15}) {
        for (int iv = 0; iv <= 5; ++iv) {
            for (int iw = 0; iw <= 5; ++iw) {
                NoiseModel noise;
                const double v = 0.9 + 0.02 * iv;
                noise.source_visibility = {v, v};
                noise.bsm_depolarization = 0.02 * iw;
                noise.setting_misalignment = misalignment;
                grid.push_back(noise);
            }
        }
    }
    return grid;
}

SoundnessReport soundness_sweep(const std::vector<NoiseModel> &grid, double tol) {
    SoundnessReport report;
    report.min_margin = std::numeric_limits<double>::infinity();
    for (const NoiseModel &noise : grid) {
        ScenarioConfig config;
        config.noise = noise;
        SoundnessPoint point;
        point.noise = noise;
        point.stats = simulate(config);
        point.deterministic = certify(point.stats, CertificationMode::deterministic);
        point.independent = certify(point.stats, CertificationMode::independent_sources);
        point.partial = certify(point.stats, CertificationMode::partial);
        point.truth = ground_truth(config);
        point.min_margin = std::numeric_limits<double>::infinity();

        auto check = [&](const std::string &name, double bound, double oracle) {
            if (std::isnan(bound)) return;
            const double margin = oracle - bound;
            point.min_margin = std::min(point.min_margin, margin);
            if (!(margin >= -tol)) point.violations.push_back(name);
        };
        for (int k = 0; k < 4; ++k) {
            if (!std::isnan(point.truth.extracted_fidelity[k])) {
                check("f_o_" + std::to_string(k), point.deterministic.f_o_k[k], point.truth.extracted_fidelity[k]);
            }
        }
        check("f_o", point.deterministic.f_o, point.truth.output_fidelity);
        check("f_i", point.deterministic.f_i, point.truth.source_fidelity);
        check("f_bsm", point.deterministic.f_bsm, point.truth.bsm_fidelity);
        check("f_bsm_independent_sources", point.independent.f_bsm_independent_sources, point.truth.bsm_fidelity);
        check("f_cond", point.partial.f_cond, point.truth.conditional_fidelity);
        check("zeta_0", point.partial.zeta_0, point.truth.zeta_0);

        double mean_square = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (point.stats.p[k] && !std::isnan(point.deterministic.f_o_k[k])) {
                mean_square += *point.stats.p[k] * point.deterministic.f_o_k[k] * point.deterministic.f_o_k[k];
            }
        }
        for (int i = 0; i < 2; ++i) {
            const double q = point.truth.schmidt_q[i];
            check("schmidt_" + std::to_string(i + 1), mean_square - 0.5, std::sqrt(q * (1.0 - q)));
        }
        report.min_margin = std::min(report.min_margin, point.min_margin);
        report.points.push_back(std::move(point));
    }
    report.passed = std::all_of(report.points.begin(), report.points.end(),
                                [](const SoundnessPoint &p) { return p.violations.empty(); });
    return report;
}

}  // namespace bsmcert
