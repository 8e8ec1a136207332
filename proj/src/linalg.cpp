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

#include "bsmcert/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

// Decomposes flat indices into per-factor digits; the last factor varies fastest.
class IndexCodec {
   public:
    explicit IndexCodec(const Dims &dims) : dims_(dims), strides_(dims.size()) {
        int stride = 1;
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            strides_[i] = stride;
            stride *= dims[i];
        }
        total_ = stride;
    }

    int total() const { return total_; }
    int digit(int flat, int factor) const { return (flat / strides_[factor]) % dims_[factor]; }
    int stride(int factor) const { return strides_[factor]; }

   private:
    Dims dims_;
    std::vector<int> strides_;
    int total_ = 1;
};

void check_dims(const ComplexMatrix &m, const Dims &dims) {
    if (dims.empty()) fail(ErrorCode::dimension_mismatch, "empty factor list");
    for (int d : dims) {
        if (d <= 0) fail(ErrorCode::dimension_mismatch, "factor dimensions must be positive");
    }
    if (total_dim(dims) != m.dim()) {
        fail(ErrorCode::dimension_mismatch,
             "factor dimensions multiply to " + std::to_string(total_dim(dims)) + " but matrix has dimension " +
                 std::to_string(m.dim()));
    }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hermitian_solver(const ComplexMatrix &m, double tol) {
    if (!m.is_hermitian(tol)) fail(ErrorCode::numerical, "matrix is not Hermitian within tolerance");
    Eigen::MatrixXcd sym = 0.5 * (m.eigen() + m.eigen().adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sym);
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) fail(ErrorCode::dimension_mismatch, "matrix must be square");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    m_ = Eigen::MatrixXcd::Zero(n, n);
    Eigen::Index r = 0;
    for (const auto &row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n) fail(ErrorCode::dimension_mismatch, "matrix must be square");
        Eigen::Index c = 0;
        for (const auto &value : row) m_(r, c++) = value;
        ++r;
    }
}

ComplexMatrix ComplexMatrix::zero(int dim) { return ComplexMatrix(Eigen::MatrixXcd::Zero(dim, dim)); }

ComplexMatrix ComplexMatrix::identity(int dim) { return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim)); }

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(m_.adjoint()); }

ComplexMatrix ComplexMatrix::transpose() const { return ComplexMatrix(m_.transpose()); }

ComplexMatrix ComplexMatrix::conjugate() const { return ComplexMatrix(m_.conjugate()); }

bool ComplexMatrix::is_hermitian(double tol) const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (dim() != other.dim()) fail(ErrorCode::dimension_mismatch, "dimension mismatch");
    if (dim() == 0) return 0.0;
    return (m_ - other.m_).cwiseAbs().maxCoeff();
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &rhs) const {
    if (dim() != rhs.dim()) fail(ErrorCode::dimension_mismatch, "dimension mismatch in sum");
    return ComplexMatrix(m_ + rhs.m_);
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &rhs) const {
    if (dim() != rhs.dim()) fail(ErrorCode::dimension_mismatch, "dimension mismatch in difference");
    return ComplexMatrix(m_ - rhs.m_);
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    if (dim() != rhs.dim()) fail(ErrorCode::dimension_mismatch, "dimension mismatch in product");
    return ComplexMatrix(m_ * rhs.m_);
}

ComplexMatrix ComplexMatrix::operator*(Complex scale) const { return ComplexMatrix(m_ * scale); }

ComplexMatrix ComplexMatrix::operator-() const { return ComplexMatrix(-m_); }

KetVector::KetVector(Eigen::VectorXcd amplitudes, double tol) : v_(std::move(amplitudes)) {
    if (v_.size() == 0) fail(ErrorCode::dimension_mismatch, "empty ket");
    if (std::abs(v_.squaredNorm() - 1.0) > tol) fail(ErrorCode::invalid_argument, "ket is not normalized");
}

KetVector::KetVector(std::initializer_list<Complex> amplitudes) {
    v_ = Eigen::VectorXcd(static_cast<Eigen::Index>(amplitudes.size()));
    Eigen::Index i = 0;
    for (const auto &a : amplitudes) v_(i++) = a;
    if (v_.size() == 0) fail(ErrorCode::dimension_mismatch, "empty ket");
    if (std::abs(v_.squaredNorm() - 1.0) > kDefaultTolerances.trace) {
        fail(ErrorCode::invalid_argument, "ket is not normalized");
    }
}

KetVector KetVector::normalized(const Eigen::VectorXcd &amplitudes) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) fail(ErrorCode::invalid_argument, "cannot normalize the zero vector");
    return KetVector(amplitudes / norm);
}

ComplexMatrix KetVector::projector() const { return ComplexMatrix(v_ * v_.adjoint()); }

QuantumState::QuantumState(ComplexMatrix rho, Dims factor_dims, const Tolerances &tol)
    : rho_(std::move(rho)), dims_(std::move(factor_dims)) {
    check_dims(rho_, dims_);
    if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > tol.trace) {
        fail(ErrorCode::invalid_argument, "state trace differs from 1");
    }
    if (!rho_.is_hermitian(tol.hermiticity)) fail(ErrorCode::invalid_argument, "state is not Hermitian");
    if (min_eigenvalue(rho_, tol.hermiticity) < -tol.positivity) {
        fail(ErrorCode::invalid_argument, "state is not positive semidefinite");
    }
}

QuantumState QuantumState::from_ket(const KetVector &ket, Dims factor_dims) {
    return QuantumState(ket.projector(), std::move(factor_dims));
}

QuantumState QuantumState::maximally_mixed(Dims factor_dims) {
    const int n = total_dim(factor_dims);
    return QuantumState(ComplexMatrix::identity(n) * Complex(1.0 / n, 0.0), std::move(factor_dims));
}

int total_dim(const Dims &dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, [](int a, int b) { return a * b; });
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const int na = a.dim();
    const int nb = b.dim();
    Eigen::MatrixXcd out(na * nb, na * nb);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.eigen();
    }
    return ComplexMatrix(std::move(out));
}

KetVector kron(const KetVector &a, const KetVector &b) {
    Eigen::VectorXcd out(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i) out.segment(i * b.dim(), b.dim()) = a[i] * b.eigen();
    return KetVector(std::move(out));
}

QuantumState kron(const QuantumState &a, const QuantumState &b) {
    Dims dims = a.factor_dims();
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
    return QuantumState(kron(a.matrix(), b.matrix()), std::move(dims));
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const Dims &dims, std::vector<int> keep) {
    check_dims(m, dims);
    const int n = static_cast<int>(dims.size());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.empty()) fail(ErrorCode::invalid_argument, "partial trace needs at least one kept subsystem");
    for (int k : keep) {
        if (k < 0 || k >= n) fail(ErrorCode::invalid_argument, "subsystem index out of range");
    }
    std::vector<int> traced;
    for (int i = 0; i < n; ++i) {
        if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);
    }

    Dims kept_dims;
    Dims traced_dims;
    for (int k : keep) kept_dims.push_back(dims[k]);
    for (int t : traced) traced_dims.push_back(dims[t]);
    const IndexCodec full(dims);
    const IndexCodec kept(kept_dims);
    const IndexCodec env(traced_dims.empty() ? Dims{1} : traced_dims);

    // Offset in the full index contributed by a kept or traced multi-index.
    auto offset = [&](const IndexCodec &codec, const std::vector<int> &factors, int flat) {
        int off = 0;
        for (std::size_t f = 0; f < factors.size(); ++f) {
            off += codec.digit(flat, static_cast<int>(f)) * full.stride(factors[f]);
        }
        return off;
    };

    std::vector<int> kept_offset(kept.total());
    for (int i = 0; i < kept.total(); ++i) kept_offset[i] = offset(kept, keep, i);
    std::vector<int> env_offset(env.total());
    for (int e = 0; e < env.total(); ++e) env_offset[e] = traced.empty() ? 0 : offset(env, traced, e);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kept.total(), kept.total());
    for (int r = 0; r < kept.total(); ++r) {
        for (int c = 0; c < kept.total(); ++c) {
            Complex sum = 0.0;
            for (int e = 0; e < env.total(); ++e) sum += m(kept_offset[r] + env_offset[e], kept_offset[c] + env_offset[e]);
            out(r, c) = sum;
        }
    }
    return ComplexMatrix(std::move(out));
}

QuantumState partial_trace(const QuantumState &state, std::vector<int> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    ComplexMatrix reduced = partial_trace(state.matrix(), state.factor_dims(), keep);
    Dims dims;
    for (int k : keep) dims.push_back(state.factor_dims()[k]);
    return QuantumState(std::move(reduced), std::move(dims));
}

ComplexMatrix permute_subsystems(const ComplexMatrix &m, const Dims &dims, const std::vector<int> &order) {
    check_dims(m, dims);
    const int n = static_cast<int>(dims.size());
    if (static_cast<int>(order.size()) != n) fail(ErrorCode::invalid_argument, "permutation has wrong length");
    std::vector<int> seen(order);
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < n; ++i) {
        if (seen[i] != i) fail(ErrorCode::invalid_argument, "order is not a permutation");
    }
    Dims out_dims(n);
    for (int i = 0; i < n; ++i) out_dims[i] = dims[order[i]];
    const IndexCodec in(dims);
    const IndexCodec out(out_dims);

    std::vector<int> source(in.total());
    for (int flat = 0; flat < out.total(); ++flat) {
        int idx = 0;
        for (int p = 0; p < n; ++p) idx += out.digit(flat, p) * in.stride(order[p]);
        source[flat] = idx;
    }
    Eigen::MatrixXcd result(in.total(), in.total());
    for (int r = 0; r < in.total(); ++r) {
        for (int c = 0; c < in.total(); ++c) result(r, c) = m(source[r], source[c]);
    }
    return ComplexMatrix(std::move(result));
}

ComplexMatrix partial_transpose(const ComplexMatrix &m, const Dims &dims, const std::vector<int> &transposed) {
    check_dims(m, dims);
    const int n = static_cast<int>(dims.size());
    for (int t : transposed) {
        if (t < 0 || t >= n) fail(ErrorCode::invalid_argument, "subsystem index out of range");
    }
    const IndexCodec codec(dims);
    Eigen::MatrixXcd out(m.dim(), m.dim());
    for (int r = 0; r < m.dim(); ++r) {
        for (int c = 0; c < m.dim(); ++c) {
            int r2 = r;
            int c2 = c;
            for (int t : transposed) {
                const int dr = codec.digit(r, t);
                const int dc = codec.digit(c, t);
                r2 += (dc - dr) * codec.stride(t);
                c2 += (dr - dc) * codec.stride(t);
            }
            out(r2, c2) = m(r, c);
        }
    }
    return ComplexMatrix(std::move(out));
}

ComplexMatrix embed(const ComplexMatrix &op, const Dims &dims, int index) {
    if (index < 0 || index >= static_cast<int>(dims.size())) fail(ErrorCode::invalid_argument, "subsystem index out of range");
    if (op.dim() != dims[index]) fail(ErrorCode::dimension_mismatch, "operator does not match subsystem dimension");
    int before = 1;
    int after = 1;
    for (int i = 0; i < index; ++i) before *= dims[i];
    for (int i = index + 1; i < static_cast<int>(dims.size()); ++i) after *= dims[i];
    return kron(kron(ComplexMatrix::identity(before), op), ComplexMatrix::identity(after));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m, double tol) {
    const auto solver = hermitian_solver(m, tol);
    const Eigen::VectorXd values = solver.eigenvalues();
    return std::vector<double>(values.data(), values.data() + values.size());
}

double min_eigenvalue(const ComplexMatrix &m, double tol) {
    if (m.dim() == 0) fail(ErrorCode::dimension_mismatch, "empty matrix");
    return hermitian_eigenvalues(m, tol).front();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m, const Tolerances &tol) {
    const auto solver = hermitian_solver(m, tol.hermiticity);
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -tol.positivity) fail(ErrorCode::numerical, "matrix square root of a non-positive matrix");
        values(i) = std::sqrt(std::max(values(i), 0.0));
    }
    const Eigen::MatrixXcd &vecs = solver.eigenvectors();
    return ComplexMatrix(vecs * values.cast<Complex>().asDiagonal() * vecs.adjoint());
}

double trace_norm(const ComplexMatrix &m) {
    double sum = 0.0;
    for (double v : hermitian_eigenvalues(m)) sum += std::abs(v);
    return sum;
}

double fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma, const Tolerances &tol) {
    if (rho.dim() != sigma.dim()) fail(ErrorCode::dimension_mismatch, "fidelity of operators with different dimensions");
    const ComplexMatrix root = psd_sqrt(rho, tol);
    const ComplexMatrix inner = root * sigma * root;
    Tolerances loose = tol;
    // sqrt(rho) sigma sqrt(rho) carries the rounding of both factors.
    loose.hermiticity = std::max(tol.hermiticity, 1e-9);
    double sum = 0.0;
    for (double v : hermitian_eigenvalues(inner, loose.hermiticity)) {
        if (v < -loose.positivity) fail(ErrorCode::numerical, "fidelity kernel is not positive");
        sum += std::sqrt(std::max(v, 0.0));
    }
    return sum;
}

double uhlmann_fidelity(const QuantumState &rho, const QuantumState &sigma) {
    if (rho.dim() != sigma.dim()) fail(ErrorCode::dimension_mismatch, "fidelity of states with different dimensions");
    return std::clamp(fidelity(rho.matrix(), sigma.matrix()), 0.0, 1.0);
}

double uhlmann_fidelity(const QuantumState &rho, const KetVector &psi) {
    if (rho.dim() != psi.dim()) fail(ErrorCode::dimension_mismatch, "fidelity of states with different dimensions");
    const Complex overlap = psi.eigen().dot(rho.matrix().eigen() * psi.eigen());
    return std::sqrt(std::clamp(overlap.real(), 0.0, 1.0));
}

double negativity(const QuantumState &state, Bipartition cut) {
    const int n = static_cast<int>(state.factor_dims().size());
    if (cut.split <= 0 || cut.split >= n) fail(ErrorCode::invalid_argument, "bipartition must leave both sides nonempty");
    std::vector<int> side_b;
    for (int i = cut.split; i < n; ++i) side_b.push_back(i);
    const ComplexMatrix pt = partial_transpose(state.matrix(), state.factor_dims(), side_b);
    return std::max(0.0, (trace_norm(pt) - 1.0) / 2.0);
}

namespace pauli {

const ComplexMatrix &x() {
    static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}

const ComplexMatrix &y() {
    static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    return m;
}

const ComplexMatrix &z() {
    static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

const ComplexMatrix &id() {
    static const ComplexMatrix m = ComplexMatrix::identity(2);
    return m;
}

}  // namespace pauli

ComplexMatrix qubit_rotation(const ComplexMatrix &sigma, double angle) { return pauli_exponential(sigma, -angle / 2.0); }

ComplexMatrix pauli_exponential(const ComplexMatrix &sigma, double angle) {
    // sigma^2 = 1, so exp(i t sigma) = cos t + i sin t sigma.
    return pauli::id() * Complex(std::cos(angle), 0.0) + sigma * Complex(0.0, std::sin(angle));
}

KetVector bell_ket(int k) {
    if (k < 0 || k > 3) fail(ErrorCode::invalid_argument, "Bell index must be in 0..3");
    const int j = k >> 1;
    const int l = k & 1;
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd phi(4);
    phi << h, 0.0, 0.0, h;
    ComplexMatrix local = kron(j ? pauli::z() : pauli::id(), l ? pauli::x() : pauli::id());
    return KetVector(local.eigen() * phi);
}

ComplexMatrix bell_projector(int k) { return bell_ket(k).projector(); }

}  // namespace bsmcert
