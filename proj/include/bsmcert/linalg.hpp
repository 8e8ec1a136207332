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

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <vector>

#include "bsmcert/tolerances.hpp"

namespace bsmcert {

using Complex = std::complex<double>;

/// Subsystem dimensions of a tensor-product space, left factor first.
using Dims = std::vector<int>;

/// Dense square complex matrix. Hermiticity and positivity are checked on
/// demand, never assumed.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(Eigen::MatrixXcd entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix zero(int dim);
    static ComplexMatrix identity(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    Complex operator()(int row, int col) const { return m_(row, col); }
    const Eigen::MatrixXcd &eigen() const { return m_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const { return m_.trace(); }

    bool is_hermitian(double tol = kDefaultTolerances.hermiticity) const;
    /// Largest entrywise modulus of `*this - other`.
    double max_abs_diff(const ComplexMatrix &other) const;

    ComplexMatrix operator+(const ComplexMatrix &rhs) const;
    ComplexMatrix operator-(const ComplexMatrix &rhs) const;
    ComplexMatrix operator*(const ComplexMatrix &rhs) const;
    ComplexMatrix operator*(Complex scale) const;
    ComplexMatrix operator-() const;

   private:
    Eigen::MatrixXcd m_;
};

inline ComplexMatrix operator*(Complex scale, const ComplexMatrix &m) { return m * scale; }

/// Normalized pure state.
class KetVector {
   public:
    KetVector() = default;
    /// Throws unless the squared norm is 1 within `tol`.
    explicit KetVector(Eigen::VectorXcd amplitudes, double tol = kDefaultTolerances.trace);
    KetVector(std::initializer_list<Complex> amplitudes);

    /// Rescales `amplitudes` to unit norm; throws on the zero vector.
    static KetVector normalized(const Eigen::VectorXcd &amplitudes);

    int dim() const { return static_cast<int>(v_.size()); }
    Complex operator[](int i) const { return v_(i); }
    const Eigen::VectorXcd &eigen() const { return v_; }

    ComplexMatrix projector() const;
    Complex inner(const KetVector &other) const { return v_.dot(other.v_); }

   private:
    Eigen::VectorXcd v_;
};

/// Density operator with a declared tensor factorization.
class QuantumState {
   public:
    /// Validates unit trace, Hermiticity and positivity against `tol`.
    QuantumState(ComplexMatrix rho, Dims factor_dims, const Tolerances &tol = kDefaultTolerances);

    static QuantumState from_ket(const KetVector &ket, Dims factor_dims);
    static QuantumState maximally_mixed(Dims factor_dims);

    const ComplexMatrix &matrix() const { return rho_; }
    const Dims &factor_dims() const { return dims_; }
    int dim() const { return rho_.dim(); }

   private:
    ComplexMatrix rho_;
    Dims dims_;
};

int total_dim(const Dims &dims);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
KetVector kron(const KetVector &a, const KetVector &b);
QuantumState kron(const QuantumState &a, const QuantumState &b);

/// Reduced operator on the subsystems listed in `keep` (kept in ascending
/// order). Works on unnormalized operators.
ComplexMatrix partial_trace(const ComplexMatrix &m, const Dims &dims, std::vector<int> keep);
QuantumState partial_trace(const QuantumState &state, std::vector<int> keep);

/// Reorders tensor factors: output factor i is input factor `order[i]`.
ComplexMatrix permute_subsystems(const ComplexMatrix &m, const Dims &dims, const std::vector<int> &order);

ComplexMatrix partial_transpose(const ComplexMatrix &m, const Dims &dims, const std::vector<int> &transposed);

/// `op` acting on factor `index`, identity elsewhere.
ComplexMatrix embed(const ComplexMatrix &op, const Dims &dims, int index);

/// Ascending eigenvalues of a Hermitian matrix; throws if `m` is not
/// Hermitian within `tol`.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m, double tol = kDefaultTolerances.hermiticity);
double min_eigenvalue(const ComplexMatrix &m, double tol = kDefaultTolerances.hermiticity);

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// [-tol.positivity, 0) are clamped to zero; anything lower throws.
ComplexMatrix psd_sqrt(const ComplexMatrix &m, const Tolerances &tol = kDefaultTolerances);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix &m);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) of two positive
/// operators. Not renormalized, so subnormalized branches scale as
/// sqrt(tr rho * tr sigma).
double fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma, const Tolerances &tol = kDefaultTolerances);
double uhlmann_fidelity(const QuantumState &rho, const QuantumState &sigma);
/// sqrt(<psi|rho|psi>).
double uhlmann_fidelity(const QuantumState &rho, const KetVector &psi);

/// Split of the factor list into side A (first `split` factors) and side B.
struct Bipartition {
    int split = 1;
};

double negativity(const QuantumState &state, Bipartition cut = {});

namespace pauli {
const ComplexMatrix &x();
const ComplexMatrix &y();
const ComplexMatrix &z();
const ComplexMatrix &id();
}  // namespace pauli

/// exp(-i angle/2 sigma) for a Pauli matrix sigma.
ComplexMatrix qubit_rotation(const ComplexMatrix &sigma, double angle);
/// exp(i angle sigma) for a Pauli matrix sigma.
ComplexMatrix pauli_exponential(const ComplexMatrix &sigma, double angle);

/// |phi_k> = (Z^j (x) X^l)(|00> + |11>)/sqrt(2) with k = 2j + l.
KetVector bell_ket(int k);
ComplexMatrix bell_projector(int k);

}  // namespace bsmcert
