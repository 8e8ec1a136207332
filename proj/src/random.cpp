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

#include "bsmcert/random.hpp"

#include <Eigen/QR>
#include <cmath>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

// Columns form an isometry C^cols -> C^rows.
Eigen::MatrixXcd random_isometry(int rows, int cols, Rng &rng) {
    const Eigen::MatrixXcd g = random_ginibre(rows, cols, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
    const Eigen::MatrixXcd r = qr.matrixQR();
    for (int j = 0; j < cols; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

}  // namespace

Eigen::MatrixXcd random_ginibre(int rows, int cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    return g;
}

ComplexMatrix random_unitary(int dim, Rng &rng) { return ComplexMatrix(random_isometry(dim, dim, rng)); }

KetVector random_ket(int dim, Rng &rng) { return KetVector::normalized(random_ginibre(dim, 1, rng).col(0)); }

QuantumState random_state(const Dims &dims, Rng &rng, int rank) {
    const int n = total_dim(dims);
    const int k = rank <= 0 ? n : rank;
    const Eigen::MatrixXcd g = random_ginibre(n, k, rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return QuantumState(ComplexMatrix(std::move(rho)), dims);
}

KrausChannel random_channel(int input_dim, int output_dim, int n_kraus, Rng &rng) {
    if (n_kraus <= 0) fail(ErrorCode::invalid_argument, "need at least one Kraus operator");
    const Eigen::MatrixXcd v = random_isometry(output_dim * n_kraus, input_dim, rng);
    std::vector<Eigen::MatrixXcd> ops;
    for (int i = 0; i < n_kraus; ++i) ops.push_back(v.block(i * output_dim, 0, output_dim, input_dim));
    return KrausChannel(std::move(ops));
}

std::pair<KrausChannel, KrausChannel> random_instrument(int dim, int kraus_per_branch, Rng &rng) {
    const KrausChannel all = random_channel(dim, dim, 2 * kraus_per_branch, rng);
    std::vector<Eigen::MatrixXcd> success(all.kraus_ops().begin(), all.kraus_ops().begin() + kraus_per_branch);
    std::vector<Eigen::MatrixXcd> failure(all.kraus_ops().begin() + kraus_per_branch, all.kraus_ops().end());
    return {KrausChannel(std::move(success)), KrausChannel(std::move(failure))};
}

}  // namespace bsmcert
