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

#include "bsmcert/channel.hpp"

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

Eigen::MatrixXcd rectangular_kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Eigen::MatrixXcd> kraus_ops) : ops_(std::move(kraus_ops)) {
    if (ops_.empty()) fail(ErrorCode::invalid_argument, "a channel needs at least one Kraus operator");
    out_ = static_cast<int>(ops_.front().rows());
    in_ = static_cast<int>(ops_.front().cols());
    for (const auto &k : ops_) {
        if (k.rows() != out_ || k.cols() != in_) fail(ErrorCode::dimension_mismatch, "Kraus operators differ in shape");
    }
}

KrausChannel KrausChannel::unitary(const ComplexMatrix &u) { return KrausChannel({u.eigen()}); }

KrausChannel KrausChannel::identity(int dim) { return KrausChannel({Eigen::MatrixXcd::Identity(dim, dim)}); }

ComplexMatrix KrausChannel::effect() const {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(in_, in_);
    for (const auto &k : ops_) sum += k.adjoint() * k;
    return ComplexMatrix(std::move(sum));
}

bool KrausChannel::is_trace_preserving(double tol) const {
    return effect().max_abs_diff(ComplexMatrix::identity(in_)) <= tol;
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix &rho) const {
    if (rho.dim() != in_) fail(ErrorCode::dimension_mismatch, "channel input dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_, out_);
    for (const auto &k : ops_) out += k * rho.eigen() * k.adjoint();
    return ComplexMatrix(std::move(out));
}

ComplexMatrix KrausChannel::apply_to(const ComplexMatrix &rho, const Dims &dims, int index) const {
    if (index < 0 || index >= static_cast<int>(dims.size())) fail(ErrorCode::invalid_argument, "subsystem index out of range");
    if (dims[index] != in_) fail(ErrorCode::dimension_mismatch, "channel does not match subsystem dimension");
    if (total_dim(dims) != rho.dim()) fail(ErrorCode::dimension_mismatch, "operator does not match factor dimensions");
    int before = 1;
    int after = 1;
    for (int i = 0; i < index; ++i) before *= dims[i];
    for (int i = index + 1; i < static_cast<int>(dims.size()); ++i) after *= dims[i];
    const Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(before, before);
    const Eigen::MatrixXcd right = Eigen::MatrixXcd::Identity(after, after);
    const int out_dim = before * out_ * after;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
    for (const auto &k : ops_) {
        const Eigen::MatrixXcd big = rectangular_kron(rectangular_kron(left, k), right);
        out += big * rho.eigen() * big.adjoint();
    }
    return ComplexMatrix(std::move(out));
}

KrausChannel KrausChannel::then(const KrausChannel &next) const {
    if (next.in_ != out_) fail(ErrorCode::dimension_mismatch, "channel composition dimension mismatch");
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto &b : next.ops_) {
        for (const auto &a : ops_) ops.push_back(b * a);
    }
    return KrausChannel(std::move(ops));
}

ComplexMatrix apply_local_pair(const KrausChannel &first, const KrausChannel &second, const ComplexMatrix &rho,
                               const Dims &dims) {
    if (dims.size() != 2) fail(ErrorCode::invalid_argument, "expected a bipartite operator");
    const ComplexMatrix half = first.apply_to(rho, dims, 0);
    return second.apply_to(half, {first.output_dim(), dims[1]}, 1);
}

}  // namespace bsmcert
