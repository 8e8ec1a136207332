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

#include <gtest/gtest.h>

#include "bsmcert/channel.hpp"
#include "bsmcert/error.hpp"
#include "bsmcert/random.hpp"

namespace bsmcert {
namespace {

Eigen::MatrixXcd rect_kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

TEST(KrausChannelTest, IdentityAndUnitary) {
    Rng rng(21);
    const QuantumState rho = random_state({3}, rng);
    EXPECT_LT(KrausChannel::identity(3).apply(rho.matrix()).max_abs_diff(rho.matrix()), 1e-14);
    const ComplexMatrix u = random_unitary(3, rng);
    EXPECT_LT(KrausChannel::unitary(u).apply(rho.matrix()).max_abs_diff(u * rho.matrix() * u.adjoint()), 1e-12);
    EXPECT_TRUE(KrausChannel::unitary(u).is_trace_preserving());
}

TEST(KrausChannelTest, RejectsInconsistentOperators) {
    EXPECT_THROW(KrausChannel(std::vector<Eigen::MatrixXcd>{}), Error);
    const std::vector<Eigen::MatrixXcd> mixed{Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(3, 3)};
    EXPECT_THROW(KrausChannel{mixed}, Error);
}

TEST(KrausChannelTest, RandomChannelsAreTracePreservingAndPositive) {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const KrausChannel ch = random_channel(2, 3, 1 + trial % 4, rng);
        EXPECT_EQ(ch.input_dim(), 2);
        EXPECT_EQ(ch.output_dim(), 3);
        EXPECT_TRUE(ch.is_trace_preserving(1e-10));
        const QuantumState rho = random_state({2}, rng);
        const ComplexMatrix out = ch.apply(rho.matrix());
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-10);
        EXPECT_GE(min_eigenvalue(out), -1e-12);
    }
}

TEST(KrausChannelTest, ApplyToFactorMatchesKroneckerLift) {
    Rng rng(23);
    const KrausChannel ch = random_channel(2, 3, 2, rng);
    const QuantumState rho = random_state({2, 2, 2}, rng);
    ComplexMatrix expected = ComplexMatrix::zero(12);
    for (const auto &k : ch.kraus_ops()) {
        const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
        const Eigen::MatrixXcd lifted = rect_kron(id2, rect_kron(k, id2));
        expected = expected + ComplexMatrix(lifted * rho.matrix().eigen() * lifted.adjoint());
    }
    EXPECT_LT(ch.apply_to(rho.matrix(), {2, 2, 2}, 1).max_abs_diff(expected), 1e-12);
    EXPECT_THROW(ch.apply_to(rho.matrix(), {2, 4}, 1), Error);
}

TEST(KrausChannelTest, CompositionMatchesSequentialApplication) {
    Rng rng(24);
    const KrausChannel first = random_channel(2, 3, 2, rng);
    const KrausChannel second = random_channel(3, 2, 3, rng);
    const QuantumState rho = random_state({2}, rng);
    const KrausChannel both = first.then(second);
    EXPECT_EQ(both.kraus_ops().size(), 6u);
    EXPECT_LT(both.apply(rho.matrix()).max_abs_diff(second.apply(first.apply(rho.matrix()))), 1e-12);
    EXPECT_THROW(second.then(second), Error);
}

TEST(KrausChannelTest, LocalPairEqualsSuccessiveFactorMaps) {
    Rng rng(25);
    const KrausChannel a = random_channel(2, 2, 2, rng);
    const KrausChannel b = random_channel(2, 2, 3, rng);
    const QuantumState rho = random_state({2, 2}, rng);
    const ComplexMatrix expected = b.apply_to(a.apply_to(rho.matrix(), {2, 2}, 0), {2, 2}, 1);
    EXPECT_LT(apply_local_pair(a, b, rho.matrix(), {2, 2}).max_abs_diff(expected), 1e-12);
}

TEST(InstrumentTest, BranchesSumToTracePreservingMap) {
    Rng rng(26);
    for (int dim : {2, 3, 4}) {
        const auto [success, failure] = random_instrument(dim, 2, rng);
        const ComplexMatrix total = success.effect() + failure.effect();
        EXPECT_LT(total.max_abs_diff(ComplexMatrix::identity(dim)), 1e-10);
        EXPECT_FALSE(success.is_trace_preserving());
    }
}

}  // namespace
}  // namespace bsmcert
