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

#include <random>
#include <utility>

#include "bsmcert/channel.hpp"
#include "bsmcert/linalg.hpp"

namespace bsmcert {

using Rng = std::mt19937_64;

/// Ginibre matrix with i.i.d. standard complex normal entries.
Eigen::MatrixXcd random_ginibre(int rows, int cols, Rng &rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int dim, Rng &rng);

KetVector random_ket(int dim, Rng &rng);

/// Random density matrix G G^dagger / tr from a dim x rank Ginibre matrix.
/// rank = 0 means full rank.
QuantumState random_state(const Dims &dims, Rng &rng, int rank = 0);

/// Random trace-preserving channel with `n_kraus` operators (Stinespring
/// isometry cut into blocks).
KrausChannel random_channel(int input_dim, int output_dim, int n_kraus, Rng &rng);

/// Random two-branch instrument {E_0, E_fail} on C^dim; E_0 + E_fail is
/// trace preserving.
std::pair<KrausChannel, KrausChannel> random_instrument(int dim, int kraus_per_branch, Rng &rng);

}  // namespace bsmcert
