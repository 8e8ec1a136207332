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

#include <vector>

#include "bsmcert/linalg.hpp"

namespace bsmcert {

/// Completely positive map given by Kraus operators K_i : C^in -> C^out.
/// Trace preservation is a checkable property, not an invariant, so the
/// same type also houses probabilistic branches.
class KrausChannel {
   public:
    KrausChannel(std::vector<Eigen::MatrixXcd> kraus_ops);

    static KrausChannel unitary(const ComplexMatrix &u);
    static KrausChannel identity(int dim);

    int input_dim() const { return in_; }
    int output_dim() const { return out_; }
    const std::vector<Eigen::MatrixXcd> &kraus_ops() const { return ops_; }

    /// sum_i K_i^dagger K_i
    ComplexMatrix effect() const;
    bool is_trace_preserving(double tol = kDefaultTolerances.completeness) const;

    ComplexMatrix apply(const ComplexMatrix &rho) const;
    /// Applies the map to factor `index`; that factor's dimension becomes
    /// output_dim() in the result.
    ComplexMatrix apply_to(const ComplexMatrix &rho, const Dims &dims, int index) const;

    /// `next` after `*this`.
    KrausChannel then(const KrausChannel &next) const;

   private:
    std::vector<Eigen::MatrixXcd> ops_;
    int in_ = 0;
    int out_ = 0;
};

/// Two local maps on a bipartite operator.
ComplexMatrix apply_local_pair(const KrausChannel &first, const KrausChannel &second, const ComplexMatrix &rho,
                               const Dims &dims);

}  // namespace bsmcert
