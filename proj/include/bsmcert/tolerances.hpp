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

namespace bsmcert {

/// Numerical tolerances shared by every module.
struct Tolerances {
    /// Smallest eigenvalue still accepted as positive semidefinite.
    double positivity = 1e-9;
    /// Allowed deviation of a state's trace from 1.
    double trace = 1e-10;
    /// Allowed entrywise deviation from Hermiticity.
    double hermiticity = 1e-10;
    /// Completeness of instruments, observables squaring to identity.
    double completeness = 1e-9;
    /// Outcomes with probability below this are treated as never occurring.
    double probability_floor = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace bsmcert
