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

#include <string>
#include <vector>

#include "bsmcert/bounds.hpp"

namespace bsmcert {

enum class FigureId { fig3, fig5, fig6 };

/// Curves sampled on a shared abscissa (beta or beta_0 in [2, 2 sqrt 2]).
struct FigureTable {
    std::string x_label;
    std::vector<std::string> curve_labels;
    std::vector<double> x;
    /// rows[i][c] is curve c at x[i].
    std::vector<std::vector<BoundValue>> rows;
};

/// Heralding probabilities of the partial-BSM curves.
inline constexpr double kFigurePartialP0[] = {0.25, 0.1, 0.01};

/// fig3: BSM fidelity vs beta with delta = 1, with delta = beta/(2 sqrt 2),
/// and from post-measurement data alone (independent sources), p_k = 1/4.
/// fig5 / fig6: conditional fidelity / zeta_0 bound vs beta_0 with
/// delta = beta_0/(2 sqrt 2) for each p_0 in kFigurePartialP0.
FigureTable figure_table(FigureId which, int resolution);

}  // namespace bsmcert
