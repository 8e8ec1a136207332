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

#include "bsmcert/figures.hpp"

#include <algorithm>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

std::string p0_label(const char *prefix, double p0) {
    if (p0 == 0.25) return std::string(prefix) + "_p0_0.25";
    if (p0 == 0.1) return std::string(prefix) + "_p0_0.1";
    return std::string(prefix) + "_p0_0.01";
}

std::vector<BoundValue> fig3_row(double beta) {
    const BoundValue fo = f_o_from_chsh(beta);
    const std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};
    const std::array<double, 4> fk{fo.value, fo.value, fo.value, fo.value};
    const double combined = f_o_combined(p, fk);

    BoundValue full = bsm_fidelity_bound(combined, f_i_from_delta(1.0).value);
    full.flags |= fo.flags;
    const BoundValue fi = f_i_from_delta(std::clamp(beta / BoundConstants::tsirelson, 0.0, 1.0));
    BoundValue scaled = bsm_fidelity_bound(combined, fi.value);
    scaled.flags |= fo.flags | fi.flags;
    BoundValue independent = bsm_fidelity_independent_sources(p, fk);
    independent.flags |= fo.flags;
    return {full, scaled, independent};
}

std::vector<BoundValue> partial_row(double beta0, bool zeta) {
    const BoundValue fo = f_o_from_chsh(beta0);
    const BoundValue fi = f_i_from_delta(std::clamp(beta0 / BoundConstants::tsirelson, 0.0, 1.0));
    std::vector<BoundValue> row;
    for (double p0 : kFigurePartialP0) {
        BoundValue v = zeta ? zeta_lower_bound(fi.value, p0) : conditional_fidelity_bound(fo.value, fi.value, p0);
        v.flags |= fi.flags;
        if (!zeta) v.flags |= fo.flags;
        row.push_back(v);
    }
    return row;
}

}  // namespace

FigureTable figure_table(FigureId which, int resolution) {
    if (resolution < 2) fail(ErrorCode::invalid_argument, "resolution must be at least 2");
    FigureTable table;
    switch (which) {
        case FigureId::fig3:
            table.x_label = "beta";
            table.curve_labels = {"f_bsm_delta_1", "f_bsm_delta_scaled", "f_bsm_independent_sources"};
            break;
        case FigureId::fig5:
            table.x_label = "beta0";
            for (double p0 : kFigurePartialP0) table.curve_labels.push_back(p0_label("f_cond", p0));
            break;
        case FigureId::fig6:
            table.x_label = "beta0";
            for (double p0 : kFigurePartialP0) table.curve_labels.push_back(p0_label("zeta0", p0));
            break;
    }
    constexpr double lo = 2.0;
    constexpr double hi = BoundConstants::tsirelson;
    for (int i = 0; i < resolution; ++i) {
        // Pin the last abscissa to 2 sqrt 2 exactly.
        const double x = i + 1 == resolution ? hi : lo + (hi - lo) * i / (resolution - 1);
        table.x.push_back(x);
        table.rows.push_back(which == FigureId::fig3 ? fig3_row(x) : partial_row(x, which == FigureId::fig6));
    }
    return table;
}

}  // namespace bsmcert
