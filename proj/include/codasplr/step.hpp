#pragma once

#include <utility>
#include <vector>

#include "codasplr/coda.hpp"

namespace codasplr {

/// Greedy forward selection result. ratios holds the chosen pairs in
/// selection order; exvar_path the cumulative exvar_of_subset after each
/// addition. The pairs always form an acyclic graph on the parts, so the
/// PLR columns stay linearly independent and the path is strictly
/// increasing; a full selection of D - 1 ratios spans all parts and reaches
/// 100 percent.
struct StepSelection {
    std::vector<std::pair<int, int>> ratios;
    std::vector<int> columns;  ///< same selection as canonical PLR column ids
    std::vector<double> exvar_path;
};

/// Picks up to max_ratios pairwise logratios one at a time, each time taking
/// the candidate that keeps the part graph acyclic and maximizes the
/// cumulative explained variability of the selected set; ties go to the
/// earliest candidate in canonical pair order. Requires a centered PLR
/// matrix with nonzero variability and 1 <= max_ratios <= D - 1 (BadConfig).
StepSelection step_select(const PlrMatrix& Xp, int max_ratios);

}  // namespace codasplr
