#pragma once

#include <cstddef>
#include <vector>

namespace codesign {

using Objectives = std::vector<double>;  ///< all-minimize form

/// a dominates b: a <= b everywhere and a < b somewhere.
bool dominates(const Objectives& a, const Objectives& b);

/// Indices (ascending) of the nondominated points. Identical points do not
/// dominate each other, so duplicates are all kept.
std::vector<std::size_t> pareto_filter(const std::vector<Objectives>& points);

/// Exact dominated volume w.r.t. `ref` for dimension 1 to 3 (dimension sweep).
/// Every point must be strictly below `ref` in all objectives; dominated and
/// duplicate points are allowed. Throws ModelError otherwise.
double hypervolume(const std::vector<Objectives>& points, const Objectives& ref);

/// hypervolume(front + {y}) - hypervolume(front). Points of `front` need not
/// be nondominated. Returns 0 when y is not strictly below ref.
double hypervolume_contribution(const std::vector<Objectives>& front, const Objectives& y,
                                const Objectives& ref);

}  // namespace codesign
