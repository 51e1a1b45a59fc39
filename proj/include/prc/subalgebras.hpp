#pragma once

#include <vector>

#include "prc/space_model.hpp"

namespace prc {

/// Intermediate subalgebras h < k < g as index sets, in canonical order.
struct SubalgebraLattice {
  std::vector<SubalgebraIndexSet> all_proper;
  std::vector<SubalgebraIndexSet> maximal;
};

/// J is a subalgebra iff [jkl] = 0 whenever j,k are in J and l is not.
/// Exact zero test on the stored constants.
bool is_bracket_closed(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J);

/// Exhaustive scan over the 2^s index sets (s <= 16).
SubalgebraLattice intermediate_subalgebras(const HomogeneousSpaceSpec& spec);

/// Closed proper non-empty subsets of J that are maximal under inclusion.
std::vector<SubalgebraIndexSet> maximal_within(const HomogeneousSpaceSpec& spec,
                                               const SubalgebraIndexSet& J);

}  // namespace prc
