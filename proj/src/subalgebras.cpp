#include "prc/subalgebras.hpp"

#include <algorithm>

namespace prc {

namespace {

bool closed_mask(const HomogeneousSpaceSpec& spec, std::uint32_t mask) {
  auto in = [mask](int i) { return (mask >> i) & 1U; };
  for (const auto& t : spec.triples().ordered()) {
    if (in(t.i) && in(t.j) && !in(t.k)) return false;
  }
  return true;
}

// Members of `candidates` not strictly contained in another member.
std::vector<SubalgebraIndexSet> inclusion_maximal(const std::vector<SubalgebraIndexSet>& candidates) {
  std::vector<SubalgebraIndexSet> out;
  for (const auto& a : candidates) {
    const bool dominated = std::any_of(candidates.begin(), candidates.end(), [&](const auto& b) {
      return a != b && a.is_subset_of(b);
    });
    if (!dominated) out.push_back(a);
  }
  return out;
}

}  // namespace

bool is_bracket_closed(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J) {
  if (J.universe() != spec.s()) throw InputError("index set does not match space");
  return closed_mask(spec, J.mask());
}

SubalgebraLattice intermediate_subalgebras(const HomogeneousSpaceSpec& spec) {
  const std::size_t s = spec.s();
  if (s > SubalgebraIndexSet::kMaxSummands) {
    throw InputError("too many summands for exhaustive subalgebra scan");
  }
  SubalgebraLattice lattice;
  const std::uint32_t full = SubalgebraIndexSet::full_mask(s);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (closed_mask(spec, mask)) lattice.all_proper.emplace_back(mask, s);
  }
  std::sort(lattice.all_proper.begin(), lattice.all_proper.end());
  lattice.maximal = inclusion_maximal(lattice.all_proper);
  return lattice;
}

std::vector<SubalgebraIndexSet> maximal_within(const HomogeneousSpaceSpec& spec,
                                               const SubalgebraIndexSet& J) {
  if (!is_bracket_closed(spec, J)) {
    throw InputError("index set " + J.to_string() + " is not bracket-closed");
  }
  std::vector<SubalgebraIndexSet> inside;
  const std::uint32_t outer = J.mask();
  // enumerate proper non-empty submasks of J
  for (std::uint32_t sub = (outer - 1) & outer; sub != 0; sub = (sub - 1) & outer) {
    if (closed_mask(spec, sub)) inside.emplace_back(sub, spec.s());
  }
  std::sort(inside.begin(), inside.end());
  return inclusion_maximal(inside);
}

}  // namespace prc
