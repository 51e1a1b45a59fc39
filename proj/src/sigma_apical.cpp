#include "prc/sigma_apical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prc/curvature.hpp"
#include "prc/subalgebras.hpp"

namespace prc {

const char* to_string(SigmaSource s) {
  switch (s) {
    case SigmaSource::closed_form_irreducible: return "closed_form_irreducible";
    case SigmaSource::interior_maximum: return "interior_maximum";
    case SigmaSource::boundary_recursion: return "boundary_recursion";
  }
  return "unknown";
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::guaranteed: return "guaranteed";
    case VerdictStatus::inconclusive: return "inconclusive";
    case VerdictStatus::degenerate_constant_ricci: return "degenerate_constant_ricci";
    case VerdictStatus::boundary: return "boundary";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool tied(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Preference among candidates: larger sigma; within the tie band, the
// larger set, then the lexicographically smaller one.
bool preferred(const SigmaResult& a, const SigmaResult& b) {
  if (!tied(a.value, b.value)) return a.value > b.value;
  if (a.J.size() != b.J.size()) return a.J.size() > b.J.size();
  return a.J < b.J;
}

VerdictStatus classify(double margin, double rhs) {
  const double band = kStrictTolerance * std::max(1.0, std::abs(rhs));
  if (margin > band) return VerdictStatus::guaranteed;
  if (std::abs(margin) <= band) return VerdictStatus::boundary;
  return VerdictStatus::inconclusive;
}

double singleton_sigma(double d, double b, double self, double cross, double z) {
  return (0.5 * d * b - 0.25 * self - 0.5 * cross) / (d * z);
}

}  // namespace

SigmaResult sigma_irreducible(const HomogeneousSpaceSpec& spec, int i,
                              const TensorCoefficients& z) {
  if (z.size() != spec.s()) throw InputError("T: dimension mismatch with space");
  if (i < 0 || static_cast<std::size_t>(i) >= spec.s()) throw InputError("summand index out of range");
  const auto J = SubalgebraIndexSet::of({i}, spec.s());
  if (!is_bracket_closed(spec, J)) {
    throw InputError("summand " + std::to_string(i + 1) + " is not bracket-closed");
  }
  double cross = 0.0;
  for (const auto& t : spec.triples().ordered()) {
    if (t.i == i && t.j != i && t.k != i) cross += t.value;
  }
  const auto& C = spec.triples();
  SigmaResult r{J, singleton_sigma(spec.d(i), spec.b(i), C(i, i, i), cross, z[i]), true,
                std::vector<double>{spec.d(i) * z[i]}, SigmaSource::closed_form_irreducible};
  return r;
}

SigmaContext::SigmaContext(const HomogeneousSpaceSpec& spec, TensorCoefficients z,
                           SolverOptions options)
    : spec_(spec), z_(std::move(z)), options_(options) {
  if (z_.size() != spec.s()) throw InputError("T: dimension mismatch with space");
}

const SigmaResult& SigmaContext::sigma(const SubalgebraIndexSet& J) {
  if (auto it = memo_.find(J.mask()); it != memo_.end()) return it->second;
  if (J.universe() != spec_.s()) throw InputError("index set does not match space");
  if (!is_bracket_closed(spec_, J)) {
    throw InputError("index set " + J.to_string() + " is not bracket-closed");
  }
  if (J.size() == 1) {
    return memo_.emplace(J.mask(), sigma_irreducible(spec_, J.members()[0], z_)).first->second;
  }

  double recursive = -std::numeric_limits<double>::infinity();
  for (const auto& sub : maximal_within(spec_, J)) {
    recursive = std::max(recursive, sigma(sub).value);
  }
  const auto interior = maximize_hatS_on_slice(spec_, J, z_, options_);

  SigmaResult r{J, recursive, false, std::nullopt, SigmaSource::boundary_recursion};
  if (interior.converged) {
    const double slack = kAttainTolerance * std::max(std::abs(recursive), std::abs(interior.value));
    if (interior.value >= recursive - slack) {
      r.value = std::max(interior.value, recursive);
      r.attained = true;
      r.witness = interior.argmax;
      r.source = SigmaSource::interior_maximum;
    }
  } else if (interior.termination == Termination::escaped && std::isfinite(recursive)) {
    // iterates run off to the boundary; the supremum lives on a smaller subalgebra
    r.value = std::max(recursive, interior.value);
  } else {
    throw NumericalError("sigma on " + J.to_string() + ": interior search " +
                         to_string(interior.termination) + " (" + interior.diagnostics + ")");
  }
  return memo_.emplace(J.mask(), std::move(r)).first->second;
}

SigmaResult sigma(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                  const TensorCoefficients& z, const SolverOptions& options) {
  SigmaContext ctx(spec, z, options);
  return ctx.sigma(J);
}

SigmaResult find_T_apical(SigmaContext& ctx) {
  const auto& spec = ctx.spec();
  const auto lattice = intermediate_subalgebras(spec);
  if (lattice.maximal.empty()) {
    throw InputError("no proper intermediate subalgebra: the isotropy subalgebra is maximal");
  }
  const SigmaResult* best = nullptr;
  for (const auto& J : lattice.maximal) {
    const auto& r = ctx.sigma(J);
    if (best == nullptr || preferred(r, *best)) best = &r;
  }
  while (!best->attained) {
    const SigmaResult* next = nullptr;
    for (const auto& J : maximal_within(spec, best->J)) {
      const auto& r = ctx.sigma(J);
      if (next == nullptr || preferred(r, *next)) next = &r;
    }
    if (next == nullptr) {
      throw NumericalError("descent from " + best->J.to_string() + " found no attained subalgebra");
    }
    best = next;
  }
  return *best;
}

SigmaResult find_T_apical(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                          const SolverOptions& options) {
  SigmaContext ctx(spec, z, options);
  return find_T_apical(ctx);
}

ExistenceVerdict existence_check(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                                 const SolverOptions& options) {
  if (z.size() != spec.s()) throw InputError("T: dimension mismatch with space");
  ExistenceVerdict v;
  if (spec.triples().all_zero()) {
    // every diagonal metric then has Ric = sum b_i/2 pi*Q; nothing to decide
    v.status = VerdictStatus::degenerate_constant_ricci;
    v.lhs = v.rhs = v.margin = kNaN;
    return v;
  }
  SigmaContext ctx(spec, z, options);
  const auto apical = find_T_apical(ctx);

  const auto outside = apical.J.complement_members();
  v.lhs = apical.value * trace_Q_over(spec, z, outside);
  double rhs = 0.0;
  for (int i : outside) rhs += 0.5 * spec.d(i) * spec.b(i);
  double cubic = 0.0;
  for (const auto& t : spec.triples().ordered()) {
    if (!apical.J.contains(t.i) && !apical.J.contains(t.j) && !apical.J.contains(t.k)) {
      cubic += t.value;
    }
  }
  v.rhs = rhs - 0.25 * cubic;
  v.margin = v.rhs - v.lhs;
  v.status = classify(v.margin, v.rhs);
  v.apical = apical.J;
  v.sigma = apical;

  const auto lattice = intermediate_subalgebras(spec);
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& J : lattice.maximal) top = std::max(top, ctx.sigma(J).value);
  for (const auto& J : lattice.all_proper) {
    const auto& r = ctx.sigma(J);
    if (r.attained && (r.value >= top || tied(r.value, top))) v.apical_candidates.push_back(J);
  }
  return v;
}

HomogeneousSpaceSpec wallach_space(std::array<int, 3> d, double a) {
  for (int di : d) {
    if (di < 1) throw InputError("d: dimensions must be positive");
  }
  if (!std::isfinite(a) || a < 0.0) throw InputError("a: must be finite and non-negative");
  StructureConstantTable table(3);
  if (a > 0.0) table.insert(0, 1, 2, a);
  return HomogeneousSpaceSpec("wallach", {d[0], d[1], d[2]}, {1.0, 1.0, 1.0}, std::move(table));
}

ExistenceVerdict wallach_existence_check(std::array<int, 3> d, double a,
                                         const TensorCoefficients& z) {
  const auto spec = wallach_space(d, a);
  if (z.size() != 3) throw InputError("T: expected three coefficients");
  ExistenceVerdict v;
  if (a == 0.0) {
    v.status = VerdictStatus::degenerate_constant_ricci;
    v.lhs = v.rhs = v.margin = kNaN;
    return v;
  }
  std::array<double, 3> value{};
  int p = 0;
  for (int i = 0; i < 3; ++i) {
    value[i] = singleton_sigma(d[i], 1.0, 0.0, 2.0 * a, z[i]);
    if (value[i] > value[p] && !tied(value[i], value[p])) p = i;
  }
  double others = 0.0, rhs = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (i == p) continue;
    others += d[i] * z[i];
    rhs += 0.5 * d[i];
  }
  v.lhs = value[p] * others;
  v.rhs = rhs;
  v.margin = v.rhs - v.lhs;
  v.status = classify(v.margin, v.rhs);
  v.apical = SubalgebraIndexSet::of({p}, 3);
  v.sigma = SigmaResult{*v.apical, value[p], true, std::vector<double>{d[p] * z[p]},
                        SigmaSource::closed_form_irreducible};
  v.wallach_p = p + 1;
  for (int i = 0; i < 3; ++i) {
    if (value[i] >= value[p] || tied(value[i], value[p])) {
      v.apical_candidates.push_back(SubalgebraIndexSet::of({i}, 3));
    }
  }
  return v;
}

}  // namespace prc
