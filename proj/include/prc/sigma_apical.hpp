#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "prc/solver.hpp"
#include "prc/space_model.hpp"

namespace prc {

inline constexpr double kStrictTolerance = 1e-10;  // relative to max(1, |rhs|)
inline constexpr double kAttainTolerance = 1e-9;   // interior vs recursive sigma
inline constexpr double kTieTolerance = 1e-9;      // equal-sigma apical candidates

enum class SigmaSource { closed_form_irreducible, interior_maximum, boundary_recursion };
const char* to_string(SigmaSource s);

/// sigma(k, T) = sup of S^ over the slice of k, with attainment info.
struct SigmaResult {
  SubalgebraIndexSet J;
  double value = 0.0;
  bool attained = false;
  /// Slice point with S^ = value; one coefficient per member of J.
  std::optional<std::vector<double>> witness;
  SigmaSource source = SigmaSource::closed_form_irreducible;
};

enum class VerdictStatus { guaranteed, inconclusive, degenerate_constant_ricci, boundary };
const char* to_string(VerdictStatus s);

struct ExistenceVerdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  std::optional<SubalgebraIndexSet> apical;
  std::optional<SigmaResult> sigma;
  double lhs = 0.0;     // sigma * sum_{i not in J} d_i z_i
  double rhs = 0.0;     // 1/2 sum d_i b_i - 1/4 sum [ijk] over the complement
  double margin = 0.0;  // rhs - lhs; NaN when degenerate
  /// Every attained proper subalgebra whose sigma reaches the largest sigma
  /// of the maximal ones, in canonical order.
  std::vector<SubalgebraIndexSet> apical_candidates;
  /// 1-based p of the three-summand fast path, when it was used.
  std::optional<int> wallach_p;
};

/// Closed form for a bracket-closed singleton {i}; throws InputError otherwise.
SigmaResult sigma_irreducible(const HomogeneousSpaceSpec& spec, int i, const TensorCoefficients& z);

/// Memoised sigma evaluation for one (spec, T). Not thread-safe; use one
/// context per thread.
class SigmaContext {
 public:
  SigmaContext(const HomogeneousSpaceSpec& spec, TensorCoefficients z, SolverOptions options = {});

  const SigmaResult& sigma(const SubalgebraIndexSet& J);
  const HomogeneousSpaceSpec& spec() const { return spec_; }
  const TensorCoefficients& tensor() const { return z_; }

 private:
  const HomogeneousSpaceSpec& spec_;
  TensorCoefficients z_;
  SolverOptions options_;
  std::map<std::uint32_t, SigmaResult> memo_;
};

SigmaResult sigma(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                  const TensorCoefficients& z, const SolverOptions& options = {});

/// A T-apical subalgebra by descent from the best maximal subalgebra. Among
/// sigma-equal choices the larger set wins, then the lexicographically
/// smaller one. Throws InputError when there is no proper subalgebra.
SigmaResult find_T_apical(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                          const SolverOptions& options = {});
SigmaResult find_T_apical(SigmaContext& ctx);

/// Sufficient condition for a metric with Ric = cT, c > 0.
ExistenceVerdict existence_check(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                                 const SolverOptions& options = {});

/// Three summands, only [123] = a non-zero, b = 1.
ExistenceVerdict wallach_existence_check(std::array<int, 3> d, double a,
                                         const TensorCoefficients& z);

/// Assembles the three-summand space used by wallach_existence_check.
HomogeneousSpaceSpec wallach_space(std::array<int, 3> d, double a);

}  // namespace prc
