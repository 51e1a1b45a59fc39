#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "prc/curvature.hpp"
#include "prc/sigma_apical.hpp"
#include "prc/subalgebras.hpp"

using namespace prc;
using doctest::Approx;

namespace {

const auto kG2 = builtin_space("G2_U2_long");
const auto kF4 = builtin_space("F4_SU3xSU2xU1");
const auto kE6 = builtin_space("E6_Sp3xSp1");

double rel(double a, double b) { return oracle::rel_err(a, b); }

}  // namespace

TEST_CASE("closed forms") {
  for (double z2 : {0.1, 1.0, 2.5}) {
    const auto r = sigma_irreducible(kG2, 1, TensorCoefficients({1, z2, 1}));
    CHECK(rel(r.value, 1.0 / (12.0 * z2)) < 1e-14);
    CHECK(r.attained);
    CHECK(r.source == SigmaSource::closed_form_irreducible);
    CHECK(*r.witness == std::vector<double>{2.0 * z2});
  }
  for (double z3 : {0.3, 1.0, 4.0}) {
    CHECK(rel(sigma_irreducible(kG2, 2, TensorCoefficients({1, 1, z3})).value, 3.0 / (8.0 * z3)) < 1e-14);
    CHECK(rel(sigma_irreducible(kF4, 2, TensorCoefficients({1, 1, z3, 1})).value, 1.0 / (12.0 * z3)) <
          1e-14);
    CHECK(rel(sigma_irreducible(kF4, 3, TensorCoefficients({1, 1, 1, z3})).value, 2.0 / (9.0 * z3)) <
          1e-14);
  }
  CHECK_THROWS_AS(sigma_irreducible(kF4, 1, TensorCoefficients({1, 1, 1, 1})), InputError);
  CHECK_THROWS_AS(sigma_irreducible(kG2, 0, TensorCoefficients({1, 1, 1})), InputError);
}

TEST_CASE("witness of a singleton is on the slice and realises sigma") {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 200; ++n) {
    const auto spec = oracle::random_spec(rng);
    const TensorCoefficients z(oracle::random_positive(rng, spec.s()));
    for (std::size_t i = 0; i < spec.s(); ++i) {
      const auto J = SubalgebraIndexSet::of({static_cast<int>(i)}, spec.s());
      if (!is_bracket_closed(spec, J)) continue;
      const auto r = sigma_irreducible(spec, static_cast<int>(i), z);
      CHECK(std::abs(metric_trace_of_T(spec, J, *r.witness, z) - 1.0) < 1e-10);
      CHECK(rel(hat_scalar_curvature(spec, J, *r.witness), r.value) < 1e-9);
    }
  }
}

TEST_CASE("F4 {2,4}: attained below z2/z4 = 7/4, not attained above") {
  const auto J = SubalgebraIndexSet::of({1, 3}, 4);
  const auto at = sigma(kF4, J, TensorCoefficients({1, 1, 1, 1}));
  CHECK(at.attained);
  CHECK(at.source == SigmaSource::interior_maximum);
  CHECK(rel(at.value, 7.0 / 18.0 - (std::sqrt(19.0) - 1.0) / 54.0) < 1e-12);
  CHECK(rel((*at.witness)[1], 6.0 * std::sqrt(19.0)) < 1e-8);

  const auto off = sigma(kF4, J, TensorCoefficients({1, 2, 1, 1}));
  CHECK_FALSE(off.attained);
  CHECK(off.source == SigmaSource::boundary_recursion);
  CHECK_FALSE(off.witness.has_value());
  CHECK(rel(off.value, 2.0 / 9.0) < 1e-14);
}

TEST_CASE("singletons delegate exactly") {
  const TensorCoefficients z({1.7, 0.4, 2.2, 0.9});
  const auto J = SubalgebraIndexSet::of({3}, 4);
  CHECK(sigma(kF4, J, z).value == sigma_irreducible(kF4, 3, z).value);
  CHECK_THROWS_AS(sigma(kF4, SubalgebraIndexSet::of({1}, 4), z), InputError);
}

TEST_CASE("apical subalgebras on the catalog") {
  const auto a = find_T_apical(kG2, TensorCoefficients({1, 0.1, 1}));
  CHECK(a.J.one_based() == std::vector<int>{2});
  CHECK(rel(a.value, 1.0 / 1.2) < 1e-14);

  const auto b = find_T_apical(kG2, TensorCoefficients({1, 1, 1}));
  CHECK(b.J.one_based() == std::vector<int>{3});
  CHECK(rel(b.value, 0.375) < 1e-14);

  // sigma({2,4}) = 2/9 unattained, descend to {4}
  const auto c = find_T_apical(kF4, TensorCoefficients({1, 2, 1, 1}));
  CHECK(c.J.one_based() == std::vector<int>{4});
  CHECK(rel(c.value, 2.0 / 9.0) < 1e-14);
  CHECK(c.attained);

  const auto d = find_T_apical(kF4, TensorCoefficients({1, 1, 1, 1}));
  CHECK(d.J.one_based() == std::vector<int>{2, 4});

  const HomogeneousSpaceSpec no_sub("irreducible", {5}, {1}, StructureConstantTable(1));
  CHECK_THROWS_AS(find_T_apical(no_sub, TensorCoefficients({1})), InputError);
}

TEST_CASE("equal sigma on G2 at z2 = 2 z3 / 9 picks {2}") {
  const auto a = find_T_apical(kG2, TensorCoefficients({1, 2.0 / 9.0, 1}));
  CHECK(a.J.one_based() == std::vector<int>{2});
  const auto v = existence_check(kG2, TensorCoefficients({1, 2.0 / 9.0, 1}));
  REQUIRE(v.apical_candidates.size() == 2);
  CHECK(v.apical_candidates[0].one_based() == std::vector<int>{2});
  CHECK(v.apical_candidates[1].one_based() == std::vector<int>{3});
}

TEST_CASE("existence verdicts") {
  const auto g = existence_check(kG2, TensorCoefficients({1, 1, 1}));
  CHECK(g.status == VerdictStatus::guaranteed);
  CHECK(g.apical->one_based() == std::vector<int>{3});
  // 6 z1 + 3 z2 < 10 z3, scaled by 1/4
  CHECK(g.lhs == Approx(9.0 / 4.0).epsilon(1e-15));
  CHECK(g.rhs == Approx(10.0 / 4.0).epsilon(1e-15));
  CHECK(g.margin == Approx(0.25).epsilon(1e-14));

  CHECK(existence_check(kG2, TensorCoefficients({2, 1, 1})).status == VerdictStatus::inconclusive);

  const double d = 0.01;
  CHECK(existence_check(kG2, TensorCoefficients({5.0 / 3.0 - d, 2.0 / 9.0, 1})).status ==
        VerdictStatus::guaranteed);
  CHECK(existence_check(kG2, TensorCoefficients({5.0 / 3.0 + d, 2.0 / 9.0, 1})).status ==
        VerdictStatus::inconclusive);

  // exact equality 6 z1 + 3 z2 = 10 z3 with representable values
  const auto edge = existence_check(kG2, TensorCoefficients({1, 4.0 / 3.0, 1}));
  CHECK(edge.status == VerdictStatus::boundary);

  const auto e = existence_check(kE6, TensorCoefficients({1, 1, 1}));
  CHECK(e.status == VerdictStatus::guaranteed);
  CHECK(e.apical->one_based() == std::vector<int>{2});
  CHECK(4.0 * e.lhs == Approx(39.0).epsilon(1e-15));
  CHECK(4.0 * e.rhs == Approx(52.0).epsilon(1e-15));
}

TEST_CASE("F4 verdict along z2 = z3 = z4 = 1") {
  const double upper = (637.0 + 36.0 * std::sqrt(19.0)) / 465.0;
  for (double z1 : {0.05, 0.15, 25.0 / 141.0, 1.0, upper - 1e-6}) {
    CHECK(existence_check(kF4, TensorCoefficients({z1, 1, 1, 1})).status == VerdictStatus::guaranteed);
  }
  CHECK(existence_check(kF4, TensorCoefficients({upper + 1e-6, 1, 1, 1})).status ==
        VerdictStatus::inconclusive);
  // margin = 8 - psi (12 z1 + 4), z1 enters only through the complement
  const double psi = 7.0 / 18.0 - (std::sqrt(19.0) - 1.0) / 54.0;
  const auto v = existence_check(kF4, TensorCoefficients({0.5, 1, 1, 1}));
  CHECK(v.margin == Approx(8.0 - psi * 10.0).epsilon(1e-12));
}

TEST_CASE("Wallach fast path") {
  const auto v = wallach_existence_check({14, 28, 12}, 3.5, TensorCoefficients({1, 1, 1}));
  CHECK(v.status == VerdictStatus::guaranteed);
  CHECK(*v.wallach_p == 2);
  CHECK(4.0 * v.lhs == Approx(39.0).epsilon(1e-15));
  CHECK(4.0 * v.rhs == Approx(52.0).epsilon(1e-15));

  const auto half = wallach_existence_check({14, 28, 12}, 3.5, TensorCoefficients({1, 0.5, 1}));
  const auto generic = existence_check(kE6, TensorCoefficients({1, 0.5, 1}));
  CHECK(half.status == generic.status);
  CHECK(half.apical == generic.apical);
  CHECK(half.margin == Approx(generic.margin).epsilon(1e-12));

  const auto flat = wallach_existence_check({3, 4, 5}, 0.0, TensorCoefficients({1, 1, 1}));
  CHECK(flat.status == VerdictStatus::degenerate_constant_ricci);
  CHECK(std::isnan(flat.margin));
  const auto flat_generic = existence_check(wallach_space({3, 4, 5}, 0.0), TensorCoefficients({1, 1, 1}));
  CHECK(flat_generic.status == VerdictStatus::degenerate_constant_ricci);

  // ties go to the smallest p
  const auto tie = wallach_existence_check({6, 6, 6}, 1.0, TensorCoefficients({1, 1, 1}));
  CHECK(*tie.wallach_p == 1);
  CHECK(tie.apical_candidates.size() == 3);

  CHECK_THROWS_AS(wallach_existence_check({0, 1, 2}, 1.0, TensorCoefficients({1, 1, 1})), InputError);
  CHECK_THROWS_AS(wallach_existence_check({1, 1, 2}, -1.0, TensorCoefficients({1, 1, 1})), InputError);
}

TEST_CASE("properties on the catalog") {
  std::mt19937_64 rng(43);
  for (const auto& name : builtin_names()) {
    const auto spec = builtin_space(name);
    const auto lattice = intermediate_subalgebras(spec);
    for (int n = 0; n < 20; ++n) {
      const TensorCoefficients z(oracle::random_positive(rng, spec.s(), 0.2, 5.0));
      SigmaContext ctx(spec, z);
      for (const auto& J : lattice.all_proper) {
        const auto& r = ctx.sigma(J);
        CHECK(r.value >= 0.0);
        CHECK(std::isfinite(r.value));
        if (r.attained) {
          CHECK(std::abs(metric_trace_of_T(spec, J, *r.witness, z) - 1.0) < 1e-10);
          CHECK(rel(hat_scalar_curvature(spec, J, *r.witness), r.value) < 1e-9);
        }
        for (const auto& K : lattice.all_proper) {
          if (K.is_subset_of(J)) CHECK(ctx.sigma(K).value <= r.value + 1e-9);
        }
      }
      const auto apical = find_T_apical(ctx);
      CHECK(apical.attained);
      for (const auto& M : lattice.maximal) CHECK(apical.value >= ctx.sigma(M).value - 1e-9);

      // scaling covariance
      const double t = 0.25 + 4.0 * std::uniform_real_distribution<double>()(rng);
      std::vector<double> zt(z.values().begin(), z.values().end());
      for (auto& v : zt) v *= t;
      const auto v1 = existence_check(spec, z);
      const auto v2 = existence_check(spec, TensorCoefficients(zt));
      CHECK(rel(v2.sigma->value, v1.sigma->value / t) < 1e-8);
      if (v1.status != VerdictStatus::boundary && v2.status != VerdictStatus::boundary) {
        CHECK(v1.status == v2.status);
        CHECK(std::signbit(v1.margin) == std::signbit(v2.margin));
      }
    }
  }
}

TEST_CASE("F4 interior maximiser matches v0 for random z2/z4 < 7/4") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto J = SubalgebraIndexSet::of({1, 3}, 4);
  for (int n = 0; n < 100; ++n) {
    const double z4 = 0.5 + 1.5 * u(rng);
    const double z2 = z4 * (0.05 + 1.65 * u(rng));
    const auto r = sigma(kF4, J, TensorCoefficients({1, z2, 1, z4}));
    REQUIRE(r.attained);
    const double v0 = 6.0 * std::sqrt(z4 * z4 + 42.0 * z2 * z4 - 24.0 * z2 * z2);
    CHECK(rel((*r.witness)[1], v0) < 1e-8);
  }
}

TEST_CASE("properties on random spaces") {
  std::mt19937_64 rng(53);
  int apicals = 0;
  for (int n = 0; n < 200; ++n) {
    const auto spec = oracle::random_spec(rng);
    const auto lattice = intermediate_subalgebras(spec);
    const TensorCoefficients z(oracle::random_positive(rng, spec.s()));
    SigmaContext ctx(spec, z);
    for (const auto& J : lattice.all_proper) {
      const auto& r = ctx.sigma(J);
      CHECK(r.value >= 0.0);
      CHECK(std::isfinite(r.value));
    }
    if (lattice.maximal.empty()) {
      CHECK_THROWS_AS(find_T_apical(ctx), InputError);
      continue;
    }
    const auto apical = find_T_apical(ctx);
    ++apicals;
    CHECK(apical.attained);
    CHECK_FALSE(apical.J.is_full());
    for (const auto& M : lattice.maximal) CHECK(apical.value >= ctx.sigma(M).value - 1e-9);
    const auto v = existence_check(spec, z);
    if (v.status == VerdictStatus::degenerate_constant_ricci) {
      // no brackets: Ricci does not depend on the metric
      CHECK_FALSE(v.apical.has_value());
      CHECK(std::isnan(v.rhs));
      continue;
    }
    REQUIRE(v.apical.has_value());
    CHECK(v.rhs >= 0.0);
    CHECK(std::find(v.apical_candidates.begin(), v.apical_candidates.end(), *v.apical) !=
          v.apical_candidates.end());
  }
  CHECK(apicals > 50);
}
