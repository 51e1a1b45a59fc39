#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "prc/subalgebras.hpp"

using namespace prc;

namespace {

using Sets = std::vector<std::vector<int>>;

Sets as_one_based(const std::vector<SubalgebraIndexSet>& v) {
  Sets out;
  for (const auto& J : v) out.push_back(J.one_based());
  return out;
}

// Closure straight from the definition over all s^3 index triples.
bool closed_by_scan(const HomogeneousSpaceSpec& spec, std::uint32_t mask) {
  const int s = static_cast<int>(spec.s());
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k)
      for (int l = 0; l < s; ++l) {
        const bool jk = ((mask >> j) & 1U) && ((mask >> k) & 1U);
        if (jk && !((mask >> l) & 1U) && spec.triples()(j, k, l) != 0.0) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("closure") {
  const auto f4 = builtin_space("F4_SU3xSU2xU1");
  CHECK(is_bracket_closed(f4, SubalgebraIndexSet::of({1, 3}, 4)));
  CHECK_FALSE(is_bracket_closed(f4, SubalgebraIndexSet::of({1}, 4)));
  CHECK(is_bracket_closed(f4, SubalgebraIndexSet::full(4)));
  CHECK_THROWS_AS(is_bracket_closed(f4, SubalgebraIndexSet::full(3)), InputError);
}

TEST_CASE("catalog lattices") {
  const auto e6 = intermediate_subalgebras(builtin_space("E6_Sp3xSp1"));
  CHECK(as_one_based(e6.all_proper) == Sets{{1}, {2}, {3}});
  CHECK(as_one_based(e6.maximal) == Sets{{1}, {2}, {3}});

  const auto g2 = intermediate_subalgebras(builtin_space("G2_U2_long"));
  CHECK(as_one_based(g2.all_proper) == Sets{{2}, {3}});
  CHECK(as_one_based(g2.maximal) == Sets{{2}, {3}});

  const auto f4 = intermediate_subalgebras(builtin_space("F4_SU3xSU2xU1"));
  CHECK(as_one_based(f4.all_proper) == Sets{{3}, {4}, {2, 4}});
  CHECK(as_one_based(f4.maximal) == Sets{{3}, {2, 4}});
}

TEST_CASE("maximal_within") {
  const auto f4 = builtin_space("F4_SU3xSU2xU1");
  CHECK(as_one_based(maximal_within(f4, SubalgebraIndexSet::of({1, 3}, 4))) == Sets{{4}});
  CHECK(as_one_based(maximal_within(f4, SubalgebraIndexSet::full(4))) == Sets{{3}, {2, 4}});
  CHECK_THROWS_AS(maximal_within(f4, SubalgebraIndexSet::of({1}, 4)), InputError);
  const auto g2 = builtin_space("G2_U2_long");
  CHECK(maximal_within(g2, SubalgebraIndexSet::of({1}, 3)).empty());
  const auto e6 = builtin_space("E6_Sp3xSp1");
  CHECK(maximal_within(e6, SubalgebraIndexSet::of({0}, 3)).empty());
}

TEST_CASE("Wallach-shape spaces have three maximal singletons") {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 50; ++n) {
    StructureConstantTable t(3);
    t.insert(0, 1, 2, 0.1 + static_cast<double>(rng() % 100) / 10.0);
    const HomogeneousSpaceSpec spec("w", {1 + int(rng() % 9), 1 + int(rng() % 9), 1 + int(rng() % 9)},
                                    {1, 1, 1}, t);
    const auto lat = intermediate_subalgebras(spec);
    CHECK(as_one_based(lat.all_proper) == Sets{{1}, {2}, {3}});
    CHECK(as_one_based(lat.maximal) == Sets{{1}, {2}, {3}});
  }
}

TEST_CASE("enumeration is sound and complete against a dense scan") {
  std::mt19937_64 rng(29);
  std::vector<HomogeneousSpaceSpec> specs;
  for (const auto& name : builtin_names()) specs.push_back(builtin_space(name));
  for (int n = 0; n < 200; ++n) specs.push_back(oracle::random_spec(rng, 5, 0.15));
  for (const auto& spec : specs) {
    const auto lat = intermediate_subalgebras(spec);
    const std::uint32_t full = SubalgebraIndexSet::full_mask(spec.s());
    std::vector<std::uint32_t> expected;
    for (std::uint32_t m = 1; m < full; ++m) {
      if (closed_by_scan(spec, m)) expected.push_back(m);
    }
    std::vector<std::uint32_t> got;
    for (const auto& J : lat.all_proper) got.push_back(J.mask());
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
    for (const auto& M : lat.maximal) {
      for (const auto& J : lat.all_proper) {
        CHECK_FALSE((M != J && M.is_subset_of(J)));
      }
    }
    for (const auto& J : lat.all_proper) {
      for (const auto& sub : maximal_within(spec, J)) {
        CHECK(sub.is_subset_of(J));
        CHECK(sub != J);
        CHECK(closed_by_scan(spec, sub.mask()));
      }
    }
  }
}

TEST_CASE("singleton closure rule") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 200; ++n) {
    const auto spec = oracle::random_spec(rng);
    const int s = static_cast<int>(spec.s());
    for (int i = 0; i < s; ++i) {
      bool rule = true;
      for (int l = 0; l < s; ++l) {
        if (l != i && spec.triples()(i, i, l) != 0.0) rule = false;
      }
      if (s == 1) continue;
      CHECK(is_bracket_closed(spec, SubalgebraIndexSet::of({i}, spec.s())) == rule);
    }
  }
}
