#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prc {

/// Malformed or inconsistent input (schema violations, bad flags, violated
/// preconditions). The message carries the offending field path when there
/// is one.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a trustworthy number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully symmetric non-negative structure constants [ijk].
///
/// Entries are stored once per sorted multiset i <= j <= k (0-based here,
/// 1-based in files). Lookup under any permutation returns the same value and
/// absent multisets read as zero. The expanded list of distinct ordered
/// triples is kept alongside so the curvature sums can run over the sparse
/// support instead of all s^3 index triples.
class StructureConstantTable {
 public:
  struct Entry {
    std::array<int, 3> idx;  // sorted, 0-based
    double value;
  };
  struct OrderedTriple {
    int i, j, k;
    double value;
  };

  StructureConstantTable() = default;
  explicit StructureConstantTable(std::size_t s);

  /// Adds [ijk] = value. Throws InputError on a repeated multiset, a negative
  /// or non-finite value, or an out-of-range index.
  void insert(int i, int j, int k, double value);

  double operator()(int i, int j, int k) const;

  std::size_t summands() const { return s_; }
  std::span<const Entry> entries() const { return entries_; }
  std::span<const OrderedTriple> ordered() const { return ordered_; }
  bool all_zero() const;

 private:
  std::size_t s_ = 0;
  std::vector<Entry> entries_;
  std::vector<OrderedTriple> ordered_;
  std::vector<double> dense_;
};

/// Combinatorial description of G/H: summand dimensions d_i, Killing
/// coefficients b_i (B = -b_i Q on m_i) and structure constants.
///
/// The toolkit assumes the isotropy summands are pairwise inequivalent, so
/// every invariant metric is diagonal and every intermediate subalgebra is a
/// sum of summands. There is deliberately no way to describe anything else.
class HomogeneousSpaceSpec {
 public:
  /// Validates and freezes. Errors name the field path ("d[2]", ...).
  HomogeneousSpaceSpec(std::string name, std::vector<int> d, std::vector<double> b,
                       StructureConstantTable triples);

  const std::string& name() const { return name_; }
  std::size_t s() const { return d_.size(); }
  std::span<const int> d() const { return d_; }
  std::span<const double> b() const { return b_; }
  int d(std::size_t i) const { return d_[i]; }
  double b(std::size_t i) const { return b_[i]; }
  const StructureConstantTable& triples() const { return triples_; }
  int total_dimension() const;

  /// Three summands, only [123] may be non-zero, b = (1,1,1).
  bool is_wallach_shape() const;

 private:
  std::string name_;
  std::vector<int> d_;
  std::vector<double> b_;
  StructureConstantTable triples_;
};

namespace detail {
std::vector<double> checked_positive(std::vector<double> v, const char* what);
}

/// Strictly positive diagonal coefficients on the isotropy summands.
template <class Tag>
class PositiveCoefficients {
 public:
  explicit PositiveCoefficients(std::vector<double> v)
      : v_(detail::checked_positive(std::move(v), Tag::name)) {}

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> values() const { return v_; }

 private:
  std::vector<double> v_;
};

struct MetricTag {
  static constexpr const char* name = "metric coefficient";
};
struct TensorTag {
  static constexpr const char* name = "tensor coefficient";
};

/// g = sum x_i pi*_{m_i} Q
using MetricCoefficients = PositiveCoefficients<MetricTag>;
/// T = sum z_i pi*_{m_i} Q
using TensorCoefficients = PositiveCoefficients<TensorTag>;

/// Non-empty subset J of {0..s-1}; stands for k = (sum_{i in J} m_i) + h.
///
/// Ordering is by size, then lexicographic on the sorted members, which is
/// the canonical listing order used in every report.
class SubalgebraIndexSet {
 public:
  static constexpr std::size_t kMaxSummands = 16;

  SubalgebraIndexSet(std::uint32_t mask, std::size_t s);
  static SubalgebraIndexSet full(std::size_t s);
  /// From 0-based members.
  static SubalgebraIndexSet of(std::initializer_list<int> members, std::size_t s);
  static SubalgebraIndexSet from_one_based(std::span<const int> members, std::size_t s);

  std::uint32_t mask() const { return mask_; }
  std::size_t universe() const { return s_; }
  std::size_t size() const;
  bool contains(std::size_t i) const { return (mask_ >> i) & 1U; }
  bool is_full() const { return mask_ == full_mask(s_); }
  bool is_subset_of(const SubalgebraIndexSet& other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  std::vector<int> members() const;
  std::vector<int> complement_members() const;
  std::vector<int> one_based() const;
  std::string to_string() const;  // "{2,4}", 1-based

  static std::uint32_t full_mask(std::size_t s) {
    return s >= 32 ? ~0U : ((1U << s) - 1U);
  }

  friend bool operator==(const SubalgebraIndexSet&, const SubalgebraIndexSet&) = default;
  friend std::strong_ordering operator<=>(const SubalgebraIndexSet& a,
                                          const SubalgebraIndexSet& b);

 private:
  std::uint32_t mask_;
  std::size_t s_;
};

/// Parses a space document (JSON, see README for the schema).
HomogeneousSpaceSpec load_space_spec(std::string_view document);
HomogeneousSpaceSpec load_space_file(const std::filesystem::path& path);
/// Inverse of load_space_spec; reloading gives bit-identical values.
std::string dump_space_spec(const HomogeneousSpaceSpec& spec, int indent = 2);

/// "p/q", a decimal string, or a JSON number already converted.
double parse_rational(std::string_view text);

HomogeneousSpaceSpec builtin_space(std::string_view name);
std::vector<std::string> builtin_names();

/// Sum of d_i z_i over the given set, i.e. tr_Q T restricted to those summands.
double trace_Q_restricted(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                          const SubalgebraIndexSet& set);
/// Same sum over an arbitrary (possibly empty) list of 0-based summands.
double trace_Q_over(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                    std::span<const int> members);

TensorCoefficients checked_tensor(const HomogeneousSpaceSpec& spec, std::vector<double> z);

}  // namespace prc
