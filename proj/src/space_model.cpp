#include "prc/space_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace prc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// StructureConstantTable

StructureConstantTable::StructureConstantTable(std::size_t s)
    : s_(s), dense_(s * s * s, 0.0) {}

void StructureConstantTable::insert(int i, int j, int k, double value) {
  const int s = static_cast<int>(s_);
  for (int idx : {i, j, k}) {
    if (idx < 0 || idx >= s) {
      throw InputError("structure constant index " + std::to_string(idx + 1) +
                       " out of range 1.." + std::to_string(s));
    }
  }
  if (!std::isfinite(value)) throw InputError("non-finite structure constant");
  if (value < 0.0) throw InputError("negative structure constant");

  std::array<int, 3> key{i, j, k};
  std::sort(key.begin(), key.end());
  for (const auto& e : entries_) {
    if (e.idx == key) throw InputError("duplicate multiset");
  }
  entries_.push_back({key, value});

  auto perm = key;
  do {
    dense_[(static_cast<std::size_t>(perm[0]) * s_ + perm[1]) * s_ + perm[2]] = value;
    if (value != 0.0) ordered_.push_back({perm[0], perm[1], perm[2], value});
  } while (std::next_permutation(perm.begin(), perm.end()));
}

double StructureConstantTable::operator()(int i, int j, int k) const {
  return dense_[(static_cast<std::size_t>(i) * s_ + j) * s_ + k];
}

bool StructureConstantTable::all_zero() const { return ordered_.empty(); }

// ---------------------------------------------------------------------------
// HomogeneousSpaceSpec

HomogeneousSpaceSpec::HomogeneousSpaceSpec(std::string name, std::vector<int> d,
                                           std::vector<double> b,
                                           StructureConstantTable triples)
    : name_(std::move(name)), d_(std::move(d)), b_(std::move(b)), triples_(std::move(triples)) {
  if (d_.empty()) throw InputError("d: at least one summand required");
  if (d_.size() > SubalgebraIndexSet::kMaxSummands) {
    throw InputError("d: at most " + std::to_string(SubalgebraIndexSet::kMaxSummands) +
                     " summands supported");
  }
  if (b_.size() != d_.size()) {
    throw InputError("b: expected " + std::to_string(d_.size()) + " entries, got " +
                     std::to_string(b_.size()));
  }
  if (triples_.summands() != d_.size()) {
    throw InputError("triples: table built for " + std::to_string(triples_.summands()) +
                     " summands, spec has " + std::to_string(d_.size()));
  }
  for (std::size_t i = 0; i < d_.size(); ++i) {
    if (d_[i] < 1) throw InputError("d[" + std::to_string(i) + "]: dimension must be >= 1");
    if (!std::isfinite(b_[i]) || b_[i] < 0.0) {
      throw InputError("b[" + std::to_string(i) + "]: Killing coefficient must be >= 0");
    }
  }
  if (total_dimension() < 3) throw InputError("d: total dimension must be at least 3");
}

int HomogeneousSpaceSpec::total_dimension() const {
  int total = 0;
  for (int di : d_) total += di;
  return total;
}

bool HomogeneousSpaceSpec::is_wallach_shape() const {
  if (s() != 3) return false;
  for (double bi : b_) {
    if (bi != 1.0) return false;
  }
  for (const auto& e : triples_.entries()) {
    if (e.value != 0.0 && e.idx != std::array<int, 3>{0, 1, 2}) return false;
  }
  return true;
}

namespace detail {
std::vector<double> checked_positive(std::vector<double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << " [" << i + 1 << "] must be positive and finite, got " << v[i];
      throw InputError(msg.str());
    }
  }
  return v;
}
}  // namespace detail

TensorCoefficients checked_tensor(const HomogeneousSpaceSpec& spec, std::vector<double> z) {
  if (z.size() != spec.s()) {
    throw InputError("T: expected " + std::to_string(spec.s()) + " coefficients, got " +
                     std::to_string(z.size()));
  }
  return TensorCoefficients(std::move(z));
}

// ---------------------------------------------------------------------------
// SubalgebraIndexSet

SubalgebraIndexSet::SubalgebraIndexSet(std::uint32_t mask, std::size_t s) : mask_(mask), s_(s) {
  if (s == 0 || s > kMaxSummands) throw InputError("index set universe out of range");
  if (mask == 0) throw InputError("index set must be non-empty");
  if ((mask & ~full_mask(s)) != 0) throw InputError("index set member out of range");
}

SubalgebraIndexSet SubalgebraIndexSet::full(std::size_t s) {
  return SubalgebraIndexSet(full_mask(s), s);
}

SubalgebraIndexSet SubalgebraIndexSet::of(std::initializer_list<int> members, std::size_t s) {
  std::uint32_t mask = 0;
  for (int m : members) {
    if (m < 0 || static_cast<std::size_t>(m) >= s) throw InputError("index set member out of range");
    mask |= 1U << m;
  }
  return SubalgebraIndexSet(mask, s);
}

SubalgebraIndexSet SubalgebraIndexSet::from_one_based(std::span<const int> members,
                                                      std::size_t s) {
  std::uint32_t mask = 0;
  for (int m : members) {
    if (m < 1 || static_cast<std::size_t>(m) > s) {
      throw InputError("index " + std::to_string(m) + " out of range 1.." + std::to_string(s));
    }
    mask |= 1U << (m - 1);
  }
  return SubalgebraIndexSet(mask, s);
}

std::size_t SubalgebraIndexSet::size() const { return std::popcount(mask_); }

std::vector<int> SubalgebraIndexSet::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < s_; ++i) {
    if (contains(i)) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> SubalgebraIndexSet::complement_members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < s_; ++i) {
    if (!contains(i)) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> SubalgebraIndexSet::one_based() const {
  auto out = members();
  for (auto& m : out) ++m;
  return out;
}

std::string SubalgebraIndexSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int m : one_based()) {
    if (!first) out += ",";
    out += std::to_string(m);
    first = false;
  }
  return out + "}";
}

std::strong_ordering operator<=>(const SubalgebraIndexSet& a, const SubalgebraIndexSet& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  const auto ma = a.members();
  const auto mb = b.members();
  return std::lexicographical_compare_three_way(ma.begin(), ma.end(), mb.begin(), mb.end());
}

// ---------------------------------------------------------------------------
// Loading and dumping

double parse_rational(std::string_view text) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  auto parse_number = [&](std::string_view t) {
    t = trim(t);
    if (t.empty()) throw InputError("empty number");
    std::string buf(t);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size()) {
      throw InputError("malformed number \"" + buf + "\"");
    }
    return v;
  };

  text = trim(text);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double p = parse_number(text.substr(0, slash));
    const double q = parse_number(text.substr(slash + 1));
    if (q == 0.0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    return p / q;
  }
  return parse_number(text);
}

namespace {

double number_or_rational(const json& node, const std::string& path) {
  try {
    if (node.is_number()) return node.get<double>();
    if (node.is_string()) return parse_rational(node.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  throw InputError(path + ": expected a number or a rational string");
}

int require_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw InputError(path + ": expected an integer");
  return node.get<int>();
}

HomogeneousSpaceSpec from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("document: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "name" && key != "d" && key != "b" && key != "triples") {
      throw InputError(key + ": unknown field");
    }
  }
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw InputError("name: required string");
  }
  if (!doc.contains("d") || !doc["d"].is_array()) throw InputError("d: required array");
  if (!doc.contains("triples") || !doc["triples"].is_array()) {
    throw InputError("triples: required array");
  }

  std::vector<int> d;
  for (std::size_t i = 0; i < doc["d"].size(); ++i) {
    d.push_back(require_int(doc["d"][i], "d[" + std::to_string(i) + "]"));
  }
  const std::size_t s = d.size();
  if (s == 0) throw InputError("d: at least one summand required");
  if (s > SubalgebraIndexSet::kMaxSummands) {
    throw InputError("d: at most " + std::to_string(SubalgebraIndexSet::kMaxSummands) +
                     " summands supported");
  }

  std::vector<double> b(s, 1.0);
  if (doc.contains("b")) {
    const auto& jb = doc["b"];
    if (!jb.is_array()) throw InputError("b: expected an array");
    if (jb.size() != s) {
      throw InputError("b: expected " + std::to_string(s) + " entries, got " +
                       std::to_string(jb.size()));
    }
    for (std::size_t i = 0; i < s; ++i) {
      b[i] = number_or_rational(jb[i], "b[" + std::to_string(i) + "]");
    }
  }

  StructureConstantTable table(s);
  const auto& jt = doc["triples"];
  for (std::size_t n = 0; n < jt.size(); ++n) {
    const std::string path = "triples[" + std::to_string(n) + "]";
    const auto& t = jt[n];
    if (!t.is_object()) throw InputError(path + ": expected an object");
    for (const char* key : {"i", "j", "k", "value"}) {
      if (!t.contains(key)) throw InputError(path + "." + key + ": required");
    }
    const int i = require_int(t["i"], path + ".i");
    const int j = require_int(t["j"], path + ".j");
    const int k = require_int(t["k"], path + ".k");
    if (!(i <= j && j <= k)) throw InputError(path + ": indices must satisfy i <= j <= k");
    const double value = number_or_rational(t["value"], path + ".value");
    try {
      table.insert(i - 1, j - 1, k - 1, value);
    } catch (const InputError& e) {
      throw InputError(path + ": " + e.what());
    }
  }
  return HomogeneousSpaceSpec(doc["name"].get<std::string>(), std::move(d), std::move(b),
                              std::move(table));
}

}  // namespace

HomogeneousSpaceSpec load_space_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("document: ") + e.what());
  }
  return from_json(doc);
}

HomogeneousSpaceSpec load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open space file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_space_spec(buf.str());
}

std::string dump_space_spec(const HomogeneousSpaceSpec& spec, int indent) {
  json doc;
  doc["name"] = spec.name();
  doc["d"] = std::vector<int>(spec.d().begin(), spec.d().end());
  doc["b"] = std::vector<double>(spec.b().begin(), spec.b().end());
  json triples = json::array();
  for (const auto& e : spec.triples().entries()) {
    triples.push_back(
        {{"i", e.idx[0] + 1}, {"j", e.idx[1] + 1}, {"k", e.idx[2] + 1}, {"value", e.value}});
  }
  doc["triples"] = std::move(triples);
  return doc.dump(indent);
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

struct CatalogEntry {
  const char* name;
  std::vector<int> d;
  std::vector<std::pair<std::array<int, 3>, const char*>> triples;  // 1-based
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      // Generalised Wallach space E6/Sp(3)xSp(1)
      {"E6_Sp3xSp1", {14, 28, 12}, {{{1, 2, 3}, "7/2"}}},
      // G2/U(2), U(2) on the long root
      {"G2_U2_long", {4, 2, 4}, {{{1, 2, 3}, "1/2"}, {{1, 1, 2}, "2/3"}}},
      {"F4_SU3xSU2xU1",
       {12, 18, 4, 6},
       {{{2, 2, 4}, "2"}, {{1, 1, 2}, "2"}, {{1, 2, 3}, "1"}, {{1, 3, 4}, "2/3"}}},
  };
  return entries;
}

}  // namespace

HomogeneousSpaceSpec builtin_space(std::string_view name) {
  for (const auto& entry : catalog()) {
    if (name != entry.name) continue;
    StructureConstantTable table(entry.d.size());
    for (const auto& [idx, value] : entry.triples) {
      table.insert(idx[0] - 1, idx[1] - 1, idx[2] - 1, parse_rational(value));
    }
    return HomogeneousSpaceSpec(entry.name, entry.d, std::vector<double>(entry.d.size(), 1.0),
                                std::move(table));
  }
  throw InputError("unknown built-in space \"" + std::string(name) + "\"");
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& entry : catalog()) names.emplace_back(entry.name);
  return names;
}

// ---------------------------------------------------------------------------

double trace_Q_over(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                    std::span<const int> members) {
  if (z.size() != spec.s()) throw InputError("T: dimension mismatch with space");
  double sum = 0.0;
  for (int i : members) sum += spec.d(i) * z[i];
  return sum;
}

double trace_Q_restricted(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                          const SubalgebraIndexSet& set) {
  if (set.universe() != spec.s()) throw InputError("index set does not match space");
  const auto members = set.members();
  return trace_Q_over(spec, z, members);
}

}  // namespace prc
