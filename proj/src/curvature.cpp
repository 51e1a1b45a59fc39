#include "prc/curvature.hpp"

#include <cmath>

namespace prc {

namespace {

// Coefficients scattered onto the full index range; entries outside J unused.
std::vector<double> scatter(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                            std::span<const double> y) {
  if (J.universe() != spec.s()) throw InputError("index set does not match space");
  if (y.size() != J.size()) {
    throw InputError("expected " + std::to_string(J.size()) + " slice coefficients, got " +
                     std::to_string(y.size()));
  }
  std::vector<double> full(spec.s(), 0.0);
  std::size_t n = 0;
  for (int i : J.members()) {
    if (!(y[n] > 0.0) || !std::isfinite(y[n])) {
      throw InputError("slice coefficients must be strictly positive");
    }
    full[i] = y[n++];
  }
  return full;
}

void check_size(const HomogeneousSpaceSpec& spec, std::size_t n) {
  if (n != spec.s()) {
    throw InputError("expected " + std::to_string(spec.s()) + " metric coefficients, got " +
                     std::to_string(n));
  }
}

// Shared kernel for S and S^; `y` is indexed by summand.
double slice_functional(const HomogeneousSpaceSpec& spec, std::uint32_t mask,
                        std::span<const double> y) {
  auto in = [mask](int i) { return (mask >> i) & 1U; };
  double killing = 0.0;
  for (std::size_t i = 0; i < spec.s(); ++i) {
    if (in(static_cast<int>(i))) killing += spec.d(i) * spec.b(i) / y[i];
  }
  double mixed = 0.0;
  double internal = 0.0;
  for (const auto& t : spec.triples().ordered()) {
    if (in(t.i) && in(t.j) && in(t.k)) {
      internal += t.value * y[t.k] / (y[t.i] * y[t.j]);
    } else if (in(t.i) && !in(t.j) && !in(t.k)) {
      mixed += t.value / y[t.i];
    }
  }
  return 0.5 * killing - 0.5 * mixed - 0.25 * internal;
}

std::vector<double> slice_gradient(const HomogeneousSpaceSpec& spec, std::uint32_t mask,
                                   std::span<const double> y) {
  auto in = [mask](int i) { return (mask >> i) & 1U; };
  std::vector<double> g(spec.s(), 0.0);
  for (std::size_t m = 0; m < spec.s(); ++m) {
    if (in(static_cast<int>(m))) g[m] = -0.5 * spec.d(m) * spec.b(m) / (y[m] * y[m]);
  }
  for (const auto& t : spec.triples().ordered()) {
    if (in(t.i) && in(t.j) && in(t.k)) {
      // d/dy of -1/4 [ijk] y_k / (y_i y_j), one contribution per slot
      const double term = t.value * y[t.k] / (y[t.i] * y[t.j]);
      g[t.i] += 0.25 * term / y[t.i];
      g[t.j] += 0.25 * term / y[t.j];
      g[t.k] -= 0.25 * term / y[t.k];
    } else if (in(t.i) && !in(t.j) && !in(t.k)) {
      g[t.i] += 0.5 * t.value / (y[t.i] * y[t.i]);
    }
  }
  return g;
}

}  // namespace

double scalar_curvature(const HomogeneousSpaceSpec& spec, const MetricCoefficients& x) {
  check_size(spec, x.size());
  return slice_functional(spec, SubalgebraIndexSet::full_mask(spec.s()), x.values());
}

double hat_scalar_curvature(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                            std::span<const double> y) {
  const auto full = scatter(spec, J, y);
  return slice_functional(spec, J.mask(), full);
}

std::vector<double> hat_scalar_gradient(const HomogeneousSpaceSpec& spec,
                                        const SubalgebraIndexSet& J, std::span<const double> y) {
  const auto full = scatter(spec, J, y);
  const auto g = slice_gradient(spec, J.mask(), full);
  std::vector<double> out;
  out.reserve(J.size());
  for (int i : J.members()) out.push_back(g[i]);
  return out;
}

double metric_trace_of_T(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                         std::span<const double> y, const TensorCoefficients& z) {
  check_size(spec, z.size());
  const auto full = scatter(spec, J, y);
  double sum = 0.0;
  for (int i : J.members()) sum += spec.d(i) * z[i] / full[i];
  return sum;
}

double metric_trace_of_T(const HomogeneousSpaceSpec& spec, const MetricCoefficients& x,
                         const TensorCoefficients& z) {
  check_size(spec, x.size());
  return metric_trace_of_T(spec, SubalgebraIndexSet::full(spec.s()), x.values(), z);
}

std::vector<double> scalar_gradient(const HomogeneousSpaceSpec& spec,
                                    const MetricCoefficients& x) {
  check_size(spec, x.size());
  return slice_gradient(spec, SubalgebraIndexSet::full_mask(spec.s()), x.values());
}

RicciCoefficients ricci_coefficients(const HomogeneousSpaceSpec& spec,
                                     const MetricCoefficients& x) {
  check_size(spec, x.size());
  const std::size_t s = spec.s();
  // r_m = b_m/(2x_m) + 1/(4d_m) sum [mjk] x_m/(x_j x_k) - 1/(2d_m) sum [mjk] x_k/(x_m x_j)
  std::vector<double> plus(s, 0.0);
  std::vector<double> minus(s, 0.0);
  for (const auto& t : spec.triples().ordered()) {
    plus[t.i] += t.value * x[t.i] / (x[t.j] * x[t.k]);
    minus[t.i] += t.value * x[t.k] / (x[t.i] * x[t.j]);
  }
  RicciCoefficients out{std::vector<double>(s), std::vector<double>(s)};
  for (std::size_t m = 0; m < s; ++m) {
    const double dm = spec.d(m);
    out.r[m] = spec.b(m) / (2.0 * x[m]) + plus[m] / (4.0 * dm) - minus[m] / (2.0 * dm);
    out.R[m] = x[m] * out.r[m];
  }
  return out;
}

}  // namespace prc
