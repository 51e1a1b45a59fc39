#pragma once

#include <span>
#include <vector>

#include "prc/space_model.hpp"

namespace prc {

/// Ric g = sum R_i pi*_{m_i} Q, with Ricci eigenvalues r_i = R_i / x_i.
struct RicciCoefficients {
  std::vector<double> R;
  std::vector<double> r;
};

/// S(g) = 1/2 sum d_i b_i / x_i - 1/4 sum_{i,j,k} [ijk] x_k / (x_i x_j)
double scalar_curvature(const HomogeneousSpaceSpec& spec, const MetricCoefficients& x);

/// Extension of S to scalar products y on n = k - h, where J is the index set
/// of k. `y` lists one coefficient per member of J in increasing order.
///
///   S^(y) = 1/2 sum_J d_i b_i / y_i - 1/2 sum_{i in J} sum_{j,k not in J} [ijk] / y_i
///           - 1/4 sum_{i,j,k in J} [ijk] y_k / (y_i y_j)
///
/// On the full index set this is bitwise the same computation as
/// scalar_curvature.
double hat_scalar_curvature(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                            std::span<const double> y);

/// d S^ / d y_m for each member m of J, same layout as y.
std::vector<double> hat_scalar_gradient(const HomogeneousSpaceSpec& spec,
                                        const SubalgebraIndexSet& J, std::span<const double> y);

/// tr_y T|_n = sum_{i in J} d_i z_i / y_i.
double metric_trace_of_T(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                         std::span<const double> y, const TensorCoefficients& z);
double metric_trace_of_T(const HomogeneousSpaceSpec& spec, const MetricCoefficients& x,
                         const TensorCoefficients& z);

std::vector<double> scalar_gradient(const HomogeneousSpaceSpec& spec,
                                    const MetricCoefficients& x);

/// Closed form of the Ricci tensor of a diagonal metric; agrees with
/// R_m = -(x_m^2 / d_m) dS/dx_m.
RicciCoefficients ricci_coefficients(const HomogeneousSpaceSpec& spec,
                                     const MetricCoefficients& x);

}  // namespace prc
