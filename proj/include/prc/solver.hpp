#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prc/space_model.hpp"

namespace prc {

struct SolverOptions {
  int restarts = 16;
  std::uint64_t seed = 0;
  int max_iterations = 10000;  // per restart
  unsigned workers = 1;        // threads used for independent restarts
};

inline constexpr double kFirstOrderTolerance = 1e-9;
inline constexpr double kConstraintTolerance = 1e-10;
inline constexpr double kEscapeRatio = 1e8;
inline constexpr double kStartBox = 3.0;  // restarts sample log-ratios in [-3, 3]

enum class Termination { converged, escaped, budget_exhausted, stalled };

const char* to_string(Termination t);

struct OptimizationReport {
  /// Best point found, on the slice: one coefficient per member of J (all s
  /// for maximize_S_on_MT). For escaped runs this is the last iterate.
  std::vector<double> argmax;
  double value = 0.0;
  int iterations = 0;  // of the reported restart
  int restarts_used = 0;
  bool converged = false;
  double first_order_residual = 0.0;  // norm of the projected gradient
  double constraint_error = 0.0;      // |tr T - 1| at argmax
  Termination termination = Termination::stalled;
  /// Unit vector of centred log-coefficients along which an escaped run left
  /// every compact set; empty unless the report is an escape.
  std::vector<double> escape_direction;
  /// Further distinct converged maximisers within 1e-9 of the best value.
  std::vector<std::vector<double>> alternatives;
  int converged_restarts = 0;
  int escaped_restarts = 0;
  std::string diagnostics;
};

/// Maximises S^ over {y : sum_{i in J} d_i z_i / y_i = 1} by multistart
/// quasi-Newton ascent in log-coordinates. Non-convergence with escaping
/// iterates is evidence that the supremum is not attained.
OptimizationReport maximize_hatS_on_slice(const HomogeneousSpaceSpec& spec,
                                          const SubalgebraIndexSet& J,
                                          const TensorCoefficients& z,
                                          const SolverOptions& options = {});

/// Same search on the full index set, i.e. S restricted to M_T. Throws
/// NumericalError when no restart converges.
OptimizationReport maximize_S_on_MT(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                                    const SolverOptions& options = {});

struct VerificationResult {
  double c = 0.0;
  double residual = 0.0;  // max_i |R_i - c z_i| / max(1, |c z_i|)
  bool positive = false;
  bool verified() const { return positive && residual < 1e-8; }
};

/// Least-squares fit of Ric g = c T in the inner product sum d_i A_i B_i / x_i^2.
VerificationResult verify_prescribed_ricci(const HomogeneousSpaceSpec& spec,
                                           const MetricCoefficients& x,
                                           const TensorCoefficients& z);

/// S(h(t)) for the curve h(t) = phi(t) y on J and t on the complement,
/// phi(t) = t / (t - tr_Q T|_l). Requires y on the slice and t beyond the pole.
double escape_curve_S(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                      std::span<const double> y, const TensorCoefficients& z, double t);

/// The metric h(t) itself, as full coefficients.
std::vector<double> escape_curve_metric(const HomogeneousSpaceSpec& spec,
                                        const SubalgebraIndexSet& J, std::span<const double> y,
                                        const TensorCoefficients& z, double t);

}  // namespace prc
