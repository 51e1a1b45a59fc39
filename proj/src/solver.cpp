#include "prc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "prc/curvature.hpp"
#include "prc/parallel.hpp"

namespace prc {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::escaped: return "escaped";
    case Termination::budget_exhausted: return "budget_exhausted";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

constexpr double kMaxStep = 2.0;          // infinity-norm cap in log-coordinates
constexpr double kArmijo = 1e-4;
constexpr double kHessianStep = 1e-5;     // central differences of the gradient
constexpr double kPolishGate = 1e-4;      // Newton step size that signals a nearby strict max
constexpr double kStepTolerance = 1e-12;
constexpr int kMaxPolish = 10;
constexpr double kAlternativeGap = 1e-9;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// S^ on the slice through J, parametrised by log-ratios q_i = log y_i - log y_last.
// Every evaluation projects onto the slice with y -> lambda y, lambda = tr_y T.
// Because S^ and the trace are both (-1)-homogeneous, S^ at the projected
// point equals S^(e^w) / tr_{e^w} T, a smooth function of q with no constraint.
class SliceProblem {
 public:
  struct Point {
    Vec q;
    std::vector<double> y;  // projected onto the slice
    double value = 0.0;
    Vec grad;               // d value / d w for all n log-coordinates
    bool finite = false;

    double residual() const { return grad.norm(); }
    Vec reduced() const { return grad.head(grad.size() - 1); }
  };

  SliceProblem(const HomogeneousSpaceSpec& spec, SubalgebraIndexSet J,
               const TensorCoefficients& z)
      : spec_(spec), J_(J), members_(J.members()) {
    for (int i : members_) dz_.push_back(spec.d(i) * z[i]);
  }

  std::size_t n() const { return members_.size(); }

  Point at(const Vec& q) const {
    Point p;
    p.q = q;
    const std::size_t n = this->n();
    p.y.resize(n);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p.y[i] = std::exp(i + 1 < n ? q[i] : 0.0);
      trace += dz_[i] / p.y[i];
    }
    for (auto& yi : p.y) yi *= trace;
    if (!std::all_of(p.y.begin(), p.y.end(), [](double v) { return std::isfinite(v) && v > 0; })) {
      return p;
    }
    p.value = hat_scalar_curvature(spec_, J_, p.y);
    const auto dS = hat_scalar_gradient(spec_, J_, p.y);
    p.grad.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      p.grad[i] = p.y[i] * dS[i] + p.value * dz_[i] / p.y[i];
    }
    p.finite = std::isfinite(p.value) && p.grad.allFinite();
    return p;
  }

  double constraint_error(const std::vector<double>& y) const {
    double trace = 0.0;
    for (std::size_t i = 0; i < n(); ++i) trace += dz_[i] / y[i];
    return std::abs(trace - 1.0);
  }

  static double spread(const std::vector<double>& y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    return *hi / *lo;
  }

  // Hessian of the value in q by central differences of the analytic gradient.
  Mat hessian(const Point& p) const {
    const Eigen::Index m = p.q.size();
    Mat H(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Vec e = Vec::Zero(m);
      e[j] = kHessianStep;
      const Point hi = at(p.q + e);
      const Point lo = at(p.q - e);
      H.col(j) = (hi.reduced() - lo.reduced()) / (2.0 * kHessianStep);
    }
    return 0.5 * (H + H.transpose());
  }

 private:
  const HomogeneousSpaceSpec& spec_;
  SubalgebraIndexSet J_;
  std::vector<int> members_;
  std::vector<double> dz_;
};

struct RunResult {
  SliceProblem::Point point;
  Termination termination = Termination::stalled;
  int iterations = 0;
};

void cap_step(Vec& p) {
  const double big = p.lpNorm<Eigen::Infinity>();
  if (big > kMaxStep) p *= kMaxStep / big;
}

// One restart: BFGS ascent with Armijo backtracking, then damped Newton
// with a finite-difference Hessian to certify and polish a strict local max.
RunResult ascend(const SliceProblem& problem, Vec q0, int budget) {
  RunResult run;
  SliceProblem::Point P = problem.at(q0);
  if (!P.finite) return run;
  const Eigen::Index m = q0.size();

  auto escaped = [&](const SliceProblem::Point& pt) {
    return SliceProblem::spread(pt.y) > kEscapeRatio;
  };

  Mat H = Mat::Identity(m, m);
  bool scaled = false;
  int newton_failures = 0;
  int polish = 0;
  bool newton_phase = false;

  while (run.iterations < budget) {
    if (escaped(P)) {
      run.termination = Termination::escaped;
      break;
    }
    ++run.iterations;
    const Vec g = P.reduced();
    const double gnorm = P.residual();

    if (!newton_phase && gnorm < 1e-7) newton_phase = true;

    if (newton_phase) {
      const Mat A = -problem.hessian(P);
      Eigen::LLT<Mat> llt(A);
      if (llt.info() != Eigen::Success) {
        if (gnorm < kFirstOrderTolerance) {
          // flat directions: a (non-strict) max if the Hessian is still
          // negative semidefinite, a saddle otherwise
          Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
          const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
          run.termination = eig.eigenvalues().minCoeff() >= -1e-6 * scale
                                ? Termination::converged
                                : Termination::stalled;
          break;
        }
        if (++newton_failures > 5) {
          run.termination = Termination::stalled;
          break;
        }
        newton_phase = false;
        H = Mat::Identity(m, m);
        scaled = false;
        continue;
      }
      Vec step = llt.solve(g);
      const double size = step.lpNorm<Eigen::Infinity>();
      if (gnorm < kFirstOrderTolerance && size < kStepTolerance) {
        run.termination = Termination::converged;
        break;
      }
      const bool polishing = gnorm < kFirstOrderTolerance && size < kPolishGate;
      cap_step(step);
      SliceProblem::Point Q;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        Q = problem.at(P.q + step);
        const double slack = 1e-12 * std::max(1.0, std::abs(P.value));
        if (Q.finite && Q.value >= P.value - slack) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (polishing) {
        // accept only while the first-order residual keeps shrinking
        if (!accepted || Q.residual() >= gnorm || ++polish > kMaxPolish) {
          if (accepted && Q.residual() < gnorm) P = Q;
          run.termination = Termination::converged;
          break;
        }
        P = Q;
        continue;
      }
      if (!accepted) {
        run.termination = Termination::stalled;
        break;
      }
      P = Q;
      continue;
    }

    Vec p = H * g;
    if (g.dot(p) <= 0.0) {
      H = Mat::Identity(m, m);
      scaled = false;
      p = g;
    }
    cap_step(p);
    const double slope = g.dot(p);
    SliceProblem::Point Q;
    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Q = problem.at(P.q + alpha * p);
      if (Q.finite && Q.value >= P.value + kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // no measurable ascent left at double precision; let Newton decide
      newton_phase = true;
      continue;
    }
    const Vec s = Q.q - P.q;
    const Vec yk = P.reduced() - Q.reduced();  // gradient change of -value
    const double sy = s.dot(yk);
    if (sy > 1e-300) {
      if (!scaled) {
        H = Mat::Identity(m, m) * (sy / yk.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Mat I = Mat::Identity(m, m);
      H = (I - rho * s * yk.transpose()) * H * (I - rho * yk * s.transpose()) +
          rho * s * s.transpose();
    }
    P = Q;
  }
  if (run.iterations >= budget && run.termination == Termination::stalled) {
    run.termination = escaped(P) ? Termination::escaped : Termination::budget_exhausted;
  }
  run.point = std::move(P);
  return run;
}

// Halton points in [-kStartBox, kStartBox]^m, optionally rotated by a
// seed-derived shift (Cranley-Patterson). Seed 0 is the plain sequence.
std::vector<Vec> start_points(std::size_t m, int count, std::uint64_t seed) {
  static constexpr std::array<int, 16> primes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                 23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<double> shift(m, 0.0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1p-53;
  }
  std::vector<Vec> out;
  for (int k = 1; k <= count; ++k) {
    Vec q(static_cast<Eigen::Index>(m));
    for (std::size_t d = 0; d < m; ++d) {
      double f = 1.0, u = 0.0;
      for (int i = k; i > 0; i /= primes[d]) {
        f /= primes[d];
        u += f * (i % primes[d]);
      }
      u += shift[d];
      u -= std::floor(u);
      q[static_cast<Eigen::Index>(d)] = kStartBox * (2.0 * u - 1.0);
    }
    out.push_back(std::move(q));
  }
  return out;
}

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool distinct(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-6 * std::max(std::abs(a[i]), std::abs(b[i]))) return true;
  }
  return false;
}

OptimizationReport run_multistart(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                                  const TensorCoefficients& z, const SolverOptions& options) {
  if (z.size() != spec.s()) throw InputError("T: dimension mismatch with space");
  if (J.universe() != spec.s()) throw InputError("index set does not match space");
  if (options.restarts < 1) throw InputError("restarts must be >= 1");
  if (options.max_iterations < 1) throw InputError("max_iterations must be >= 1");

  const SliceProblem problem(spec, J, z);
  OptimizationReport report;

  if (problem.n() == 1) {
    // the slice is the single point y = d_i z_i
    const auto p = problem.at(Vec(0));
    report.argmax = p.y;
    report.value = p.value;
    report.converged = true;
    report.termination = Termination::converged;
    report.restarts_used = 0;
    report.converged_restarts = 1;
    report.constraint_error = problem.constraint_error(p.y);
    report.diagnostics = "single-point slice";
    return report;
  }

  const auto starts = start_points(problem.n() - 1, options.restarts, options.seed);
  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), options.workers, [&](std::size_t r) {
    runs[r] = ascend(problem, starts[r], options.max_iterations);
  });

  int budget = 0, stalled = 0;
  for (const auto& run : runs) {
    switch (run.termination) {
      case Termination::converged: ++report.converged_restarts; break;
      case Termination::escaped: ++report.escaped_restarts; break;
      case Termination::budget_exhausted: ++budget; break;
      case Termination::stalled: ++stalled; break;
    }
  }
  report.restarts_used = static_cast<int>(runs.size());

  // best by value, ties broken lexicographically on the argmax
  auto better = [](const RunResult& a, const RunResult& b) {
    if (a.point.value != b.point.value) return a.point.value > b.point.value;
    return lexicographically_less(a.point.y, b.point.y);
  };
  const RunResult* best = nullptr;
  for (const auto& run : runs) {
    if (!run.point.finite) continue;
    const bool conv = run.termination == Termination::converged;
    if (best == nullptr) {
      best = &run;
      continue;
    }
    const bool best_conv = best->termination == Termination::converged;
    if (conv != best_conv) {
      if (conv) best = &run;
      continue;
    }
    if (better(run, *best)) best = &run;
  }

  std::ostringstream diag;
  diag << report.converged_restarts << " converged, " << report.escaped_restarts << " escaped, "
       << budget << " out of budget, " << stalled << " stalled of " << runs.size()
       << " restarts";
  report.diagnostics = diag.str();

  if (best == nullptr) {
    report.termination = Termination::stalled;
    report.value = -std::numeric_limits<double>::infinity();
    return report;
  }

  report.argmax = best->point.y;
  report.value = best->point.value;
  report.iterations = best->iterations;
  report.converged = best->termination == Termination::converged;
  report.termination = best->termination;
  report.first_order_residual = best->point.residual();
  report.constraint_error = problem.constraint_error(best->point.y);

  if (!report.converged) {
    // escape evidence: when any restart escaped, report the best escaping one
    const RunResult* esc = nullptr;
    for (const auto& run : runs) {
      if (run.termination == Termination::escaped && run.point.finite &&
          (esc == nullptr || better(run, *esc))) {
        esc = &run;
      }
    }
    if (esc != nullptr) {
      report.argmax = esc->point.y;
      report.value = esc->point.value;
      report.iterations = esc->iterations;
      report.termination = Termination::escaped;
      report.first_order_residual = esc->point.residual();
      report.constraint_error = problem.constraint_error(esc->point.y);
      std::vector<double> dir(esc->point.y.size());
      double mean = 0.0;
      for (std::size_t i = 0; i < dir.size(); ++i) {
        dir[i] = std::log(esc->point.y[i]);
        mean += dir[i];
      }
      mean /= static_cast<double>(dir.size());
      double norm = 0.0;
      for (auto& v : dir) {
        v -= mean;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (auto& v : dir) v /= norm;
      report.escape_direction = std::move(dir);
    }
    return report;
  }

  for (const auto& run : runs) {
    if (&run == best || run.termination != Termination::converged) continue;
    if (run.point.value < report.value - kAlternativeGap) continue;
    if (!distinct(run.point.y, report.argmax)) continue;
    const bool seen = std::any_of(report.alternatives.begin(), report.alternatives.end(),
                                  [&](const auto& a) { return !distinct(a, run.point.y); });
    if (!seen) report.alternatives.push_back(run.point.y);
  }
  std::sort(report.alternatives.begin(), report.alternatives.end(), lexicographically_less);
  return report;
}

}  // namespace

OptimizationReport maximize_hatS_on_slice(const HomogeneousSpaceSpec& spec,
                                          const SubalgebraIndexSet& J,
                                          const TensorCoefficients& z,
                                          const SolverOptions& options) {
  auto report = run_multistart(spec, J, z, options);
  if (!std::isfinite(report.value)) {
    throw NumericalError("slice maximisation on " + J.to_string() +
                         " produced no finite value: " + report.diagnostics);
  }
  return report;
}

OptimizationReport maximize_S_on_MT(const HomogeneousSpaceSpec& spec, const TensorCoefficients& z,
                                    const SolverOptions& options) {
  auto report = run_multistart(spec, SubalgebraIndexSet::full(spec.s()), z, options);
  if (!report.converged) {
    const char* why = report.escaped_restarts == report.restarts_used
                          ? "all restarts escaped toward the boundary of M_T"
                          : "no restart reached a certified maximum";
    throw NumericalError(std::string(why) + " (" + report.diagnostics + ")");
  }
  return report;
}

VerificationResult verify_prescribed_ricci(const HomogeneousSpaceSpec& spec,
                                           const MetricCoefficients& x,
                                           const TensorCoefficients& z) {
  if (z.size() != spec.s()) throw InputError("T: dimension mismatch with space");
  const auto ric = ricci_coefficients(spec, x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < spec.s(); ++i) {
    const double w = spec.d(i) / (x[i] * x[i]);
    num += w * ric.R[i] * z[i];
    den += w * z[i] * z[i];
  }
  VerificationResult out;
  out.c = num / den;
  for (std::size_t i = 0; i < spec.s(); ++i) {
    const double target = out.c * z[i];
    out.residual = std::max(out.residual, std::abs(ric.R[i] - target) / std::max(1.0, std::abs(target)));
  }
  out.positive = out.c > 0.0;
  return out;
}

std::vector<double> escape_curve_metric(const HomogeneousSpaceSpec& spec,
                                        const SubalgebraIndexSet& J, std::span<const double> y,
                                        const TensorCoefficients& z, double t) {
  const double trace = metric_trace_of_T(spec, J, y, z);
  if (std::abs(trace - 1.0) > kConstraintTolerance) {
    throw InputError("escape curve needs y on the slice (tr_y T = 1)");
  }
  const auto outside = J.complement_members();
  const double pole = trace_Q_over(spec, z, outside);
  if (!(t > pole)) throw InputError("escape curve parameter must exceed tr_Q T|_l");
  const double phi = t / (t - pole);
  std::vector<double> h(spec.s(), t);
  std::size_t n = 0;
  for (int i : J.members()) h[i] = phi * y[n++];
  return h;
}

double escape_curve_S(const HomogeneousSpaceSpec& spec, const SubalgebraIndexSet& J,
                      std::span<const double> y, const TensorCoefficients& z, double t) {
  return scalar_curvature(spec, MetricCoefficients(escape_curve_metric(spec, J, y, z, t)));
}

}  // namespace prc
