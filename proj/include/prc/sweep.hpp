#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prc/solver.hpp"
#include "prc/space_model.hpp"

namespace prc {

/// One grid axis "i=min:max:steps" (1-based i in text, 0-based here), or a
/// fixed coordinate "i=value" (steps = 1).
struct GridAxis {
  int index = 0;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  bool free() const { return steps > 1; }
  double at(int k) const;
};

/// Points are the base T with the axis coordinates overridden, row-major
/// over the axes in the order given (first axis outermost).
struct SweepGrid {
  std::vector<double> base;
  std::vector<GridAxis> axes;
  bool normalize = false;  // rescale each point to sum d_i z_i = 1

  static constexpr int kMaxFreeAxes = 2;

  void validate(const HomogeneousSpaceSpec& spec) const;
  std::vector<std::vector<double>> points(const HomogeneousSpaceSpec& spec) const;
};

GridAxis parse_grid_axis(std::string_view text);

struct SweepOptions {
  SolverOptions solver;
  bool solve = false;
  unsigned workers = 1;
};

/// CSV: z1..zs,status,apical,sigma,margin[,c,residual]. A point that fails
/// gets status "error" and empty numeric fields; the sweep always finishes.
std::string emit_sweep(const HomogeneousSpaceSpec& spec, const SweepGrid& grid,
                       const SweepOptions& options);

/// %.17g, or empty for NaN.
std::string format_number(double v);

/// "{2 4}" style, 1-based.
std::string format_apical(const SubalgebraIndexSet& J);

}  // namespace prc
