#include "prc/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "prc/parallel.hpp"
#include "prc/sigma_apical.hpp"

namespace prc {

double GridAxis::at(int k) const {
  if (steps <= 1) return min;
  if (k == steps - 1) return max;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

GridAxis parse_grid_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw InputError("grid axis \"" + std::string(text) + "\": expected i=min:max:steps");
  }
  GridAxis axis;
  try {
    std::size_t used = 0;
    const std::string idx(text.substr(0, eq));
    axis.index = std::stoi(idx, &used) - 1;
    if (used != idx.size()) throw InputError("bad index");
  } catch (const std::exception&) {
    throw InputError("grid axis \"" + std::string(text) + "\": bad coordinate index");
  }
  std::vector<std::string> parts;
  std::string rest(text.substr(eq + 1));
  std::stringstream ss(rest);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  try {
    if (parts.size() == 1) {
      axis.min = axis.max = parse_rational(parts[0]);
      axis.steps = 1;
    } else if (parts.size() == 3) {
      axis.min = parse_rational(parts[0]);
      axis.max = parse_rational(parts[1]);
      std::size_t used = 0;
      axis.steps = std::stoi(parts[2], &used);
      if (used != parts[2].size()) throw InputError("bad steps");
    } else {
      throw InputError("expected i=min:max:steps");
    }
  } catch (const InputError& e) {
    throw InputError("grid axis \"" + std::string(text) + "\": " + e.what());
  } catch (const std::exception&) {
    throw InputError("grid axis \"" + std::string(text) + "\": bad step count");
  }
  if (axis.steps < 1) throw InputError("grid axis \"" + std::string(text) + "\": steps must be >= 1");
  if (!(axis.min > 0.0) || !(axis.max > 0.0) || !std::isfinite(axis.min) || !std::isfinite(axis.max)) {
    throw InputError("grid axis \"" + std::string(text) + "\": bounds must be positive");
  }
  if (axis.steps == 1 && axis.max != axis.min) {
    throw InputError("grid axis \"" + std::string(text) + "\": one step needs min = max");
  }
  return axis;
}

void SweepGrid::validate(const HomogeneousSpaceSpec& spec) const {
  if (base.size() != spec.s()) {
    throw InputError("T: expected " + std::to_string(spec.s()) + " coefficients, got " +
                     std::to_string(base.size()));
  }
  int free = 0;
  std::vector<bool> seen(spec.s(), false);
  for (const auto& a : axes) {
    if (a.index < 0 || static_cast<std::size_t>(a.index) >= spec.s()) {
      throw InputError("grid: coordinate " + std::to_string(a.index + 1) + " out of range");
    }
    if (seen[a.index]) {
      throw InputError("grid: coordinate " + std::to_string(a.index + 1) + " given twice");
    }
    seen[a.index] = true;
    if (a.free()) ++free;
  }
  if (free > kMaxFreeAxes) throw InputError("grid: at most 2 free axes per sweep");
}

std::vector<std::vector<double>> SweepGrid::points(const HomogeneousSpaceSpec& spec) const {
  validate(spec);
  std::vector<std::vector<double>> out;
  std::vector<int> k(axes.size(), 0);
  while (true) {
    auto z = base;
    for (std::size_t a = 0; a < axes.size(); ++a) z[axes[a].index] = axes[a].at(k[a]);
    if (normalize) {
      double total = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) total += spec.d(i) * z[i];
      for (auto& v : z) v /= total;
    }
    out.push_back(std::move(z));
    // odometer, last axis fastest
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++k[a] < axes[a].steps) break;
      k[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_apical(const SubalgebraIndexSet& J) {
  std::string out = "{";
  for (int i : J.one_based()) {
    if (out.size() > 1) out += ' ';
    out += std::to_string(i);
  }
  return out + "}";
}

std::string emit_sweep(const HomogeneousSpaceSpec& spec, const SweepGrid& grid,
                       const SweepOptions& options) {
  const auto points = grid.points(spec);
  std::vector<std::string> rows(points.size());

  SolverOptions inner = options.solver;
  inner.workers = 1;  // parallelism is over grid points

  parallel_for(points.size(), options.workers, [&](std::size_t n) {
    const auto& zv = points[n];
    std::string row;
    for (double v : zv) row += format_number(v) + ",";
    try {
      const TensorCoefficients z(zv);
      const auto v = existence_check(spec, z, inner);
      row += to_string(v.status);
      row += ",";
      row += v.apical ? format_apical(*v.apical) : "";
      row += ",";
      row += v.sigma ? format_number(v.sigma->value) : "";
      row += ",";
      row += format_number(v.margin);
      if (options.solve) {
        row += ",";
        try {
          const auto best = maximize_S_on_MT(spec, z, inner);
          const auto check = verify_prescribed_ricci(spec, MetricCoefficients(best.argmax), z);
          row += format_number(check.c) + "," + format_number(check.residual);
        } catch (const NumericalError&) {
          row += ",";
        }
      }
    } catch (const std::exception&) {
      row.resize(0);
      for (double v : zv) row += format_number(v) + ",";
      row += "error,,,";
      if (options.solve) row += ",,";
    }
    rows[n] = std::move(row);
  });

  std::string out;
  for (std::size_t i = 0; i < spec.s(); ++i) out += "z" + std::to_string(i + 1) + ",";
  out += "status,apical,sigma,margin";
  if (options.solve) out += ",c,residual";
  out += "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace prc
