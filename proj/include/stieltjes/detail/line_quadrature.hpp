#pragma once

// Trapezoid quadrature over the whole real line for integrands that decay
// at both ends (after a logarithmic substitution every integral in this
// library has that form). The support is located by walking outward from a
// centre, then the step is halved until successive sums agree.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "stieltjes/detail/summation.hpp"
#include "stieltjes/errors.hpp"

namespace stieltjes::detail {

struct LineQuadratureOptions {
  double scan_step = 0.5;
  double cutoff = 1e-18;         // negligible relative to the running max |f|
  int quiet_steps = 6;           // consecutive negligible samples that end a walk
  double rel_tol = 1e-12;        // stop when successive sums differ by rel_tol * L1
  std::size_t max_nodes = 200000;
  double max_extent = 600.0;     // walk at most this far from the centre
  int min_halvings = 2;
};

struct LineIntegral {
  double value = 0.0;
  double l1 = 0.0;          // integral of |f|, same rule
  double error_estimate = 0.0;
  std::size_t nodes = 0;
  double step = 0.0;
  double lo = 0.0, hi = 0.0;
};

template <class F>
LineIntegral integrate_line(F &&f, double centre, const LineQuadratureOptions &opt = {}) {
  const double h0 = opt.scan_step;

  const double f_centre = f(centre);
  if (!std::isfinite(f_centre))
    throw ConvergenceError("integrand is not finite at the centre u = " + std::to_string(centre));
  double peak = std::abs(f_centre);
  std::size_t evaluations = 1;
  // Walk one direction, returning samples at centre + dir * j * h0, j >= 1.
  auto walk = [&](int dir) {
    std::vector<double> out;
    int quiet = 0;
    for (int j = 1; j * h0 <= opt.max_extent; ++j) {
      const double v = f(centre + dir * j * h0);
      ++evaluations;
      if (!std::isfinite(v))
        throw ConvergenceError("integrand is not finite at u = " + std::to_string(centre + dir * j * h0));
      out.push_back(v);
      const double a = std::abs(v);
      if (a > peak)
        peak = a;
      if (peak > 0.0 && a <= opt.cutoff * peak) {
        if (++quiet >= opt.quiet_steps)
          return out;
      } else {
        quiet = 0;
      }
    }
    if (peak > 0.0)
      throw ConvergenceError("integrand support exceeds the scan window");
    return out;
  };
  std::vector<double> right = walk(+1);
  std::vector<double> left = walk(-1);

  // Coarse grid, left to right.
  std::vector<double> grid;
  grid.reserve(left.size() + right.size() + 1);
  for (auto it = left.rbegin(); it != left.rend(); ++it)
    grid.push_back(*it);
  grid.push_back(f_centre);
  grid.insert(grid.end(), right.begin(), right.end());
  const double lo = centre - double(left.size()) * h0;
  const double hi = centre + double(right.size()) * h0;

  LineIntegral out;
  out.lo = lo;
  out.hi = hi;
  if (peak == 0.0) {
    out.nodes = evaluations;
    out.step = h0;
    return out;
  }

  CompensatedSum s, sa;
  for (double v : grid) {
    s += v;
    sa += std::abs(v);
  }
  double h = h0;
  double sum = s.value(), abs_sum = sa.value();
  double estimate = h * sum;
  std::size_t n_intervals = grid.size() - 1;
  std::size_t nodes = grid.size();

  for (int level = 1;; ++level) {
    if (nodes + n_intervals > opt.max_nodes)
      throw ConvergenceError("line quadrature exceeded " + std::to_string(opt.max_nodes) +
                             " nodes (last change " + std::to_string(out.error_estimate) + ")");
    CompensatedSum mid, mid_abs;
    for (std::size_t j = 0; j < n_intervals; ++j) {
      const double v = f(lo + (double(j) + 0.5) * h);
      mid += v;
      mid_abs += std::abs(v);
    }
    nodes += n_intervals;
    sum += mid.value();
    abs_sum += mid_abs.value();
    h *= 0.5;
    n_intervals *= 2;
    const double next = h * sum;
    const double l1 = h * abs_sum;
    const double change = std::abs(next - estimate);
    estimate = next;
    out.error_estimate = l1 > 0.0 ? change / l1 : change;
    if (level >= opt.min_halvings && change <= opt.rel_tol * l1) {
      out.value = next;
      out.l1 = l1;
      break;
    }
  }
  out.nodes = nodes + evaluations - grid.size();
  out.step = h;
  return out;
}

} // namespace stieltjes::detail
