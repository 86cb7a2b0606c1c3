#pragma once

// Composite Gauss-Legendre rule on a finite interval.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "stieltjes/detail/summation.hpp"
#include "stieltjes/errors.hpp"

namespace stieltjes::detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

template <class F>
double composite_gauss(F &&f, double a, double b, int panels, const GaussRule &rule) {
  CompensatedSum sum;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width, half = 0.5 * width;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      sum += half * rule.weights[j] * f(mid + half * rule.nodes[j]);
  }
  return sum.value();
}

/// Integral over [a, b], doubling the panel count until two successive
/// sums agree to rel_tol (relative to the larger of |sum| and `scale`).
template <class F>
double integrate_interval(F &&f, double a, double b, double rel_tol = 1e-12, int max_panels = 4096,
                          double scale = 0.0) {
  static const GaussRule rule = gauss_legendre(12);
  int panels = 8;
  double prev = composite_gauss(f, a, b, panels, rule);
  while (panels < max_panels) {
    panels *= 2;
    const double next = composite_gauss(f, a, b, panels, rule);
    if (std::abs(next - prev) <= rel_tol * std::max(std::abs(next), scale))
      return next;
    prev = next;
  }
  throw ConvergenceError("integrate_interval: no convergence on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
}

} // namespace stieltjes::detail
