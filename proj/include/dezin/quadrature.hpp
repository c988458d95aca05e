#pragma once

#include <span>
#include <vector>

namespace dezin {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (n >= 1). Thread-safe.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over the panels given by sorted breakpoints.
template <class F>
double integrate_panels(F&& f, std::span<const double> breaks, int points) {
  const GaussRule& rule = gauss_legendre(points);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * s;
  }
  return total;
}

/// Breakpoints a = x_0 < ... < x_n = b with equal spacing.
std::vector<double> uniform_breaks(double a, double b, int panels);

}  // namespace dezin
