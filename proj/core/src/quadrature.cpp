#include "ferronema/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ferronema/errors.hpp"

namespace ferronema {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule gauss_legendre(int n, double lo, double hi) {
  GaussRule rule = gauss_legendre(n);
  const double c = 0.5 * (hi + lo), r = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = c + r * rule.nodes[i];
    rule.weights[i] *= r;
  }
  return rule;
}

}  // namespace ferronema
