#include "zollfunk/quadrature.hpp"

#include <cmath>

#include "zollfunk/errors.hpp"

namespace zollfunk {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw UsageError("gauss_legendre: n must be positive");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

Rule1D gauss_chebyshev2(int n) {
  if (n < 1) throw UsageError("gauss_chebyshev2: n must be positive");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 1; k <= n; ++k) {
    const double a = k * M_PI / (n + 1.0);
    rule.nodes[k - 1] = std::cos(a);
    const double s = std::sin(a);
    rule.weights[k - 1] = M_PI / (n + 1.0) * s * s;
  }
  return rule;
}

}  // namespace zollfunk
