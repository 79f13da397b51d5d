#pragma once

#include <vector>

namespace zollfunk {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1,1], exact for polynomials of degree 2n-1.
Rule1D gauss_legendre(int n);

/// Gauss-Chebyshev rule of the second kind: integrates f(t)*sqrt(1-t^2) on
/// [-1,1] exactly for f polynomial of degree 2n-1.  Nodes are cos(k pi/(n+1)).
Rule1D gauss_chebyshev2(int n);

}  // namespace zollfunk
