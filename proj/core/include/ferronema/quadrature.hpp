#pragma once

#include <vector>

namespace ferronema {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule on [-1, 1]. Newton iteration on P_n from the
// Chebyshev-like initial guesses; accurate to machine precision for n < 1000.
GaussRule gauss_legendre(int n);

// Same rule mapped affinely onto [lo, hi].
GaussRule gauss_legendre(int n, double lo, double hi);

}  // namespace ferronema
