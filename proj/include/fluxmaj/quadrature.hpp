#pragma once

#include <cstddef>
#include <vector>

#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj {

/// Quadrature rule on the reference triangle (0,0), (1,0), (0,1).
/// Weights sum to the reference area 1/2 and are all positive.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre rule on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 12;

/// Smallest available rule that integrates polynomials of total degree <= d
/// exactly, 1 <= d <= kMaxQuadratureDegree. Throws UnsupportedDegree otherwise.
/// The returned reference stays valid for the program lifetime.
const QuadRule& rule_for_degree(int d);

/// n-point Gauss-Legendre rule on [0, 1], exact for degree 2n - 1.
LineRule gauss_legendre(int n);

}  // namespace fluxmaj
