#pragma once

// Reference computations used only by the tests. They share the basis
// evaluation with the library but none of its assembly paths.

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "fluxmaj/assembly.hpp"
#include "fluxmaj/fem_spaces.hpp"
#include "fluxmaj/quadrature.hpp"
#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj::testing {

// Integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
inline double monomial_integral(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

// Plain dense row-major matrix.
struct Dense {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> data;

  Dense(std::size_t rows, std::size_t cols) : n(rows), m(cols), data(rows * cols, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * m + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * m + j]; }

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }
};

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.n;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= l * a(k, j);
      b[i] -= l * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

inline Vec2 grad_of(const ScalarSpace& space, std::span<const double> v, std::size_t t, Vec2 ref) {
  const ElementMap map = element_map(space.mesh(), t);
  const Vec2 pts[1] = {ref};
  const ScalarBasisValues basis = eval_scalar_basis(space, t, pts);
  const auto dofs = space.local_dofs(t);
  Vec2 g{};
  for (std::size_t i = 0; i < dofs.size(); ++i) g += v[dofs[i]] * basis.ref_gradient(0, i);
  return map.physical_gradient(g);
}

// ||div y + f||^2 and (A^{-1} B (y - A grad v), B (y - A grad v)) with
// B = (I + A^T A^{-1})^{-1} formed here from A, integrated element by element
// at the given degree.
struct DirectResiduals {
  double equi_sq = 0.0;
  double dual_sq = 0.0;
};

inline Mat2 b_operator(const Mat2& a) {
  return (Mat2::identity() + a.transpose() * a.inverse()).inverse();
}

inline DirectResiduals integrate_residuals(const FluxSpace& flux, const ScalarSpace& scalar,
                                           std::span<const double> v, const ProblemSpec& problem,
                                           std::span<const double> c, int degree) {
  const QuadRule& rule = rule_for_degree(degree);
  DirectResiduals out;
  for (std::size_t t = 0; t < flux.mesh().num_triangles(); ++t) {
    const ElementMap map = element_map(flux.mesh(), t);
    const Mat2 a = problem.coefficients.on_cell(t).a;
    const Mat2 b = b_operator(a);
    const Mat2 a_inv = a.inverse();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 ref = rule.points[q];
      const double w = rule.weights[q] * map.det;
      const FluxPointValue y = eval_flux_field(flux, c, t, ref);
      const double r = y.divergence + problem.f(map.to_physical(ref));
      out.equi_sq += w * r * r;
      const Vec2 d = y.value - a * grad_of(scalar, v, t, ref);
      out.dual_sq += w * dot(a_inv * (b * d), b * d);
    }
  }
  return out;
}

// Flux normal through a physical edge segment p0 -> p1 with normal = tangent
// rotated clockwise, for the field given by coefficients c seen from triangle t.
inline Vec2 clockwise_normal(Vec2 tangent) { return {tangent.y, -tangent.x}; }

}  // namespace fluxmaj::testing
