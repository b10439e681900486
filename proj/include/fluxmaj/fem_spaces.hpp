#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fluxmaj/mesh.hpp"
#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj {

/// Affine map x = origin + J x̂ from the reference triangle onto a mesh triangle.
struct ElementMap {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inverse_jacobian;
  double det = 0.0;

  [[nodiscard]] Vec2 to_physical(Vec2 ref) const { return origin + jacobian * ref; }
  [[nodiscard]] Vec2 to_reference(Vec2 phys) const { return inverse_jacobian * (phys - origin); }
  /// Physical gradient of a function with reference gradient g: J^{-T} g.
  [[nodiscard]] Vec2 physical_gradient(Vec2 ref_grad) const {
    return inverse_jacobian.transpose() * ref_grad;
  }
};

ElementMap element_map(const TriMesh& mesh, std::size_t tri);

// ---------------------------------------------------------------------------
// Continuous Lagrange (Courant) elements of order 1 or 2.
//
// DOFs: one per vertex, plus one per edge midpoint for order 2 (global index
// num_vertices + edge). Local ordering: vertices 0..2, then edges opposite
// vertices 0..2.
// ---------------------------------------------------------------------------
class ScalarSpace {
 public:
  /// The mesh must outlive the space.
  ScalarSpace(const TriMesh& mesh, int order);

  [[nodiscard]] const TriMesh& mesh() const { return *mesh_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::size_t dof_count() const { return dof_count_; }
  [[nodiscard]] std::size_t local_dof_count() const { return order_ == 1 ? 3 : 6; }
  [[nodiscard]] std::span<const std::size_t> local_dofs(std::size_t tri) const {
    return {local_to_global_.data() + tri * local_dof_count(), local_dof_count()};
  }
  [[nodiscard]] std::span<const std::size_t> boundary_dofs() const { return boundary_dofs_; }
  [[nodiscard]] bool is_boundary_dof(std::size_t dof) const { return boundary_flag_[dof] != 0; }
  /// Location of the node carrying each DOF.
  [[nodiscard]] Vec2 dof_point(std::size_t dof) const;

 private:
  const TriMesh* mesh_;
  int order_;
  std::size_t dof_count_;
  std::vector<std::size_t> local_to_global_;
  std::vector<std::size_t> boundary_dofs_;
  std::vector<char> boundary_flag_;
};

/// Basis data at a set of points, stored point-major: entry [q * n_basis + i].
struct ScalarBasisValues {
  std::size_t n_basis = 0;
  std::vector<double> values;
  std::vector<Vec2> ref_gradients;

  [[nodiscard]] double value(std::size_t q, std::size_t i) const { return values[q * n_basis + i]; }
  [[nodiscard]] Vec2 ref_gradient(std::size_t q, std::size_t i) const {
    return ref_gradients[q * n_basis + i];
  }
};

ScalarBasisValues eval_scalar_basis(const ScalarSpace& space, std::size_t tri,
                                    std::span<const Vec2> ref_pts);

/// Nodal interpolant of a scalar function.
std::vector<double> interpolate_scalar(const ScalarSpace& space,
                                       const std::function<double(Vec2)>& u);

// ---------------------------------------------------------------------------
// Raviart-Thomas elements RT_r, r in {0, 1, 2}.
//
// Edge DOFs are normal moments against shifted Legendre polynomials L_j,
// j = 0..r, taken along the global edge orientation (low -> high vertex) and
// against the normal obtained by rotating that tangent clockwise. Interior
// DOFs (r >= 1) are reference moments against e_d * m for monomials m of
// degree <= r-1, ordered (m0, x), (m0, y), (m1, x), ...
//
// Global numbering: edge e, moment j -> e * (r + 1) + j; interior DOF i of
// triangle t -> num_edges * (r + 1) + t * n_interior + i.
// ---------------------------------------------------------------------------

/// Reference RT_r element: nodal basis dual to the DOF functionals above, in
/// terms of the monomial spanning set of (P_r)^2 + x P~_r.
class RaviartThomasReference {
 public:
  explicit RaviartThomasReference(int order);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t edge_dofs_per_edge() const { return static_cast<std::size_t>(order_ + 1); }
  [[nodiscard]] std::size_t interior_dofs() const { return dim_ - 3 * edge_dofs_per_edge(); }
  /// Determinant of the functional/monomial matrix; nonzero iff unisolvent.
  [[nodiscard]] double vandermonde_determinant() const { return vandermonde_det_; }

  /// Reference values and divergences of all basis functions at x̂.
  void evaluate(Vec2 ref, std::span<Vec2> values, std::span<double> divergences) const;

  /// Spanning set: (x^a y^b, 0), (0, x^a y^b) for a+b <= r, and
  /// (x, y) x^a y^b for a+b = r.
  struct Monomial {
    enum Kind { kX, kY, kRadial } kind;
    int a;
    int b;

    [[nodiscard]] Vec2 value(Vec2 p) const;
    [[nodiscard]] double divergence(Vec2 p) const;
  };

 private:
  int order_;
  std::vector<Monomial> monomials_;
  std::size_t dim_;
  double vandermonde_det_ = 0.0;
  std::vector<double> coefficients_;  // dim x dim, column k = basis function k
};

/// Shared, lazily built reference element for order r.
const RaviartThomasReference& rt_reference(int order);

class FluxSpace {
 public:
  /// The mesh must outlive the space. rt_order is the 0-based RT index r.
  FluxSpace(const TriMesh& mesh, int rt_order);

  [[nodiscard]] const TriMesh& mesh() const { return *mesh_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::size_t dof_count() const { return dof_count_; }
  [[nodiscard]] std::size_t local_dof_count() const { return reference_->dim(); }
  [[nodiscard]] const RaviartThomasReference& reference() const { return *reference_; }
  [[nodiscard]] std::span<const std::size_t> local_dofs(std::size_t tri) const {
    return {local_to_global_.data() + tri * local_dof_count(), local_dof_count()};
  }
  /// Factor (+1/-1) mapping the reference basis to the global basis.
  [[nodiscard]] std::span<const double> local_signs(std::size_t tri) const {
    return {local_signs_.data() + tri * local_dof_count(), local_dof_count()};
  }

 private:
  const TriMesh* mesh_;
  int order_;
  const RaviartThomasReference* reference_;
  std::size_t dof_count_;
  std::vector<std::size_t> local_to_global_;
  std::vector<double> local_signs_;
};

/// Global basis functions restricted to one triangle, after the contravariant
/// Piola map. Point-major layout like ScalarBasisValues.
struct FluxBasisValues {
  std::size_t n_basis = 0;
  std::vector<Vec2> values;
  std::vector<double> divergences;

  [[nodiscard]] Vec2 value(std::size_t q, std::size_t i) const { return values[q * n_basis + i]; }
  [[nodiscard]] double divergence(std::size_t q, std::size_t i) const {
    return divergences[q * n_basis + i];
  }
};

FluxBasisValues eval_flux_basis(const FluxSpace& space, std::size_t tri,
                                std::span<const Vec2> ref_pts);

/// Canonical interpolant: global DOF values of a vector field.
std::vector<double> interpolate_flux(const FluxSpace& space, const std::function<Vec2(Vec2)>& y);

/// Value and divergence of the field with global coefficients c at a reference point of tri.
struct FluxPointValue {
  Vec2 value;
  double divergence = 0.0;
};
FluxPointValue eval_flux_field(const FluxSpace& space, std::span<const double> coeffs,
                               std::size_t tri, Vec2 ref);

/// Shifted Legendre polynomial L_j on [0, 1], j <= 2.
double shifted_legendre(int j, double s);

}  // namespace fluxmaj
