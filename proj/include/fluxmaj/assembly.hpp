#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fluxmaj/fem_spaces.hpp"
#include "fluxmaj/problem.hpp"
#include "fluxmaj/sparse.hpp"

namespace fluxmaj {

/// Quadrature degree used when none is requested: 2 max(p1, r + 1) + 4,
/// capped at the largest tabulated rule.
int default_quadrature_degree(int p1, int rt_order);

/// Galerkin system for (A grad u, grad w) = (f, w) on the interior DOFs.
/// Row/column i of the matrices corresponds to global DOF free_dofs[i].
struct PrimalSystem {
  SparseMatrix stiffness;
  std::vector<double> load;
  std::vector<std::size_t> free_dofs;
};

/// Full stiffness K_ij = (A grad phi_j, grad phi_i) over all DOFs, no boundary
/// conditions applied.
SparseMatrix assemble_stiffness(const ScalarSpace& space, const CoefficientModel& coefficients,
                                int quad_degree = 0);

/// K_ij = (A grad phi_j, grad phi_i), F_i = (f, phi_i); Dirichlet DOFs are
/// eliminated. quad_degree = 0 selects 2 p1 + 4.
PrimalSystem assemble_primal(const ScalarSpace& space, const ProblemSpec& problem,
                             int quad_degree = 0);

enum class PrimalSolver { kBiCGStab, kDirect };

struct PrimalSolveOptions {
  PrimalSolver solver = PrimalSolver::kBiCGStab;
  SolverOptions iterative{1e-12, 0, 1e-10};
  int quad_degree = 0;
};

/// Solves the primal problem and returns global coefficients (zero on the boundary).
std::vector<double> solve_primal(const ScalarSpace& space, const ProblemSpec& problem,
                                 const PrimalSolveOptions& options = {});

/// Ingredients of the quadratic majorant for a fixed approximation v:
///
///   ||div y + f||^2                          = c^T S c + 2 c^T b + f_norm_sq
///   (A^{-1} B (y - A grad v), B (y - A grad v)) = 1/2 c^T M c - c^T z + g
///
/// for y = sum_j c_j phi_j. S, M and b do not depend on v; z is linear in v.
struct MajorantSystem {
  SparseMatrix div_div;        // S
  SparseMatrix weighted_mass;  // M, symmetrized B-weighted mass
  std::vector<double> b;
  std::vector<double> z;
  double f_norm_sq = 0.0;
  double g = 0.0;
  double friedrichs = 0.0;
  double lambda_low = 0.0;
  const FluxSpace* flux = nullptr;
  int quad_degree = 0;

  // Quadrature-point data, triangle-major ([t * n_points + q]), used to
  // evaluate both residuals directly. Expanding the squares above cancels
  // catastrophically once ||div y + f|| is small compared with ||f||.
  std::size_t points_per_cell = 0;
  std::vector<double> point_weights;  // rule weight * det J
  std::vector<double> point_f;
  std::vector<Vec2> point_a_grad_v;
  std::vector<Mat2> cell_dual_weight;  // B^T A^{-1} B per triangle

  [[nodiscard]] std::size_t size() const { return b.size(); }
  /// C_F^2 / lambda, the weight of the equilibrium term.
  [[nodiscard]] double equilibrium_weight() const { return friedrichs * friedrichs / lambda_low; }
};

/// Throws Incompatible when v and the flux space live on different meshes.
/// quad_degree = 0 selects default_quadrature_degree(p1, r).
MajorantSystem assemble_majorant(const FluxSpace& flux, const ScalarSpace& scalar,
                                 std::span<const double> v, const ProblemSpec& problem,
                                 int quad_degree = 0);

/// (A grad(u - v), grad(u - v)) against the analytic gradient. Throws
/// Unsupported when the problem has no exact solution. quad_degree = 0 selects
/// the most accurate tabulated rule.
double energy_error(const ScalarSpace& space, std::span<const double> v,
                    const ProblemSpec& problem, int quad_degree = 0);

/// True when the two meshes are the same object or have identical geometry.
bool same_mesh(const TriMesh& a, const TriMesh& b);

}  // namespace fluxmaj
