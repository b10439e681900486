#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fluxmaj/assembly.hpp"
#include "fluxmaj/sparse.hpp"

namespace fluxmaj {

/// How the flux step (C_F^2/lambda S + 2 beta M) c = -C_F^2/lambda b + 2 beta z is solved.
enum class FluxSolver {
  kDirect,  ///< sparse LDL^T, robust when beta is tiny
  kCG,      ///< Jacobi-preconditioned conjugate gradients
};

struct MajorantOptions {
  double eps = 1e-6;
  int max_iterations = 50;
  double beta0 = 1.0;
  FluxSolver solver = FluxSolver::kDirect;
  SolverOptions cg{1e-10, 0, 1e-10};
};

struct IterationRecord {
  double maj = 0.0;
  double dual = 0.0;
  double equi = 0.0;
  /// beta after the update, i.e. optimal for this iteration's flux.
  double beta = 0.0;
};

struct MajorantResult {
  double maj = 0.0;     ///< 2 dual + C_F / sqrt(lambda) equi
  double maj_sq = 0.0;  ///< maj^2, the squared bound at the optimal beta
  double dual = 0.0;
  double equi = 0.0;
  double beta = 0.0;
  double flux_beta = 0.0;  ///< beta of the final flux solve; flux_coeffs minimize for it
  int iterations = 0;
  std::vector<double> flux_coeffs;
  std::vector<IterationRecord> history;
};

struct MajorantTerms {
  double maj_sq = 0.0;
  double dual = 0.0;
  double equi = 0.0;
};

/// ||div y + f||^2 for y = sum c_j phi_j, integrated pointwise.
double equi_squared(const MajorantSystem& sys, std::span<const double> c);
/// (A^{-1} B (y - A grad v), B (y - A grad v)), integrated pointwise.
double dual_squared(const MajorantSystem& sys, std::span<const double> c);

/// Same quantities through the assembled quadratic forms
/// c^T S c + 2 c^T b + ||f||^2 and 1/2 c^T M c - c^T z + g.
double equi_squared_quadratic(const MajorantSystem& sys, std::span<const double> c);
double dual_squared_quadratic(const MajorantSystem& sys, std::span<const double> c);

/// maj^2(beta) = 4 (1 + beta) dual^2 + (1 + beta) / beta * C_F^2 / lambda * equi^2.
MajorantTerms eval_majorant(const MajorantSystem& sys, std::span<const double> c, double beta);

/// Minimizer of eval_majorant over beta > 0 for fixed parts:
/// C_F equi / (2 sqrt(lambda) dual).
double optimal_beta(const MajorantSystem& sys, double dual, double equi);

SparseMatrix flux_step_matrix(const MajorantSystem& sys, double beta);
std::vector<double> flux_step_rhs(const MajorantSystem& sys, double beta);
std::vector<double> solve_flux_step(const MajorantSystem& sys, double beta,
                                    const MajorantOptions& options = {});

/// Alternates exact minimization over the flux coefficients (fixed beta) and
/// over beta (fixed flux) until the relative change of maj drops to eps or
/// max_iterations flux solves have been made.
MajorantResult minimize_majorant(const MajorantSystem& sys, const MajorantOptions& options = {});

/// Efficiency index maj^2 / (A grad(u - v), grad(u - v)); at least 1 for a valid bound.
double guaranteed_bound_check(const MajorantResult& result, double energy_error_sq);

}  // namespace fluxmaj
