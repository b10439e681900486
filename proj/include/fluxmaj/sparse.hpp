#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fluxmaj {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicates are summed. Entries are ordered by (row, col, value) before
  /// summation so the result does not depend on triplet order. Explicit
  /// zeros are kept in the pattern. Throws AssemblyError on out-of-range indices.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  static SparseMatrix identity(std::size_t n);

  /// alpha * a + beta * b over the union of the two patterns.
  static SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                         const SparseMatrix& b);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
  [[nodiscard]] std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  [[nodiscard]] std::span<const std::size_t> column_indices() const { return col_indices_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when outside the pattern.
  [[nodiscard]] double at(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

  /// x^T (this) y
  [[nodiscard]] double bilinear(std::span<const double> x, std::span<const double> y) const;

  [[nodiscard]] std::vector<double> diagonal() const;
  [[nodiscard]] SparseMatrix transpose() const;
  /// max |K_ij - K_ji| over all entries.
  [[nodiscard]] double symmetry_defect() const;
  [[nodiscard]] double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

struct SolverOptions {
  double rel_tol = 1e-10;
  /// 0 selects 10 * n.
  std::size_t max_iterations = 0;
  /// Matrices with symmetry_defect above this (relative to max_abs) are
  /// rejected by cg_solve.
  double symmetry_tol = 1e-10;
};

struct SolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems. Throws SolverFailure (with the final residual) on non-convergence
/// or loss of positive definiteness, InvalidArgument for a nonsymmetric matrix.
std::vector<double> cg_solve(const SparseMatrix& m, std::span<const double> rhs,
                             const SolverOptions& options = {}, SolveStats* stats = nullptr);

/// Jacobi-preconditioned BiCGStab for general nonsingular systems.
std::vector<double> nonsym_solve(const SparseMatrix& k, std::span<const double> rhs,
                                 const SolverOptions& options = {}, SolveStats* stats = nullptr);

/// Sparse direct solve: LDL^T with AMD ordering when `symmetric`, otherwise
/// sparse LU. Throws SolverFailure when the factorization fails.
std::vector<double> direct_solve(const SparseMatrix& k, std::span<const double> rhs,
                                 bool symmetric, SolveStats* stats = nullptr);

/// ||K x - b|| / ||b|| (or ||K x|| when b = 0).
double relative_residual(const SparseMatrix& k, std::span<const double> x,
                         std::span<const double> rhs);

}  // namespace fluxmaj
