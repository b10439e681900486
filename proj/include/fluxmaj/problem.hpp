#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "fluxmaj/mesh.hpp"
#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj {

/// B = (I + A^T A^{-1})^{-1}. Throws CoefficientInvalid for singular A or an
/// indefinite symmetric part.
Mat2 compute_B(const Mat2& a);

/// Smallest eigenvalue of (A + A^T)/2, the sharp ellipticity constant.
/// Throws CoefficientInvalid if it is not positive.
double compute_lambda_low(const Mat2& a);

/// Sharp Friedrichs constant of a rectangle, 1 / (pi sqrt(1/Lx^2 + 1/Ly^2)).
double friedrichs_constant(const Rectangle& rect);

/// Ratio (y, q) / [2 (A y, y)^{1/2} (A^{-1} B q, B q)^{1/2}]; at most 1 for
/// admissible A. Returns 0 when y or q vanishes.
double csb_inequality_check(const Mat2& a, Vec2 y, Vec2 q);

/// Everything derived from one constant coefficient matrix.
struct CellCoefficient {
  Mat2 a;
  Mat2 a_inv;
  Mat2 a_sym;
  Mat2 b;
  /// W = B^T A^{-1} B, so (A^{-1} B p, B q) = p^T W q.
  Mat2 dual_weight;
  double lambda_min = 0.0;

  static CellCoefficient from_matrix(const Mat2& a);
};

/// Piecewise-constant diffusion coefficient.
class CoefficientModel {
 public:
  /// Same matrix on every cell.
  static CoefficientModel constant(const Mat2& a, std::optional<double> lambda_override = {});
  /// materials[cell_material[t]] is the matrix on triangle t.
  static CoefficientModel piecewise(std::vector<Mat2> materials,
                                    std::vector<std::size_t> cell_material,
                                    std::optional<double> lambda_override = {});

  [[nodiscard]] const CellCoefficient& on_cell(std::size_t tri) const {
    return cell_material_.empty() ? materials_.front() : materials_[cell_material_[tri]];
  }
  [[nodiscard]] bool is_constant() const { return cell_material_.empty(); }
  [[nodiscard]] std::span<const CellCoefficient> materials() const { return materials_; }

  /// Constant used in the majorant: the override when given, else the computed value.
  [[nodiscard]] double lambda_low() const { return lambda_override_.value_or(computed_lambda_); }
  /// min over cells of lambda_min(A_sym).
  [[nodiscard]] double computed_lambda_low() const { return computed_lambda_; }
  [[nodiscard]] std::optional<double> lambda_override() const { return lambda_override_; }

  /// Same model with every matrix replaced by its symmetric part.
  [[nodiscard]] CoefficientModel symmetrized() const;

 private:
  CoefficientModel() = default;
  void finish(std::optional<double> lambda_override);

  std::vector<CellCoefficient> materials_;
  std::vector<std::size_t> cell_material_;
  double computed_lambda_ = 0.0;
  std::optional<double> lambda_override_;
};

struct ExactSolution {
  std::function<double(Vec2)> u;
  std::function<Vec2(Vec2)> grad;
};

/// -div(A grad u) = f in the rectangle, u = 0 on its boundary.
struct ProblemSpec {
  Rectangle domain = kUnitSquare;
  CoefficientModel coefficients = CoefficientModel::constant(Mat2::identity());
  std::function<double(Vec2)> f;
  std::optional<ExactSolution> exact;
  double friedrichs = 0.0;

  [[nodiscard]] double lambda_low() const { return coefficients.lambda_low(); }
};

struct Example1Options {
  std::optional<double> lambda_override;
  std::optional<double> friedrichs_override;
};

/// u = sin(k1 pi x) sin(k2 pi y) on the unit square with constant A and
/// f = -div(A grad u) = pi^2 [(a k1^2 + d k2^2) sin sin - (b + c) k1 k2 cos cos].
ProblemSpec example1_problem(int k1, int k2, const Mat2& a, const Example1Options& options = {});

/// The frequently quoted closed form with (a + d) k1^2 in front of sin sin.
/// Agrees with the analytic right-hand side only when k1 == k2.
double example1_printed_rhs(int k1, int k2, const Mat2& a, Vec2 p);

inline bool example1_printed_rhs_is_exact(int k1, int k2) { return k1 == k2; }

}  // namespace fluxmaj
