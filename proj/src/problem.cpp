#include "fluxmaj/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fluxmaj/errors.hpp"

namespace fluxmaj {

namespace {

double lambda_min_symmetric(const Mat2& s) {
  // eigenvalues of [[p, r], [r, q]]: (p + q)/2 -+ sqrt(((p - q)/2)^2 + r^2)
  const double mean = 0.5 * (s.xx + s.yy);
  const double radius = std::hypot(0.5 * (s.xx - s.yy), s.xy);
  return mean - radius;
}

}  // namespace

double compute_lambda_low(const Mat2& a) {
  const double lambda = lambda_min_symmetric(a.symmetric_part());
  if (!(lambda > 0.0)) {
    throw CoefficientInvalid("symmetric part of A is not positive definite (lambda_min = " +
                             std::to_string(lambda) + ")");
  }
  return lambda;
}

Mat2 compute_B(const Mat2& a) {
  compute_lambda_low(a);
  if (a.det() == 0.0) throw CoefficientInvalid("A is singular");
  // A^T A^{-1} = I exactly for symmetric A.
  if (a.is_symmetric()) return 0.5 * Mat2::identity();
  const Mat2 m = Mat2::identity() + a.transpose() * a.inverse();
  if (m.det() == 0.0) throw CoefficientInvalid("I + A^T A^{-1} is singular");
  return m.inverse();
}

double friedrichs_constant(const Rectangle& rect) {
  const double lx = rect.x.length();
  const double ly = rect.y.length();
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("friedrichs_constant: empty rectangle");
  return 1.0 / (std::numbers::pi * std::sqrt(1.0 / (lx * lx) + 1.0 / (ly * ly)));
}

double csb_inequality_check(const Mat2& a, Vec2 y, Vec2 q) {
  const Mat2 b = compute_B(a);
  const Vec2 bq = b * q;
  const double energy = dot(a * y, y);
  const double dual = dot(a.inverse() * bq, bq);
  const double rhs = 2.0 * std::sqrt(energy) * std::sqrt(dual);
  if (rhs == 0.0) return 0.0;
  return dot(y, q) / rhs;
}

CellCoefficient CellCoefficient::from_matrix(const Mat2& a) {
  CellCoefficient c;
  c.a = a;
  c.lambda_min = compute_lambda_low(a);
  c.b = compute_B(a);
  c.a_inv = a.inverse();
  c.a_sym = a.symmetric_part();
  c.dual_weight = c.b.transpose() * c.a_inv * c.b;
  return c;
}

CoefficientModel CoefficientModel::constant(const Mat2& a, std::optional<double> lambda_override) {
  CoefficientModel m;
  m.materials_.push_back(CellCoefficient::from_matrix(a));
  m.finish(lambda_override);
  return m;
}

CoefficientModel CoefficientModel::piecewise(std::vector<Mat2> materials,
                                             std::vector<std::size_t> cell_material,
                                             std::optional<double> lambda_override) {
  if (materials.empty()) throw InvalidArgument("CoefficientModel: no materials");
  CoefficientModel m;
  for (const Mat2& a : materials) m.materials_.push_back(CellCoefficient::from_matrix(a));
  for (std::size_t id : cell_material) {
    if (id >= materials.size()) throw InvalidArgument("CoefficientModel: material index out of range");
  }
  m.cell_material_ = std::move(cell_material);
  m.finish(lambda_override);
  return m;
}

void CoefficientModel::finish(std::optional<double> lambda_override) {
  computed_lambda_ = materials_.front().lambda_min;
  for (const CellCoefficient& c : materials_) computed_lambda_ = std::min(computed_lambda_, c.lambda_min);
  if (lambda_override && !(*lambda_override > 0.0)) {
    throw CoefficientInvalid("lambda override must be positive");
  }
  lambda_override_ = lambda_override;
}

CoefficientModel CoefficientModel::symmetrized() const {
  CoefficientModel m;
  for (const CellCoefficient& c : materials_) m.materials_.push_back(CellCoefficient::from_matrix(c.a_sym));
  m.cell_material_ = cell_material_;
  m.finish(lambda_override_);
  return m;
}

ProblemSpec example1_problem(int k1, int k2, const Mat2& a, const Example1Options& options) {
  if (k1 < 1 || k2 < 1) throw InvalidArgument("example1_problem: k1, k2 must be >= 1");
  constexpr double pi = std::numbers::pi;
  const double w1 = k1 * pi;
  const double w2 = k2 * pi;

  ProblemSpec spec;
  spec.domain = kUnitSquare;
  spec.coefficients = CoefficientModel::constant(a, options.lambda_override);
  spec.friedrichs = options.friedrichs_override.value_or(friedrichs_constant(spec.domain));
  if (!(spec.friedrichs > 0.0)) throw InvalidArgument("Friedrichs constant must be positive");

  const double diag = a.xx * w1 * w1 + a.yy * w2 * w2;
  const double mixed = (a.xy + a.yx) * w1 * w2;
  spec.f = [=](Vec2 p) {
    return diag * std::sin(w1 * p.x) * std::sin(w2 * p.y) -
           mixed * std::cos(w1 * p.x) * std::cos(w2 * p.y);
  };
  spec.exact = ExactSolution{
      [=](Vec2 p) { return std::sin(w1 * p.x) * std::sin(w2 * p.y); },
      [=](Vec2 p) {
        return Vec2{w1 * std::cos(w1 * p.x) * std::sin(w2 * p.y),
                    w2 * std::sin(w1 * p.x) * std::cos(w2 * p.y)};
      }};
  return spec;
}

double example1_printed_rhs(int k1, int k2, const Mat2& a, Vec2 p) {
  constexpr double pi = std::numbers::pi;
  const double s = std::sin(k1 * pi * p.x) * std::sin(k2 * pi * p.y);
  const double c = std::cos(k1 * pi * p.x) * std::cos(k2 * pi * p.y);
  return pi * pi * ((a.xx + a.yy) * k1 * k1 * s - (a.xy + a.yx) * k1 * k2 * c);
}

}  // namespace fluxmaj
