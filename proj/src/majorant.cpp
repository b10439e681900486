#include "fluxmaj/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fluxmaj/errors.hpp"
#include "fluxmaj/quadrature.hpp"

namespace fluxmaj {

namespace {

void check_size(const MajorantSystem& sys, std::span<const double> c) {
  if (c.size() != sys.size()) {
    throw Incompatible("flux coefficient vector has " + std::to_string(c.size()) +
                       " entries, system has " + std::to_string(sys.size()));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Visits y_h and div y_h at every stored quadrature point.
template <typename Visitor>
void for_each_point(const MajorantSystem& sys, std::span<const double> c, Visitor&& visit) {
  if (sys.flux == nullptr) throw InvalidArgument("majorant system has no flux space");
  check_size(sys, c);
  const FluxSpace& flux = *sys.flux;
  const QuadRule& rule = rule_for_degree(sys.quad_degree);
  const std::size_t nq = sys.points_per_cell;
  for (std::size_t t = 0; t < flux.mesh().num_triangles(); ++t) {
    const FluxBasisValues fb = eval_flux_basis(flux, t, rule.points);
    const std::span<const std::size_t> dofs = flux.local_dofs(t);
    for (std::size_t q = 0; q < nq; ++q) {
      Vec2 y{};
      double div = 0.0;
      for (std::size_t k = 0; k < dofs.size(); ++k) {
        y += c[dofs[k]] * fb.value(q, k);
        div += c[dofs[k]] * fb.divergence(q, k);
      }
      visit(t, t * nq + q, y, div);
    }
  }
}

}  // namespace

double equi_squared(const MajorantSystem& sys, std::span<const double> c) {
  double total = 0.0;
  for_each_point(sys, c, [&](std::size_t, std::size_t p, Vec2, double div) {
    const double r = div + sys.point_f[p];
    total += sys.point_weights[p] * r * r;
  });
  return total;
}

double dual_squared(const MajorantSystem& sys, std::span<const double> c) {
  double total = 0.0;
  for_each_point(sys, c, [&](std::size_t t, std::size_t p, Vec2 y, double) {
    const Vec2 r = y - sys.point_a_grad_v[p];
    total += sys.point_weights[p] * dot(r, sys.cell_dual_weight[t] * r);
  });
  return total;
}

double equi_squared_quadratic(const MajorantSystem& sys, std::span<const double> c) {
  check_size(sys, c);
  return sys.div_div.bilinear(c, c) + 2.0 * dot(c, sys.b) + sys.f_norm_sq;
}

double dual_squared_quadratic(const MajorantSystem& sys, std::span<const double> c) {
  check_size(sys, c);
  return 0.5 * sys.weighted_mass.bilinear(c, c) - dot(c, sys.z) + sys.g;
}

MajorantTerms eval_majorant(const MajorantSystem& sys, std::span<const double> c, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("eval_majorant: beta must be positive");
  MajorantTerms out;
  const double d2 = std::max(0.0, dual_squared(sys, c));
  const double e2 = std::max(0.0, equi_squared(sys, c));
  out.dual = std::sqrt(d2);
  out.equi = std::sqrt(e2);
  out.maj_sq = 4.0 * (1.0 + beta) * d2 + (1.0 + beta) / beta * sys.equilibrium_weight() * e2;
  return out;
}

double optimal_beta(const MajorantSystem& sys, double dual, double equi) {
  return sys.friedrichs * equi / (2.0 * std::sqrt(sys.lambda_low) * dual);
}

SparseMatrix flux_step_matrix(const MajorantSystem& sys, double beta) {
  return SparseMatrix::linear_combination(sys.equilibrium_weight(), sys.div_div, 2.0 * beta,
                                          sys.weighted_mass);
}

std::vector<double> flux_step_rhs(const MajorantSystem& sys, double beta) {
  const double k = sys.equilibrium_weight();
  std::vector<double> rhs(sys.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -k * sys.b[i] + 2.0 * beta * sys.z[i];
  return rhs;
}

std::vector<double> solve_flux_step(const MajorantSystem& sys, double beta,
                                    const MajorantOptions& options) {
  if (!(beta > 0.0)) throw InvalidArgument("solve_flux_step: beta must be positive");
  const SparseMatrix k = flux_step_matrix(sys, beta);
  const std::vector<double> rhs = flux_step_rhs(sys, beta);
  if (options.solver == FluxSolver::kCG) return cg_solve(k, rhs, options.cg);
  return direct_solve(k, rhs, true);
}

MajorantResult minimize_majorant(const MajorantSystem& sys, const MajorantOptions& options) {
  if (!(options.eps > 0.0)) throw InvalidArgument("minimize_majorant: eps must be positive");
  if (options.max_iterations < 1) throw InvalidArgument("minimize_majorant: need at least one iteration");
  if (!(options.beta0 > 0.0)) throw InvalidArgument("minimize_majorant: beta0 must be positive");

  const double equi_scale = std::sqrt(sys.equilibrium_weight());
  MajorantResult result;
  double beta = options.beta0;
  double previous = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= options.max_iterations; ++k) {
    std::vector<double> c = solve_flux_step(sys, beta, options);
    result.flux_beta = beta;
    const double dual = std::sqrt(std::max(0.0, dual_squared(sys, c)));
    const double equi = std::sqrt(std::max(0.0, equi_squared(sys, c)));
    const double maj = 2.0 * dual + equi_scale * equi;

    result.iterations = k;
    result.flux_coeffs = std::move(c);
    result.dual = dual;
    result.equi = equi;
    result.maj = maj;

    // Either part vanishing puts the optimal beta at 0 or infinity; the
    // current flux is then already optimal for the remaining part.
    if (maj == 0.0 || dual <= 1e-14 * maj || equi <= 1e-14 * maj) {
      result.beta = beta;
      result.history.push_back({maj, dual, equi, beta});
      break;
    }

    beta = optimal_beta(sys, dual, equi);
    result.beta = beta;
    result.history.push_back({maj, dual, equi, beta});
    if (std::isfinite(previous) && std::fabs(maj - previous) <= options.eps * previous) break;
    previous = maj;
  }
  result.maj_sq = result.maj * result.maj;
  return result;
}

double guaranteed_bound_check(const MajorantResult& result, double energy_error_sq) {
  if (!(energy_error_sq > 0.0)) {
    throw InvalidArgument("guaranteed_bound_check: energy error must be positive");
  }
  return result.maj_sq / energy_error_sq;
}

}  // namespace fluxmaj
