#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fluxmaj/assembly.hpp"
#include "fluxmaj/errors.hpp"
#include "fluxmaj/majorant.hpp"
#include "oracles.hpp"

namespace fluxmaj {
namespace {

const Mat2 kExampleA{2.0, 1.0, 0.0, 3.0};

struct Fixture {
  TriMesh mesh;
  ScalarSpace scalar;
  FluxSpace flux;
  ProblemSpec problem;
  std::vector<double> v;
  MajorantSystem sys;

  Fixture(std::size_t n, int p1, int r, int k1, int k2, const Mat2& a = kExampleA)
      : mesh(build_rect_mesh(kUnitSquare, n, n)),
        scalar(mesh, p1),
        flux(mesh, r),
        problem(example1_problem(k1, k2, a)),
        v(solve_primal(scalar, problem)),
        sys(assemble_majorant(flux, scalar, v, problem)) {}
  Fixture(const Fixture&) = delete;
};

TEST(Majorant, ZeroProblemGivesZero) {
  const TriMesh mesh = build_rect_mesh(kUnitSquare, 4, 4);
  const ScalarSpace scalar(mesh, 1);
  const FluxSpace flux(mesh, 1);
  ProblemSpec p = example1_problem(1, 1, kExampleA);
  p.f = [](Vec2) { return 0.0; };
  const MajorantSystem sys =
      assemble_majorant(flux, scalar, std::vector<double>(scalar.dof_count(), 0.0), p);
  const MajorantResult res = minimize_majorant(sys);
  EXPECT_EQ(res.maj, 0.0);
  EXPECT_EQ(res.maj_sq, 0.0);
  EXPECT_EQ(res.iterations, 1);
}

TEST(Majorant, YoungEqualityAtOptimalBeta) {
  const Fixture s(6, 1, 1, 1, 1);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> c = testing::random_vector(s.sys.size(), rng, 0.1);
    const double d = std::sqrt(dual_squared(s.sys, c));
    const double e = std::sqrt(equi_squared(s.sys, c));
    const double beta = optimal_beta(s.sys, d, e);
    const double expected = std::pow(2.0 * d + std::sqrt(s.sys.equilibrium_weight()) * e, 2);
    EXPECT_NEAR(eval_majorant(s.sys, c, beta).maj_sq, expected, 1e-12 * expected);
  }
}

TEST(Majorant, BetaGridNeverBeatsClosedForm) {
  const Fixture s(6, 1, 0, 1, 1);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> c = testing::random_vector(s.sys.size(), rng, 0.5);
    const MajorantTerms t = eval_majorant(s.sys, c, 1.0);
    const double best = eval_majorant(s.sys, c, optimal_beta(s.sys, t.dual, t.equi)).maj_sq;
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      const double beta = std::pow(10.0, -6.0 + 12.0 * i / 999.0);
      grid_min = std::min(grid_min, eval_majorant(s.sys, c, beta).maj_sq);
    }
    EXPECT_GE(grid_min, best - 1e-9 * best);
  }
}

TEST(Majorant, MonotoneInBetaWithoutEquilibriumTerm) {
  const TriMesh mesh = build_rect_mesh(kUnitSquare, 3, 3);
  const ScalarSpace scalar(mesh, 1);
  const FluxSpace flux(mesh, 0);
  ProblemSpec p = example1_problem(1, 1, kExampleA);
  p.f = [](Vec2) { return 0.0; };
  const std::vector<double> v = interpolate_scalar(scalar, p.exact->u);
  const MajorantSystem sys = assemble_majorant(flux, scalar, v, p);
  const std::vector<double> c(sys.size(), 0.0);
  EXPECT_EQ(equi_squared(sys, c), 0.0);
  double previous = 0.0;
  for (double beta : {1e-8, 1e-4, 1e-1, 1.0, 10.0, 1e4}) {
    const MajorantTerms t = eval_majorant(sys, c, beta);
    EXPECT_GT(t.maj_sq, previous);
    EXPECT_NEAR(t.maj_sq, 4.0 * (1.0 + beta) * t.dual * t.dual, 1e-12 * t.maj_sq);
    previous = t.maj_sq;
  }
}

TEST(Majorant, InvalidInputs) {
  const Fixture s(3, 1, 0, 1, 1);
  const std::vector<double> c(s.sys.size(), 0.0);
  EXPECT_THROW(eval_majorant(s.sys, c, 0.0), InvalidArgument);
  EXPECT_THROW(solve_flux_step(s.sys, -1.0), InvalidArgument);
  EXPECT_THROW(dual_squared(s.sys, std::vector<double>(2, 0.0)), Incompatible);
  MajorantOptions bad;
  bad.eps = 0.0;
  EXPECT_THROW(minimize_majorant(s.sys, bad), InvalidArgument);
  bad = {};
  bad.max_iterations = 0;
  EXPECT_THROW(minimize_majorant(s.sys, bad), InvalidArgument);
  bad = {};
  bad.beta0 = 0.0;
  EXPECT_THROW(minimize_majorant(s.sys, bad), InvalidArgument);
  EXPECT_THROW(guaranteed_bound_check(MajorantResult{}, 0.0), InvalidArgument);
}

TEST(Majorant, FluxStepSystemSymmetricPositive) {
  const Fixture s(5, 2, 2, 2, 3);
  for (double beta : {1e-4, 1.0, 1e3}) {
    const SparseMatrix k = flux_step_matrix(s.sys, beta);
    EXPECT_LE(k.symmetry_defect(), 1e-12 * k.max_abs());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> x = testing::random_vector(k.rows(), rng);
      EXPECT_GT(k.bilinear(x, x), 0.0);
    }
  }
}

// Stationarity of the flux step: the gradient of maj^2(., beta) vanishes at
// the solution, checked through the quadratic forms.
TEST(Majorant, FluxStepIsStationary) {
  const Fixture s(5, 1, 1, 1, 1);
  const double beta = 0.3;
  const std::vector<double> c = solve_flux_step(s.sys, beta);
  const std::vector<double> sc = s.sys.div_div * c;
  const std::vector<double> mc = s.sys.weighted_mass * c;
  const double k = s.sys.equilibrium_weight();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    // d/dc of (1+beta)/beta K (c^T S c + 2 c^T b) + 4 (1+beta)(1/2 c^T M c - c^T z)
    const double g = (1.0 + beta) / beta * k * 2.0 * (sc[i] + s.sys.b[i]) +
                     4.0 * (1.0 + beta) * (mc[i] - s.sys.z[i]);
    worst = std::max(worst, std::abs(g));
    scale = std::max(scale, std::abs(4.0 * (1.0 + beta) * s.sys.z[i]) + std::abs(k * s.sys.b[i]));
  }
  EXPECT_LE(worst, 1e-9 * scale);
}

class MinimizerRuns : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(MinimizerRuns, Properties) {
  const auto [p1, r, k] = GetParam();
  const Fixture s(8, p1, r, k, k == 1 ? 1 : 3);
  const MajorantResult res = minimize_majorant(s.sys);

  for (std::size_t i = 1; i < res.history.size(); ++i) {
    EXPECT_LE(res.history[i].maj, res.history[i - 1].maj * (1.0 + 1e-12)) << "step " << i;
  }
  EXPECT_NEAR(res.maj_sq, res.maj * res.maj, 1e-14 * res.maj_sq);
  EXPECT_LE(res.iterations, 50);

  // fixed beta: the final flux minimizes maj^2(., flux_beta)
  const double at_min = eval_majorant(s.sys, res.flux_coeffs, res.flux_beta).maj_sq;
  std::mt19937_64 rng(7);
  const double cnorm = testing::norm2(res.flux_coeffs);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d = testing::random_vector(res.flux_coeffs.size(), rng);
    const double scale = 1e-3 * cnorm / testing::norm2(d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = res.flux_coeffs[i] + scale * d[i];
    EXPECT_GE(eval_majorant(s.sys, d, res.flux_beta).maj_sq, at_min);
  }

  // guaranteed bound
  const double err_sq = energy_error(s.scalar, s.v, s.problem);
  EXPECT_GE(guaranteed_bound_check(res, err_sq), 1.0 - 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Matrix, MinimizerRuns,
                         ::testing::Combine(::testing::Values(1, 2), ::testing::Values(0, 1, 2),
                                            ::testing::Values(1, 2)));

TEST(Majorant, IterationCountTwentyByTwenty) {
  const Fixture s(20, 1, 1, 1, 1);
  const MajorantResult res = minimize_majorant(s.sys);
  EXPECT_LE(res.iterations, 6);
  EXPECT_GE(res.iterations, 2);
}

TEST(Majorant, HighestOrderIsSharp) {
  const Fixture s(20, 1, 2, 1, 1);
  const MajorantResult res = minimize_majorant(s.sys);
  const double ieff = guaranteed_bound_check(res, energy_error(s.scalar, s.v, s.problem));
  EXPECT_GE(ieff, 1.0);
  EXPECT_LE(ieff, 1.05);
}

TEST(Majorant, ConjugateGradientAgreesWithDirect) {
  const Fixture s(6, 1, 0, 1, 1);
  MajorantOptions cg;
  cg.solver = FluxSolver::kCG;
  cg.cg = {1e-12, 0, 1e-10};
  const std::vector<double> a = solve_flux_step(s.sys, 1.0);
  const std::vector<double> b = solve_flux_step(s.sys, 1.0, cg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8 * (1.0 + std::abs(a[i])));
  const MajorantResult ra = minimize_majorant(s.sys);
  const MajorantResult rb = minimize_majorant(s.sys, cg);
  EXPECT_NEAR(ra.maj, rb.maj, 1e-8 * ra.maj);
  EXPECT_EQ(ra.iterations, rb.iterations);
}

TEST(Majorant, SingleIterationHonoursBeta0) {
  const Fixture s(5, 1, 0, 1, 1);
  MajorantOptions one;
  one.max_iterations = 1;
  one.beta0 = 0.25;
  const MajorantResult res = minimize_majorant(s.sys, one);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_EQ(res.flux_beta, 0.25);
  EXPECT_EQ(res.history.size(), 1u);
  EXPECT_NEAR(res.beta, optimal_beta(s.sys, res.dual, res.equi), 1e-15);
}

}  // namespace
}  // namespace fluxmaj
