#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fluxmaj/assembly.hpp"
#include "fluxmaj/errors.hpp"
#include "fluxmaj/sparse.hpp"
#include "oracles.hpp"

namespace fluxmaj {
namespace {

using testing::Dense;

struct RandomSparse {
  SparseMatrix sparse;
  Dense dense;
};

RandomSparse random_sparse(std::size_t n, std::size_t nnz, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Triplet> trip;
  Dense dense(n, n);
  for (std::size_t k = 0; k < nnz; ++k) {
    const Triplet t{idx(rng), idx(rng), val(rng)};
    dense(t.row, t.col) += t.value;
    trip.push_back(t);
  }
  return {SparseMatrix::from_triplets(n, n, trip), dense};
}

// Diagonally dominant symmetric matrix with random off-diagonal pattern.
SparseMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Triplet> trip;
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t k = 0; k < 4 * n; ++k) {
    const std::size_t i = idx(rng);
    const std::size_t j = idx(rng);
    if (i == j) continue;
    const double v = val(rng);
    trip.push_back({i, j, v});
    trip.push_back({j, i, v});
    rowsum[i] += std::abs(v);
    rowsum[j] += std::abs(v);
  }
  for (std::size_t i = 0; i < n; ++i) trip.push_back({i, i, rowsum[i] + 0.5});
  return SparseMatrix::from_triplets(n, n, trip);
}

TEST(SparseMatrix, DuplicatesSummed) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 0, 0.0}});
  EXPECT_EQ(m.at(0, 0), 3.0);
  EXPECT_EQ(m.at(1, 1), 0.0);
  EXPECT_EQ(m.nonzeros(), 2u);
}

TEST(SparseMatrix, OutOfRangeTriplet) {
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), AssemblyError);
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{0, 5, 1.0}}), AssemblyError);
}

TEST(SparseMatrix, IdentityProduct) {
  const SparseMatrix id = SparseMatrix::identity(5);
  const std::vector<double> x{1, -2, 3, -4, 5};
  EXPECT_EQ(id * x, x);
}

TEST(SparseMatrix, AgreesWithDenseOracle) {
  std::mt19937_64 rng(31);
  const RandomSparse r = random_sparse(50, 400, rng);
  const std::vector<double> x = testing::random_vector(50, rng);
  const std::vector<double> y = testing::random_vector(50, rng);
  const std::vector<double> got = r.sparse * x;
  const std::vector<double> want = r.dense.apply(x);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(got[i], want[i], 1e-13);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) EXPECT_NEAR(r.sparse.at(i, j), r.dense(i, j), 1e-15);

  double bil = 0.0;
  for (std::size_t i = 0; i < 50; ++i) bil += y[i] * want[i];
  EXPECT_NEAR(r.sparse.bilinear(y, x), bil, 1e-12);

  const SparseMatrix t = r.sparse.transpose();
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) EXPECT_EQ(t.at(i, j), r.sparse.at(j, i));
}

TEST(SparseMatrix, LinearCombination) {
  std::mt19937_64 rng(37);
  const RandomSparse a = random_sparse(20, 60, rng);
  const RandomSparse b = random_sparse(20, 60, rng);
  const SparseMatrix c = SparseMatrix::linear_combination(2.0, a.sparse, -0.5, b.sparse);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      EXPECT_NEAR(c.at(i, j), 2.0 * a.dense(i, j) - 0.5 * b.dense(i, j), 1e-15);
  EXPECT_THROW(SparseMatrix::linear_combination(1.0, a.sparse, 1.0, SparseMatrix::identity(3)),
               InvalidArgument);
}

TEST(SparseMatrix, TripletOrderIndependent) {
  std::mt19937_64 rng(41);
  std::vector<Triplet> trip;
  std::uniform_int_distribution<std::size_t> idx(0, 29);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) trip.push_back({idx(rng), idx(rng), val(rng)});
  const SparseMatrix a = SparseMatrix::from_triplets(30, 30, trip);
  std::shuffle(trip.begin(), trip.end(), rng);
  const SparseMatrix b = SparseMatrix::from_triplets(30, 30, trip);
  ASSERT_EQ(a.nonzeros(), b.nonzeros());
  for (std::size_t k = 0; k < a.nonzeros(); ++k) {
    EXPECT_EQ(a.column_indices()[k], b.column_indices()[k]);
    EXPECT_EQ(a.values()[k], b.values()[k]);
  }
}

TEST(CgSolve, TwoByTwo) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
  SolveStats stats;
  const std::vector<double> x = cg_solve(m, std::vector<double>{1.0, 2.0}, {}, &stats);
  EXPECT_NEAR(x[0], 1.0 / 11.0, 1e-10);
  EXPECT_NEAR(x[1], 7.0 / 11.0, 1e-10);
  EXPECT_LE(stats.relative_residual, 1e-10);
}

TEST(CgSolve, ZeroRightHandSide) {
  const std::vector<double> x = cg_solve(SparseMatrix::identity(4), std::vector<double>(4, 0.0));
  for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(CgSolve, RandomSpdAgainstDenseOracle) {
  std::mt19937_64 rng(43);
  const SparseMatrix m = random_spd(100, rng);
  const std::vector<double> rhs = testing::random_vector(100, rng);
  const std::vector<double> x = cg_solve(m, rhs, {1e-12, 0, 1e-10});
  Dense d(100, 100);
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = 0; j < 100; ++j) d(i, j) = m.at(i, j);
  const std::vector<double> want = testing::dense_solve(d, rhs);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(x[i], want[i], 1e-9);
  EXPECT_LE(relative_residual(m, x, rhs), 1e-12);
}

TEST(CgSolve, RejectsNonsymmetric) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 3}});
  EXPECT_THROW(cg_solve(m, std::vector<double>{3.0, 3.0}), InvalidArgument);
}

TEST(CgSolve, ReportsFailureWithResidual) {
  std::mt19937_64 rng(47);
  const SparseMatrix m = random_spd(200, rng);
  const std::vector<double> rhs = testing::random_vector(200, rng);
  try {
    cg_solve(m, rhs, {1e-14, 1, 1e-10});
    FAIL() << "expected SolverFailure";
  } catch (const SolverFailure& e) {
    EXPECT_GT(e.residual(), 1e-14);
  }
}

TEST(CgSolve, IndefiniteDetected) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {1, 1, -1}});
  EXPECT_THROW(cg_solve(m, std::vector<double>{1.0, 1.0}), SolverFailure);
}

TEST(NonsymSolve, UpperTriangular) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 3}});
  const std::vector<double> x = nonsym_solve(m, std::vector<double>{3.0, 3.0});
  EXPECT_NEAR(x[0], 1.0, 1e-10);
  EXPECT_NEAR(x[1], 1.0, 1e-10);
}

TEST(NonsymSolve, AgreesWithCgOnSymmetric) {
  std::mt19937_64 rng(53);
  const SparseMatrix m = random_spd(80, rng);
  const std::vector<double> rhs = testing::random_vector(80, rng);
  const std::vector<double> a = cg_solve(m, rhs, {1e-12, 0, 1e-10});
  const std::vector<double> b = nonsym_solve(m, rhs, {1e-12, 0, 1e-10});
  for (std::size_t i = 0; i < 80; ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(NonsymSolve, ReportsFailure) {
  std::mt19937_64 rng(59);
  const RandomSparse r = random_sparse(100, 600, rng);
  const SparseMatrix m = SparseMatrix::linear_combination(1.0, r.sparse, 4.0, SparseMatrix::identity(100));
  EXPECT_THROW(nonsym_solve(m, testing::random_vector(100, rng), {1e-14, 1, 1e-10}), SolverFailure);
}

TEST(NonsymSolve, RejectsShapeMismatch) {
  EXPECT_THROW(nonsym_solve(SparseMatrix::identity(3), std::vector<double>(2, 1.0)), InvalidArgument);
}

TEST(DirectSolve, SymmetricAndGeneral) {
  std::mt19937_64 rng(61);
  const SparseMatrix spd = random_spd(60, rng);
  const std::vector<double> rhs = testing::random_vector(60, rng);
  EXPECT_LE(relative_residual(spd, direct_solve(spd, rhs, true), rhs), 1e-12);

  const RandomSparse r = random_sparse(60, 300, rng);
  const SparseMatrix gen = SparseMatrix::linear_combination(1.0, r.sparse, 6.0, SparseMatrix::identity(60));
  EXPECT_LE(relative_residual(gen, direct_solve(gen, rhs, false), rhs), 1e-12);
}

// Galerkin matrix of the example problem (nonsymmetric A) on a 10x10 mesh.
TEST(NonsymSolve, PrimalStiffness) {
  const TriMesh mesh = build_rect_mesh(kUnitSquare, 10, 10);
  const ScalarSpace space(mesh, 1);
  const PrimalSystem sys = assemble_primal(space, example1_problem(1, 1, Mat2{2.0, 1.0, 0.0, 3.0}));
  const std::vector<double> x = nonsym_solve(sys.stiffness, sys.load, {1e-12, 0, 1e-10});
  EXPECT_LE(relative_residual(sys.stiffness, x, sys.load), 1e-10);
}

}  // namespace
}  // namespace fluxmaj
