#include "fluxmaj/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "fluxmaj/errors.hpp"

namespace fluxmaj {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::size_t iteration_cap(const SparseMatrix& m, const SolverOptions& options) {
  return options.max_iterations > 0 ? options.max_iterations : 10 * std::max<std::size_t>(m.rows(), 1);
}

void check_square(const SparseMatrix& m, std::span<const double> rhs, const char* who) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(who) + ": matrix is not square");
  if (rhs.size() != m.rows()) throw InvalidArgument(std::string(who) + ": right-hand side has wrong length");
}

std::vector<double> inverse_diagonal(const SparseMatrix& m) {
  std::vector<double> d = m.diagonal();
  for (double& v : d) v = v != 0.0 ? 1.0 / v : 1.0;
  return d;
}

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.nonzeros());
  const auto off = m.row_offsets();
  const auto cols = m.column_indices();
  const auto vals = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t p = off[i]; p < off[i + 1]; ++p) {
      trips.emplace_back(static_cast<int>(i), static_cast<int>(cols[p]), vals[p]);
    }
  }
  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw AssemblyError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                          ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " matrix");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col, a.value) < std::tie(b.row, b.col, b.value);
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) {
      sum += triplets[k].value;
    }
    m.col_indices_.push_back(c);
    m.values_.push_back(sum);
    ++m.row_offsets_[r + 1];
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::linear_combination(double alpha, const SparseMatrix& a, double beta,
                                              const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw InvalidArgument("linear_combination: shape mismatch");
  }
  SparseMatrix m;
  m.rows_ = a.rows_;
  m.cols_ = a.cols_;
  m.row_offsets_.assign(a.rows_ + 1, 0);
  m.col_indices_.reserve(std::max(a.nonzeros(), b.nonzeros()));
  m.values_.reserve(std::max(a.nonzeros(), b.nonzeros()));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::size_t p = a.row_offsets_[i];
    std::size_t q = b.row_offsets_[i];
    const std::size_t pe = a.row_offsets_[i + 1];
    const std::size_t qe = b.row_offsets_[i + 1];
    while (p < pe || q < qe) {
      const std::size_t ca = p < pe ? a.col_indices_[p] : a.cols_;
      const std::size_t cb = q < qe ? b.col_indices_[q] : b.cols_;
      if (ca == cb) {
        m.col_indices_.push_back(ca);
        m.values_.push_back(alpha * a.values_[p++] + beta * b.values_[q++]);
      } else if (ca < cb) {
        m.col_indices_.push_back(ca);
        m.values_.push_back(alpha * a.values_[p++]);
      } else {
        m.col_indices_.push_back(cb);
        m.values_.push_back(beta * b.values_[q++]);
      }
    }
    m.row_offsets_[i + 1] = m.col_indices_.size();
  }
  return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto end = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw InvalidArgument("multiply: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      s += values_[p] * x[col_indices_[p]];
    }
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != rows_ || y.size() != cols_) throw InvalidArgument("bilinear: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double row = 0.0;
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      row += values_[p] * y[col_indices_[p]];
    }
    s += x[i] * row;
  }
  return s;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      t.push_back({col_indices_[p], i, values_[p]});
    }
  }
  return from_triplets(cols_, rows_, std::move(t));
}

double SparseMatrix::symmetry_defect() const {
  if (rows_ != cols_) throw InvalidArgument("symmetry_defect: matrix is not square");
  double defect = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      defect = std::max(defect, std::fabs(values_[p] - at(col_indices_[p], i)));
    }
  }
  return defect;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double relative_residual(const SparseMatrix& k, std::span<const double> x,
                         std::span<const double> rhs) {
  std::vector<double> r = k * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
  const double bn = norm2(rhs);
  return bn > 0.0 ? norm2(r) / bn : norm2(r);
}

std::vector<double> cg_solve(const SparseMatrix& m, std::span<const double> rhs,
                             const SolverOptions& options, SolveStats* stats) {
  check_square(m, rhs, "cg_solve");
  if (m.symmetry_defect() > options.symmetry_tol * std::max(1.0, m.max_abs())) {
    throw InvalidArgument("cg_solve: matrix is not symmetric");
  }
  const std::size_t n = m.rows();
  std::vector<double> x(n, 0.0);
  const double bn = norm2(rhs);
  if (bn == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  const std::vector<double> dinv = inverse_diagonal(m);
  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  std::vector<double> p = z;
  std::vector<double> ap(n);
  double rz = dot(r, z);
  double res = 1.0;
  const std::size_t cap = iteration_cap(m, options);
  for (std::size_t it = 1; it <= cap; ++it) {
    m.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw SolverFailure("cg_solve: matrix not positive definite", res);
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res = norm2(r) / bn;
    if (res <= options.rel_tol) {
      if (stats) *stats = {it, res};
      return x;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverFailure("cg_solve: no convergence in " + std::to_string(cap) + " iterations", res);
}

std::vector<double> nonsym_solve(const SparseMatrix& k, std::span<const double> rhs,
                                 const SolverOptions& options, SolveStats* stats) {
  check_square(k, rhs, "nonsym_solve");
  const std::size_t n = k.rows();
  std::vector<double> x(n, 0.0);
  const double bn = norm2(rhs);
  if (bn == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  const std::vector<double> dinv = inverse_diagonal(k);
  std::vector<double> r(rhs.begin(), rhs.end());
  const std::vector<double> r_hat = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), zs(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double res = 1.0;
  const std::size_t cap = iteration_cap(k, options);
  for (std::size_t it = 1; it <= cap; ++it) {
    const double rho_new = dot(r_hat, r);
    if (rho_new == 0.0 || omega == 0.0) throw SolverFailure("nonsym_solve: BiCGStab breakdown", res);
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * p[i];
    k.multiply(y, v);
    const double rv = dot(r_hat, v);
    if (rv == 0.0) throw SolverFailure("nonsym_solve: BiCGStab breakdown", res);
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) / bn <= options.rel_tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      res = relative_residual(k, x, rhs);
      if (res <= options.rel_tol) {
        if (stats) *stats = {it, res};
        return x;
      }
    }
    for (std::size_t i = 0; i < n; ++i) zs[i] = dinv[i] * s[i];
    k.multiply(zs, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * y[i] + omega * zs[i];
      r[i] = s[i] - omega * t[i];
    }
    res = norm2(r) / bn;
    if (res <= options.rel_tol) {
      // guard against drift of the recursive residual
      res = relative_residual(k, x, rhs);
      if (res <= options.rel_tol) {
        if (stats) *stats = {it, res};
        return x;
      }
    }
  }
  throw SolverFailure("nonsym_solve: no convergence in " + std::to_string(cap) + " iterations", res);
}

std::vector<double> direct_solve(const SparseMatrix& k, std::span<const double> rhs,
                                 bool symmetric, SolveStats* stats) {
  check_square(k, rhs, "direct_solve");
  const Eigen::SparseMatrix<double> a = to_eigen(k);
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  Eigen::VectorXd x;
  if (symmetric) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    ldlt.compute(a);
    if (ldlt.info() != Eigen::Success) throw SolverFailure("direct_solve: LDL^T factorization failed", 1.0);
    x = ldlt.solve(b);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw SolverFailure("direct_solve: LU factorization failed", 1.0);
    x = lu.solve(b);
  }
  std::vector<double> out(x.data(), x.data() + x.size());
  if (stats) *stats = {1, relative_residual(k, out, rhs)};
  return out;
}

}  // namespace fluxmaj
