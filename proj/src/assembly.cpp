#include "fluxmaj/assembly.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "fluxmaj/errors.hpp"
#include "fluxmaj/quadrature.hpp"

namespace fluxmaj {

namespace {

constexpr std::size_t kNotFree = std::numeric_limits<std::size_t>::max();

Vec2 gradient_at(const ScalarBasisValues& basis, std::size_t q, const ElementMap& map,
                 std::span<const std::size_t> dofs, std::span<const double> v) {
  Vec2 ref{};
  for (std::size_t i = 0; i < dofs.size(); ++i) ref += v[dofs[i]] * basis.ref_gradient(q, i);
  return map.physical_gradient(ref);
}

}  // namespace

int default_quadrature_degree(int p1, int rt_order) {
  return std::min(2 * std::max(p1, rt_order + 1) + 4, kMaxQuadratureDegree);
}

bool same_mesh(const TriMesh& a, const TriMesh& b) { return &a == &b || a == b; }

namespace {

// Calls sink(t, dofs, ke, fe) with the element stiffness (row-major) and,
// when f is set, the element load.
template <class Sink>
void for_each_element(const ScalarSpace& space, const CoefficientModel& coefficients,
                      const std::function<double(Vec2)>& f, int quad_degree, Sink&& sink) {
  const TriMesh& mesh = space.mesh();
  const QuadRule& rule =
      rule_for_degree(quad_degree > 0 ? quad_degree : std::min(2 * space.order() + 4, kMaxQuadratureDegree));
  const std::size_t nloc = space.local_dof_count();
  const ScalarBasisValues basis = eval_scalar_basis(space, 0, rule.points);
  std::vector<Vec2> grads(nloc);
  std::vector<double> ke(nloc * nloc);
  std::vector<double> fe(nloc);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementMap map = element_map(mesh, t);
    const Mat2& a = coefficients.on_cell(t).a;
    std::fill(ke.begin(), ke.end(), 0.0);
    std::fill(fe.begin(), fe.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.det;
      for (std::size_t i = 0; i < nloc; ++i) grads[i] = map.physical_gradient(basis.ref_gradient(q, i));
      for (std::size_t j = 0; j < nloc; ++j) {
        const Vec2 flux = a * grads[j];
        for (std::size_t i = 0; i < nloc; ++i) ke[i * nloc + j] += w * dot(flux, grads[i]);
      }
      if (f) {
        const double fq = f(map.to_physical(rule.points[q]));
        for (std::size_t i = 0; i < nloc; ++i) fe[i] += w * fq * basis.value(q, i);
      }
    }
    sink(space.local_dofs(t), std::span<const double>(ke), std::span<const double>(fe));
  }
}

}  // namespace

SparseMatrix assemble_stiffness(const ScalarSpace& space, const CoefficientModel& coefficients,
                                int quad_degree) {
  const std::size_t nloc = space.local_dof_count();
  std::vector<Triplet> triplets;
  triplets.reserve(space.mesh().num_triangles() * nloc * nloc);
  for_each_element(space, coefficients, {}, quad_degree,
                   [&](std::span<const std::size_t> dofs, std::span<const double> ke,
                       std::span<const double>) {
                     for (std::size_t i = 0; i < nloc; ++i)
                       for (std::size_t j = 0; j < nloc; ++j)
                         triplets.push_back({dofs[i], dofs[j], ke[i * nloc + j]});
                   });
  return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(triplets));
}

PrimalSystem assemble_primal(const ScalarSpace& space, const ProblemSpec& problem,
                             int quad_degree) {
  if (!problem.f) throw InvalidArgument("assemble_primal: problem has no right-hand side");

  PrimalSystem sys;
  std::vector<std::size_t> reduced(space.dof_count(), kNotFree);
  for (std::size_t d = 0; d < space.dof_count(); ++d) {
    if (!space.is_boundary_dof(d)) {
      reduced[d] = sys.free_dofs.size();
      sys.free_dofs.push_back(d);
    }
  }
  const std::size_t n = sys.free_dofs.size();
  sys.load.assign(n, 0.0);

  const std::size_t nloc = space.local_dof_count();
  std::vector<Triplet> triplets;
  triplets.reserve(space.mesh().num_triangles() * nloc * nloc);
  for_each_element(space, problem.coefficients, problem.f, quad_degree,
                   [&](std::span<const std::size_t> dofs, std::span<const double> ke,
                       std::span<const double> fe) {
                     for (std::size_t i = 0; i < nloc; ++i) {
                       const std::size_t ri = reduced[dofs[i]];
                       if (ri == kNotFree) continue;
                       sys.load[ri] += fe[i];
                       for (std::size_t j = 0; j < nloc; ++j) {
                         const std::size_t rj = reduced[dofs[j]];
                         if (rj != kNotFree) triplets.push_back({ri, rj, ke[i * nloc + j]});
                       }
                     }
                   });
  sys.stiffness = SparseMatrix::from_triplets(n, n, std::move(triplets));
  return sys;
}

std::vector<double> solve_primal(const ScalarSpace& space, const ProblemSpec& problem,
                                 const PrimalSolveOptions& options) {
  const PrimalSystem sys = assemble_primal(space, problem, options.quad_degree);
  const std::vector<double> reduced =
      options.solver == PrimalSolver::kDirect
          ? direct_solve(sys.stiffness, sys.load, false)
          : nonsym_solve(sys.stiffness, sys.load, options.iterative);
  std::vector<double> full(space.dof_count(), 0.0);
  for (std::size_t i = 0; i < reduced.size(); ++i) full[sys.free_dofs[i]] = reduced[i];
  return full;
}

MajorantSystem assemble_majorant(const FluxSpace& flux, const ScalarSpace& scalar,
                                 std::span<const double> v, const ProblemSpec& problem,
                                 int quad_degree) {
  if (!same_mesh(flux.mesh(), scalar.mesh())) {
    throw Incompatible("assemble_majorant: flux and scalar spaces use different meshes");
  }
  if (v.size() != scalar.dof_count()) {
    throw Incompatible("assemble_majorant: v has " + std::to_string(v.size()) +
                       " coefficients, space has " + std::to_string(scalar.dof_count()));
  }
  if (!problem.f) throw InvalidArgument("assemble_majorant: problem has no right-hand side");

  MajorantSystem sys;
  sys.flux = &flux;
  sys.friedrichs = problem.friedrichs;
  sys.lambda_low = problem.lambda_low();
  sys.quad_degree = quad_degree > 0 ? quad_degree : default_quadrature_degree(scalar.order(), flux.order());
  const QuadRule& rule = rule_for_degree(sys.quad_degree);

  const TriMesh& mesh = flux.mesh();
  const std::size_t n = flux.dof_count();
  const std::size_t nloc = flux.local_dof_count();
  sys.b.assign(n, 0.0);
  sys.z.assign(n, 0.0);

  sys.points_per_cell = rule.size();
  sys.point_weights.reserve(mesh.num_triangles() * rule.size());
  sys.point_f.reserve(mesh.num_triangles() * rule.size());
  sys.point_a_grad_v.reserve(mesh.num_triangles() * rule.size());
  sys.cell_dual_weight.reserve(mesh.num_triangles());

  const ScalarBasisValues sbasis = eval_scalar_basis(scalar, 0, rule.points);
  std::vector<Triplet> s_trip;
  std::vector<Triplet> m_trip;
  s_trip.reserve(mesh.num_triangles() * nloc * nloc);
  m_trip.reserve(mesh.num_triangles() * nloc * nloc);
  std::vector<double> se(nloc * nloc);
  std::vector<double> me(nloc * nloc);
  std::vector<double> be(nloc);
  std::vector<double> ze(nloc);
  std::vector<Vec2> weighted(nloc);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementMap map = element_map(mesh, t);
    const CellCoefficient& coef = problem.coefficients.on_cell(t);
    const Mat2 w_sym2 = coef.dual_weight + coef.dual_weight.transpose();
    sys.cell_dual_weight.push_back(coef.dual_weight);
    const FluxBasisValues fb = eval_flux_basis(flux, t, rule.points);
    const std::span<const std::size_t> fdofs = flux.local_dofs(t);
    const std::span<const std::size_t> sdofs = scalar.local_dofs(t);
    std::fill(se.begin(), se.end(), 0.0);
    std::fill(me.begin(), me.end(), 0.0);
    std::fill(be.begin(), be.end(), 0.0);
    std::fill(ze.begin(), ze.end(), 0.0);

    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.det;
      const double fq = problem.f(map.to_physical(rule.points[q]));
      const Vec2 a_grad_v = coef.a * gradient_at(sbasis, q, map, sdofs, v);
      sys.point_weights.push_back(w);
      sys.point_f.push_back(fq);
      sys.point_a_grad_v.push_back(a_grad_v);
      sys.f_norm_sq += w * fq * fq;
      sys.g += w * dot(a_grad_v, coef.dual_weight * a_grad_v);
      for (std::size_t i = 0; i < nloc; ++i) weighted[i] = w_sym2 * fb.value(q, i);
      for (std::size_t i = 0; i < nloc; ++i) {
        const double div_i = fb.divergence(q, i);
        be[i] += w * fq * div_i;
        ze[i] += w * dot(weighted[i], a_grad_v);
        for (std::size_t j = 0; j < nloc; ++j) {
          se[i * nloc + j] += w * div_i * fb.divergence(q, j);
          me[i * nloc + j] += w * dot(weighted[i], fb.value(q, j));
        }
      }
    }
    for (std::size_t i = 0; i < nloc; ++i) {
      sys.b[fdofs[i]] += be[i];
      sys.z[fdofs[i]] += ze[i];
      for (std::size_t j = 0; j < nloc; ++j) {
        s_trip.push_back({fdofs[i], fdofs[j], se[i * nloc + j]});
        m_trip.push_back({fdofs[i], fdofs[j], me[i * nloc + j]});
      }
    }
  }
  sys.div_div = SparseMatrix::from_triplets(n, n, std::move(s_trip));
  sys.weighted_mass = SparseMatrix::from_triplets(n, n, std::move(m_trip));
  return sys;
}

double energy_error(const ScalarSpace& space, std::span<const double> v,
                    const ProblemSpec& problem, int quad_degree) {
  if (!problem.exact) throw Unsupported("energy_error: problem has no exact solution");
  if (v.size() != space.dof_count()) throw Incompatible("energy_error: v has wrong length");
  const QuadRule& rule = rule_for_degree(quad_degree > 0 ? quad_degree : kMaxQuadratureDegree);
  const ScalarBasisValues basis = eval_scalar_basis(space, 0, rule.points);
  const TriMesh& mesh = space.mesh();
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementMap map = element_map(mesh, t);
    const Mat2& a = problem.coefficients.on_cell(t).a;
    const std::span<const std::size_t> dofs = space.local_dofs(t);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 e = problem.exact->grad(map.to_physical(rule.points[q])) -
                     gradient_at(basis, q, map, dofs, v);
      local += rule.weights[q] * dot(a * e, e);
    }
    total += local * map.det;
  }
  return total;
}

}  // namespace fluxmaj
