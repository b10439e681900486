#include "fluxmaj/fem_spaces.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "fluxmaj/errors.hpp"
#include "fluxmaj/quadrature.hpp"

namespace fluxmaj {

namespace {

constexpr std::array<Vec2, 3> kRefVertices{Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
constexpr std::array<Vec2, 3> kBaryGradients{Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void check_triangle(const TriMesh& mesh, std::size_t tri) {
  if (tri >= mesh.num_triangles()) {
    throw InvalidArgument("triangle index " + std::to_string(tri) + " out of range");
  }
}

using Monomial = RaviartThomasReference::Monomial;

std::vector<Monomial> rt_monomials(int r) {
  std::vector<Monomial> out;
  for (int deg = 0; deg <= r; ++deg) {
    for (int a = deg; a >= 0; --a) {
      out.push_back({Monomial::kX, a, deg - a});
      out.push_back({Monomial::kY, a, deg - a});
    }
  }
  for (int a = r; a >= 0; --a) out.push_back({Monomial::kRadial, a, r - a});
  return out;
}

}  // namespace

ElementMap element_map(const TriMesh& mesh, std::size_t tri) {
  check_triangle(mesh, tri);
  const Triangle& t = mesh.triangle(tri);
  const Vec2 p0 = mesh.vertex(t[0]);
  ElementMap map;
  map.origin = p0;
  map.jacobian = Mat2::from_columns(mesh.vertex(t[1]) - p0, mesh.vertex(t[2]) - p0);
  map.det = map.jacobian.det();
  map.inverse_jacobian = map.jacobian.inverse();
  return map;
}

// ---------------------------------------------------------------------------
// ScalarSpace

ScalarSpace::ScalarSpace(const TriMesh& mesh, int order) : mesh_(&mesh), order_(order) {
  if (order != 1 && order != 2) {
    throw InvalidArgument("ScalarSpace: order must be 1 or 2, got " + std::to_string(order));
  }
  const std::size_t nv = mesh.num_vertices();
  dof_count_ = order == 1 ? nv : nv + mesh.num_edges();
  const std::size_t nloc = local_dof_count();
  local_to_global_.resize(mesh.num_triangles() * nloc);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) local_to_global_[t * nloc + k] = tri[k];
    if (order == 2) {
      for (int k = 0; k < 3; ++k) {
        local_to_global_[t * nloc + 3 + k] = nv + mesh.triangle_edges(t)[k].edge;
      }
    }
  }
  boundary_flag_.assign(dof_count_, 0);
  for (std::size_t v = 0; v < nv; ++v) boundary_flag_[v] = mesh.is_boundary_vertex(v) ? 1 : 0;
  if (order == 2) {
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      boundary_flag_[nv + e] = mesh.is_boundary_edge(e) ? 1 : 0;
    }
  }
  for (std::size_t d = 0; d < dof_count_; ++d) {
    if (boundary_flag_[d]) boundary_dofs_.push_back(d);
  }
}

Vec2 ScalarSpace::dof_point(std::size_t dof) const {
  const std::size_t nv = mesh_->num_vertices();
  if (dof < nv) return mesh_->vertex(dof);
  const Edge& e = mesh_->edge(dof - nv);
  return 0.5 * (mesh_->vertex(e[0]) + mesh_->vertex(e[1]));
}

ScalarBasisValues eval_scalar_basis(const ScalarSpace& space, std::size_t tri,
                                    std::span<const Vec2> ref_pts) {
  check_triangle(space.mesh(), tri);
  const std::size_t nb = space.local_dof_count();
  ScalarBasisValues out;
  out.n_basis = nb;
  out.values.resize(ref_pts.size() * nb);
  out.ref_gradients.resize(ref_pts.size() * nb);
  for (std::size_t q = 0; q < ref_pts.size(); ++q) {
    const Vec2 p = ref_pts[q];
    const std::array<double, 3> l{1.0 - p.x - p.y, p.x, p.y};
    double* val = out.values.data() + q * nb;
    Vec2* grad = out.ref_gradients.data() + q * nb;
    if (space.order() == 1) {
      for (int i = 0; i < 3; ++i) {
        val[i] = l[i];
        grad[i] = kBaryGradients[i];
      }
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      val[i] = l[i] * (2.0 * l[i] - 1.0);
      grad[i] = (4.0 * l[i] - 1.0) * kBaryGradients[i];
    }
    for (int k = 0; k < 3; ++k) {
      const int a = (k + 1) % 3;
      const int b = (k + 2) % 3;
      val[3 + k] = 4.0 * l[a] * l[b];
      grad[3 + k] = 4.0 * (l[b] * kBaryGradients[a] + l[a] * kBaryGradients[b]);
    }
  }
  return out;
}

std::vector<double> interpolate_scalar(const ScalarSpace& space,
                                       const std::function<double(Vec2)>& u) {
  std::vector<double> out(space.dof_count());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = u(space.dof_point(d));
  return out;
}

// ---------------------------------------------------------------------------
// Raviart-Thomas

Vec2 RaviartThomasReference::Monomial::value(Vec2 p) const {
  const double m = ipow(p.x, a) * ipow(p.y, b);
  switch (kind) {
    case kX: return {m, 0.0};
    case kY: return {0.0, m};
    case kRadial: return {p.x * m, p.y * m};
  }
  return {};
}

double RaviartThomasReference::Monomial::divergence(Vec2 p) const {
  switch (kind) {
    case kX: return a == 0 ? 0.0 : a * ipow(p.x, a - 1) * ipow(p.y, b);
    case kY: return b == 0 ? 0.0 : b * ipow(p.x, a) * ipow(p.y, b - 1);
    case kRadial: return (a + b + 2) * ipow(p.x, a) * ipow(p.y, b);
  }
  return 0.0;
}

double shifted_legendre(int j, double s) {
  switch (j) {
    case 0: return 1.0;
    case 1: return 2.0 * s - 1.0;
    case 2: return 6.0 * s * s - 6.0 * s + 1.0;
    default: throw InvalidArgument("shifted_legendre: degree above 2");
  }
}

RaviartThomasReference::RaviartThomasReference(int order) : order_(order) {
  if (order < 0 || order > 2) {
    throw InvalidArgument("Raviart-Thomas order must be 0, 1 or 2, got " + std::to_string(order));
  }
  monomials_ = rt_monomials(order);
  const std::vector<Monomial>& monomials = monomials_;
  dim_ = monomials.size();
  Eigen::MatrixXd vandermonde = Eigen::MatrixXd::Zero(dim_, dim_);

  std::size_t row = 0;
  const LineRule line = gauss_legendre(order + 2);
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = kRefVertices[(k + 1) % 3];
    const Vec2 t = kRefVertices[(k + 2) % 3] - a;
    const Vec2 n{t.y, -t.x};
    for (int j = 0; j <= order; ++j, ++row) {
      for (std::size_t m = 0; m < dim_; ++m) {
        double acc = 0.0;
        for (std::size_t q = 0; q < line.size(); ++q) {
          const double s = line.points[q];
          acc += line.weights[q] * dot(monomials[m].value(a + s * t), n) * shifted_legendre(j, s);
        }
        vandermonde(row, m) = acc;
      }
    }
  }
  if (order >= 1) {
    const QuadRule& rule = rule_for_degree(2 * order);
    for (int deg = 0; deg <= order - 1; ++deg) {
      for (int pa = deg; pa >= 0; --pa) {
        const int pb = deg - pa;
        for (int d = 0; d < 2; ++d, ++row) {
          for (std::size_t m = 0; m < dim_; ++m) {
            double acc = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q) {
              const Vec2 p = rule.points[q];
              const Vec2 v = monomials[m].value(p);
              acc += rule.weights[q] * (d == 0 ? v.x : v.y) * ipow(p.x, pa) * ipow(p.y, pb);
            }
            vandermonde(row, m) = acc;
          }
        }
      }
    }
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(vandermonde);
  vandermonde_det_ = lu.determinant();
  if (!lu.isInvertible()) {
    throw AssemblyError("Raviart-Thomas DOF functionals are not unisolvent");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  coefficients_.resize(dim_ * dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t k = 0; k < dim_; ++k) coefficients_[j * dim_ + k] = inv(j, k);
  }
}

void RaviartThomasReference::evaluate(Vec2 ref, std::span<Vec2> values,
                                      std::span<double> divergences) const {
  std::array<Vec2, 15> mv{};
  std::array<double, 15> md{};
  for (std::size_t m = 0; m < dim_; ++m) {
    mv[m] = monomials_[m].value(ref);
    md[m] = monomials_[m].divergence(ref);
  }
  for (std::size_t k = 0; k < dim_; ++k) {
    Vec2 v{};
    double d = 0.0;
    for (std::size_t m = 0; m < dim_; ++m) {
      const double c = coefficients_[m * dim_ + k];
      v += c * mv[m];
      d += c * md[m];
    }
    values[k] = v;
    divergences[k] = d;
  }
}

const RaviartThomasReference& rt_reference(int order) {
  if (order < 0 || order > 2) {
    throw InvalidArgument("Raviart-Thomas order must be 0, 1 or 2, got " + std::to_string(order));
  }
  static const std::array<RaviartThomasReference, 3> references{
      RaviartThomasReference(0), RaviartThomasReference(1), RaviartThomasReference(2)};
  return references[order];
}

FluxSpace::FluxSpace(const TriMesh& mesh, int rt_order)
    : mesh_(&mesh), order_(rt_order), reference_(&rt_reference(rt_order)) {
  const std::size_t per_edge = reference_->edge_dofs_per_edge();
  const std::size_t interior = reference_->interior_dofs();
  const std::size_t nloc = reference_->dim();
  dof_count_ = mesh.num_edges() * per_edge + mesh.num_triangles() * interior;
  local_to_global_.resize(mesh.num_triangles() * nloc);
  local_signs_.resize(mesh.num_triangles() * nloc);
  const std::size_t interior_base = mesh.num_edges() * per_edge;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    std::size_t* dofs = local_to_global_.data() + t * nloc;
    double* signs = local_signs_.data() + t * nloc;
    std::size_t i = 0;
    for (const EdgeRef& ref : mesh.triangle_edges(t)) {
      double sign = ref.sign;
      for (std::size_t j = 0; j < per_edge; ++j, ++i) {
        // L_j(1 - s) = (-1)^j L_j(s): moment j flips by sign^(j+1).
        dofs[i] = ref.edge * per_edge + j;
        signs[i] = sign;
        sign *= ref.sign;
      }
    }
    for (std::size_t k = 0; k < interior; ++k, ++i) {
      dofs[i] = interior_base + t * interior + k;
      signs[i] = 1.0;
    }
  }
}

FluxBasisValues eval_flux_basis(const FluxSpace& space, std::size_t tri,
                                std::span<const Vec2> ref_pts) {
  const ElementMap map = element_map(space.mesh(), tri);
  const std::size_t nb = space.local_dof_count();
  const std::span<const double> signs = space.local_signs(tri);
  FluxBasisValues out;
  out.n_basis = nb;
  out.values.resize(ref_pts.size() * nb);
  out.divergences.resize(ref_pts.size() * nb);
  const double inv_det = 1.0 / map.det;
  for (std::size_t q = 0; q < ref_pts.size(); ++q) {
    const std::span<Vec2> vals(out.values.data() + q * nb, nb);
    const std::span<double> divs(out.divergences.data() + q * nb, nb);
    space.reference().evaluate(ref_pts[q], vals, divs);
    for (std::size_t k = 0; k < nb; ++k) {
      const double s = signs[k] * inv_det;
      vals[k] = s * (map.jacobian * vals[k]);
      divs[k] *= s;
    }
  }
  return out;
}

std::vector<double> interpolate_flux(const FluxSpace& space,
                                     const std::function<Vec2(Vec2)>& y) {
  const TriMesh& mesh = space.mesh();
  const RaviartThomasReference& ref = space.reference();
  const std::size_t per_edge = ref.edge_dofs_per_edge();
  std::vector<double> out(space.dof_count(), 0.0);

  const LineRule line = gauss_legendre(10);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 a = mesh.vertex(mesh.edge(e)[0]);
    const Vec2 t = mesh.vertex(mesh.edge(e)[1]) - a;
    const Vec2 n{t.y, -t.x};
    for (std::size_t j = 0; j < per_edge; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < line.size(); ++q) {
        const double s = line.points[q];
        acc += line.weights[q] * dot(y(a + s * t), n) * shifted_legendre(static_cast<int>(j), s);
      }
      out[e * per_edge + j] = acc;
    }
  }

  const std::size_t interior = ref.interior_dofs();
  if (interior == 0) return out;
  const QuadRule& rule = rule_for_degree(kMaxQuadratureDegree);
  const std::size_t base = mesh.num_edges() * per_edge;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementMap map = element_map(mesh, t);
    std::size_t k = 0;
    for (int deg = 0; deg <= space.order() - 1; ++deg) {
      for (int pa = deg; pa >= 0; --pa) {
        const int pb = deg - pa;
        for (int d = 0; d < 2; ++d, ++k) {
          double acc = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 p = rule.points[q];
            // inverse Piola: v̂ = det J · J^{-1} y
            const Vec2 v = map.det * (map.inverse_jacobian * y(map.to_physical(p)));
            acc += rule.weights[q] * (d == 0 ? v.x : v.y) * ipow(p.x, pa) * ipow(p.y, pb);
          }
          out[base + t * interior + k] = acc;
        }
      }
    }
  }
  return out;
}

FluxPointValue eval_flux_field(const FluxSpace& space, std::span<const double> coeffs,
                               std::size_t tri, Vec2 ref) {
  if (coeffs.size() != space.dof_count()) {
    throw Incompatible("eval_flux_field: coefficient vector has wrong length");
  }
  const std::array<Vec2, 1> pts{ref};
  const FluxBasisValues basis = eval_flux_basis(space, tri, pts);
  const std::span<const std::size_t> dofs = space.local_dofs(tri);
  FluxPointValue out;
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    out.value += coeffs[dofs[k]] * basis.value(0, k);
    out.divergence += coeffs[dofs[k]] * basis.divergence(0, k);
  }
  return out;
}

}  // namespace fluxmaj
