#include "fluxmaj/mesh.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>

#include "fluxmaj/errors.hpp"

namespace fluxmaj {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Edge make_edge(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const std::size_t nv = vertices_.size();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (std::size_t v : tri) {
      if (v >= nv) {
        throw InvalidArgument("TriMesh: triangle " + std::to_string(t) +
                              " references missing vertex " + std::to_string(v));
      }
    }
    if (!(signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) > 0.0)) {
      throw InvalidArgument("TriMesh: triangle " + std::to_string(t) +
                            " is not counterclockwise with positive area");
    }
  }

  edges_.reserve(3 * triangles_.size());
  for (const Triangle& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      edges_.push_back(make_edge(tri[(k + 1) % 3], tri[(k + 2) % 3]));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::size_t> counts(edges_.size(), 0);
  triangle_edges_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const std::size_t from = tri[(k + 1) % 3];
      const std::size_t to = tri[(k + 2) % 3];
      const std::size_t e = find_edge(from, to);
      triangle_edges_[t][k] = EdgeRef{e, from < to ? 1 : -1};
      ++counts[e];
    }
  }

  edge_triangle_offsets_.assign(edges_.size() + 1, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (counts[e] > 2) {
      throw InvalidArgument("TriMesh: edge shared by more than two triangles");
    }
    edge_triangle_offsets_[e + 1] = edge_triangle_offsets_[e] + counts[e];
  }
  edge_triangle_list_.resize(edge_triangle_offsets_.back());
  std::vector<std::size_t> fill(edge_triangle_offsets_.begin(), edge_triangle_offsets_.end() - 1);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (const EdgeRef& ref : triangle_edges_[t]) {
      edge_triangle_list_[fill[ref.edge]++] = t;
    }
  }

  boundary_edge_.assign(edges_.size(), 0);
  boundary_vertex_.assign(nv, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (counts[e] == 1) {
      boundary_edge_[e] = 1;
      boundary_vertex_[edges_[e][0]] = 1;
      boundary_vertex_[edges_[e][1]] = 1;
    }
  }
}

std::span<const std::size_t> TriMesh::edge_triangles(std::size_t e) const {
  const std::size_t begin = edge_triangle_offsets_[e];
  return {edge_triangle_list_.data() + begin, edge_triangle_offsets_[e + 1] - begin};
}

double TriMesh::area(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

std::size_t TriMesh::find_edge(std::size_t a, std::size_t b) const {
  const Edge key = make_edge(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return edges_.size();
  return static_cast<std::size_t>(it - edges_.begin());
}

TriMesh build_rect_mesh(Interval x_range, Interval y_range, std::size_t nx, std::size_t ny,
                        Diagonal diagonal) {
  if (nx == 0 || ny == 0) {
    throw InvalidArgument("build_rect_mesh: cell counts must be at least 1");
  }
  if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo)) {
    throw InvalidArgument("build_rect_mesh: empty coordinate interval");
  }

  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    // Hit the upper bound exactly instead of accumulating h.
    const double y = j == ny ? y_range.hi
                             : y_range.lo + y_range.length() * static_cast<double>(j) /
                                                static_cast<double>(ny);
    for (std::size_t i = 0; i <= nx; ++i) {
      const double x = i == nx ? x_range.hi
                               : x_range.lo + x_range.length() * static_cast<double>(i) /
                                                  static_cast<double>(nx);
      vertices.push_back({x, y});
    }
  }

  const auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  std::vector<Triangle> triangles;
  triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t v00 = id(i, j);
      const std::size_t v10 = id(i + 1, j);
      const std::size_t v01 = id(i, j + 1);
      const std::size_t v11 = id(i + 1, j + 1);
      if (diagonal == Diagonal::kRight) {
        triangles.push_back({v00, v10, v11});
        triangles.push_back({v00, v11, v01});
      } else {
        triangles.push_back({v00, v10, v01});
        triangles.push_back({v10, v11, v01});
      }
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

void write_mesh_text(const TriMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const Vec2& v : mesh.vertices()) out << v.x << ' ' << v.y << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const Triangle& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "edges " << mesh.num_edges() << '\n';
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    out << mesh.edge(e)[0] << ' ' << mesh.edge(e)[1] << ' ' << (mesh.is_boundary_edge(e) ? 1 : 0)
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace fluxmaj
