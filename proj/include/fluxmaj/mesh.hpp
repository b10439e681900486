#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double length() const { return hi - lo; }
};

struct Rectangle {
  Interval x;
  Interval y;

  [[nodiscard]] double area() const { return x.length() * y.length(); }
};

inline constexpr Rectangle kUnitSquare{{0.0, 1.0}, {0.0, 1.0}};

/// Which diagonal splits each lattice cell into two triangles.
enum class Diagonal {
  kRight,  ///< lower-left to upper-right
  kLeft,   ///< lower-right to upper-left
};

/// Local edge k of a triangle is the edge opposite local vertex k, traversed
/// counterclockwise (v1->v2, v2->v0, v0->v1). `sign` is +1 when that traversal
/// agrees with the global low->high orientation of the edge, -1 otherwise.
struct EdgeRef {
  std::size_t edge = 0;
  int sign = 1;
};

using Triangle = std::array<std::size_t, 3>;
using Edge = std::array<std::size_t, 2>;

/// Conforming 2D triangulation with a canonical edge enumeration.
///
/// Triangles are stored counterclockwise. Edges are sorted lexicographically
/// by (low vertex, high vertex) and oriented low -> high. Immutable once built.
class TriMesh {
 public:
  /// Builds edge connectivity; throws InvalidArgument on non-positive area or
  /// out-of-range vertex indices.
  TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t num_triangles() const { return triangles_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }

  [[nodiscard]] std::span<const Vec2> vertices() const { return vertices_; }
  [[nodiscard]] std::span<const Triangle> triangles() const { return triangles_; }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }

  [[nodiscard]] const Vec2& vertex(std::size_t v) const { return vertices_[v]; }
  [[nodiscard]] const Triangle& triangle(std::size_t t) const { return triangles_[t]; }
  [[nodiscard]] const Edge& edge(std::size_t e) const { return edges_[e]; }
  [[nodiscard]] const std::array<EdgeRef, 3>& triangle_edges(std::size_t t) const {
    return triangle_edges_[t];
  }

  [[nodiscard]] bool is_boundary_edge(std::size_t e) const { return boundary_edge_[e] != 0; }
  [[nodiscard]] bool is_boundary_vertex(std::size_t v) const { return boundary_vertex_[v] != 0; }

  /// Triangles sharing edge e (one entry for boundary edges).
  [[nodiscard]] std::span<const std::size_t> edge_triangles(std::size_t e) const;

  /// Signed area, positive for every stored triangle.
  [[nodiscard]] double area(std::size_t t) const;

  /// Index of the edge joining a and b, or num_edges() if absent.
  [[nodiscard]] std::size_t find_edge(std::size_t a, std::size_t b) const;

  friend bool operator==(const TriMesh& a, const TriMesh& b) {
    return a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_;
  }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeRef, 3>> triangle_edges_;
  std::vector<std::size_t> edge_triangle_offsets_;
  std::vector<std::size_t> edge_triangle_list_;
  std::vector<char> boundary_edge_;
  std::vector<char> boundary_vertex_;
};

/// Structured triangulation of a rectangle: (nx+1)(ny+1) vertices numbered
/// row-major from the lower-left corner, two triangles per lattice cell.
TriMesh build_rect_mesh(Interval x_range, Interval y_range, std::size_t nx, std::size_t ny,
                        Diagonal diagonal = Diagonal::kRight);

inline TriMesh build_rect_mesh(const Rectangle& rect, std::size_t nx, std::size_t ny,
                               Diagonal diagonal = Diagonal::kRight) {
  return build_rect_mesh(rect.x, rect.y, nx, ny, diagonal);
}

/// Plain-text dump with `vertices`, `triangles` and `edges` sections.
void write_mesh_text(const TriMesh& mesh, std::ostream& out);

}  // namespace fluxmaj
