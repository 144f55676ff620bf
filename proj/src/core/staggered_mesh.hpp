#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdg {

/// Affine map from the reference triangle onto a physical triangle.
struct ElementGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jac;        // columns: v1 - v0, v2 - v0
  Eigen::Matrix2d inv_jac_t;  // transpose of jac^{-1}
  double det_jac = 0;         // positive for CCW vertices

  double area() const { return 0.5 * det_jac; }
  Eigen::Vector2d to_physical(const Eigen::Vector2d& ref) const { return origin + jac * ref; }
  Eigen::Vector2d to_reference(const Eigen::Vector2d& phys) const {
    return inv_jac_t.transpose() * (phys - origin);
  }
};

ElementGeometry make_element_geometry(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1,
                                      const Eigen::Vector2d& v2);

struct InitialEdge {
  int a = -1, b = -1;              // vertex indices, a < b
  std::array<int, 2> tri{-1, -1};  // adjacent initial triangles
  bool boundary() const { return tri[1] < 0; }
};

/// Conforming triangulation of the domain; the coarse mesh the staggered
/// construction starts from.
struct InitialMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex triples
  std::vector<InitialEdge> edges;
};

/// Uniform N x N grid on the unit square, each cell split along the
/// lower-left to upper-right diagonal. Throws on n < 1.
InitialMesh build_structured_initial(int n);

/// Rebuilds the edge table and checks conformity (each edge borders one or
/// two triangles, no vertex lies in the interior of an edge), positive
/// orientation and nonzero area. Throws std::invalid_argument on violation.
void validate_initial_mesh(const InitialMesh& mesh);

enum class EdgeKind { PrimalInterior, PrimalBoundary, Dual };

std::string to_string(EdgeKind kind);

struct Edge {
  int a = -1, b = -1;  // vertex indices
  EdgeKind kind = EdgeKind::Dual;
  Eigen::Vector2d normal;          // unit; boundary: outward, interior: tri[0] -> tri[1]
  std::array<int, 2> tri{-1, -1};  // adjacent subtriangles, tri[0] < tri[1]
  double length = 0;

  bool interior() const { return tri[1] >= 0; }
};

struct SubTriangle {
  std::array<int, 3> v{-1, -1, -1};  // CCW
  int macro_s = -1;                  // first-type macro = parent initial triangle
  int macro_r = -1;                  // second-type macro = its primal edge
};

/// One point per initial triangle, given its vertex coordinates.
using InteriorPointRule = std::function<Eigen::Vector2d(const std::array<Eigen::Vector2d, 3>&)>;

Eigen::Vector2d centroid_point(const std::array<Eigen::Vector2d, 3>& verts);
Eigen::Vector2d incenter_point(const std::array<Eigen::Vector2d, 3>& verts);

/// Two-level staggered triangulation: every initial triangle is split by an
/// interior point into three subtriangles. Primal edges are the initial
/// mesh edges, dual edges are the ones the subdivision creates.
struct StaggeredMesh {
  std::vector<Eigen::Vector2d> vertices;  // initial vertices, then one interior point per macro
  std::vector<SubTriangle> tris;
  std::vector<Edge> edges;

  std::vector<std::array<int, 3>> s_map;        // initial triangle -> its 3 subtriangles
  std::vector<std::array<int, 2>> r_map;        // primal edge -> 1 or 2 subtriangles
  std::vector<std::array<int, 3>> s_dual_edges; // initial triangle -> its 3 dual edges

  std::vector<int> primal_edges;           // edge index of primal edge p (aligned with r_map)
  std::vector<int> interior_primal_edges;  // subset of primal_edges
  std::vector<int> dual_edges;

  int n_initial_vertices = 0;
  double h = 0;  // max subtriangle diameter

  int n_tris() const { return static_cast<int>(tris.size()); }
  int n_s_macros() const { return static_cast<int>(s_map.size()); }
  int n_r_macros() const { return static_cast<int>(r_map.size()); }

  ElementGeometry geometry(int tri) const;
  Eigen::Vector2d vertex(int v) const { return vertices[v]; }

  /// Subtriangle containing the point (smallest index on ties), or -1.
  int locate(const Eigen::Vector2d& point, double tol = 1e-12) const;
};

StaggeredMesh subdivide(const InitialMesh& initial, const InteriorPointRule& rule = centroid_point);

/// The partition F = F_u (primal) + F_p (dual), with F_u0 the interior
/// primal edges; lists hold indices into mesh.edges.
struct EdgeClassification {
  std::vector<int> f_u;
  std::vector<int> f_u0;
  std::vector<int> f_p;
};

EdgeClassification classify_edges(const StaggeredMesh& mesh);

double min_angle_degrees(const StaggeredMesh& mesh);

/// Line-oriented text dump: `v x y`, `t i j k macro`, `e i j kind`.
void dump_mesh(const StaggeredMesh& mesh, std::ostream& out);

}  // namespace sdg
