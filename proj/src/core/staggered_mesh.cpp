#include "core/staggered_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace sdg {

ElementGeometry make_element_geometry(const Eigen::Vector2d& v0, const Eigen::Vector2d& v1,
                                      const Eigen::Vector2d& v2) {
  ElementGeometry geo;
  geo.origin = v0;
  geo.jac.col(0) = v1 - v0;
  geo.jac.col(1) = v2 - v0;
  geo.det_jac = geo.jac.determinant();
  if (!(geo.det_jac > 0))
    throw std::invalid_argument("make_element_geometry: triangle is degenerate or negatively oriented");
  geo.inv_jac_t = geo.jac.inverse().transpose();
  return geo;
}

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::PrimalInterior: return "primal-interior";
    case EdgeKind::PrimalBoundary: return "primal-boundary";
    case EdgeKind::Dual: return "dual";
  }
  return "unknown";
}

namespace {

void rebuild_initial_edges(InitialMesh& mesh) {
  mesh.edges.clear();
  std::map<std::pair<int, int>, int> index;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int l = 0; l < 3; ++l) {
      const int a = std::min(tri[l], tri[(l + 1) % 3]);
      const int b = std::max(tri[l], tri[(l + 1) % 3]);
      auto [it, inserted] = index.try_emplace({a, b}, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        InitialEdge e;
        e.a = a;
        e.b = b;
        e.tri[0] = static_cast<int>(t);
        mesh.edges.push_back(e);
      } else {
        InitialEdge& e = mesh.edges[it->second];
        if (e.tri[1] >= 0)
          throw std::invalid_argument("initial mesh not conforming: edge shared by more than two triangles");
        e.tri[1] = static_cast<int>(t);
      }
    }
  }
}

double triangle_signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            const Eigen::Vector2d& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

Eigen::Vector2d subtriangle_centroid(const StaggeredMesh& mesh, int t) {
  const auto& v = mesh.tris[t].v;
  return (mesh.vertices[v[0]] + mesh.vertices[v[1]] + mesh.vertices[v[2]]) / 3.0;
}

}  // namespace

InitialMesh build_structured_initial(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_initial: n must be >= 1");

  InitialMesh mesh;
  const int stride = n + 1;
  mesh.vertices.reserve(static_cast<size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto vid = [stride](int i, int j) { return j * stride + i; };
  mesh.triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      // every cell split along the upper-left to lower-right diagonal
      mesh.triangles.push_back({v00, v10, v01});
      mesh.triangles.push_back({v10, v11, v01});
    }
  }
  rebuild_initial_edges(mesh);
  return mesh;
}

void validate_initial_mesh(const InitialMesh& mesh) {
  const int n_verts = static_cast<int>(mesh.vertices.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int l = 0; l < 3; ++l) {
      if (tri[l] < 0 || tri[l] >= n_verts)
        throw std::invalid_argument("initial mesh: vertex index out of range in triangle " + std::to_string(t));
      if (tri[l] == tri[(l + 1) % 3])
        throw std::invalid_argument("initial mesh: repeated vertex in triangle " + std::to_string(t));
    }
    const double area =
        triangle_signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    if (!(area > 0))
      throw std::invalid_argument("initial mesh: triangle " + std::to_string(t) +
                                  " is degenerate or negatively oriented");
  }

  InitialMesh copy = mesh;
  rebuild_initial_edges(copy);  // throws if an edge has more than two triangles

  // no hanging nodes: no vertex may sit in the interior of an edge
  for (const auto& e : copy.edges) {
    const Eigen::Vector2d pa = mesh.vertices[e.a];
    const Eigen::Vector2d d = mesh.vertices[e.b] - pa;
    const double len2 = d.squaredNorm();
    for (int v = 0; v < n_verts; ++v) {
      if (v == e.a || v == e.b) continue;
      const Eigen::Vector2d r = mesh.vertices[v] - pa;
      const double cross = d.x() * r.y() - d.y() * r.x();
      if (cross * cross > 1e-24 * len2 * r.squaredNorm()) continue;
      const double t = r.dot(d) / len2;
      if (t > 1e-12 && t < 1.0 - 1e-12)
        throw std::invalid_argument("initial mesh not conforming: vertex " + std::to_string(v) +
                                    " lies inside an edge");
    }
  }
}

Eigen::Vector2d centroid_point(const std::array<Eigen::Vector2d, 3>& verts) {
  return (verts[0] + verts[1] + verts[2]) / 3.0;
}

Eigen::Vector2d incenter_point(const std::array<Eigen::Vector2d, 3>& verts) {
  const double a = (verts[2] - verts[1]).norm();
  const double b = (verts[0] - verts[2]).norm();
  const double c = (verts[1] - verts[0]).norm();
  return (a * verts[0] + b * verts[1] + c * verts[2]) / (a + b + c);
}

StaggeredMesh subdivide(const InitialMesh& initial, const InteriorPointRule& rule) {
  validate_initial_mesh(initial);

  StaggeredMesh mesh;
  mesh.n_initial_vertices = static_cast<int>(initial.vertices.size());
  mesh.vertices = initial.vertices;

  const int n_macros = static_cast<int>(initial.triangles.size());
  mesh.tris.reserve(static_cast<size_t>(3) * n_macros);
  mesh.s_map.resize(n_macros);
  mesh.s_dual_edges.resize(n_macros);

  std::map<std::pair<int, int>, int> initial_edge_index;
  for (size_t p = 0; p < initial.edges.size(); ++p)
    initial_edge_index[{initial.edges[p].a, initial.edges[p].b}] = static_cast<int>(p);

  // interior points and subtriangles
  for (int t = 0; t < n_macros; ++t) {
    const auto& tri = initial.triangles[t];
    const std::array<Eigen::Vector2d, 3> verts{initial.vertices[tri[0]], initial.vertices[tri[1]],
                                               initial.vertices[tri[2]]};
    const Eigen::Vector2d nu = rule(verts);

    // strictly inside, otherwise a subtriangle degenerates
    for (int l = 0; l < 3; ++l) {
      const double part = triangle_signed_area(verts[l], verts[(l + 1) % 3], nu);
      const double whole = triangle_signed_area(verts[0], verts[1], verts[2]);
      if (!(part > 1e-12 * whole))
        throw std::invalid_argument("subdivide: interior point rule left triangle " + std::to_string(t) +
                                    " (point not strictly inside)");
    }

    const int nu_index = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(nu);

    for (int l = 0; l < 3; ++l) {
      SubTriangle sub;
      sub.v = {tri[l], tri[(l + 1) % 3], nu_index};
      sub.macro_s = t;
      const int a = std::min(tri[l], tri[(l + 1) % 3]);
      const int b = std::max(tri[l], tri[(l + 1) % 3]);
      sub.macro_r = initial_edge_index.at({a, b});
      mesh.s_map[t][l] = static_cast<int>(mesh.tris.size());
      mesh.tris.push_back(sub);
    }
  }

  // primal edges, in initial-mesh edge order
  mesh.r_map.resize(initial.edges.size());
  for (size_t p = 0; p < initial.edges.size(); ++p) {
    Edge edge;
    edge.a = initial.edges[p].a;
    edge.b = initial.edges[p].b;
    edge.kind = initial.edges[p].boundary() ? EdgeKind::PrimalBoundary : EdgeKind::PrimalInterior;
    mesh.primal_edges.push_back(static_cast<int>(mesh.edges.size()));
    if (edge.kind == EdgeKind::PrimalInterior)
      mesh.interior_primal_edges.push_back(static_cast<int>(mesh.edges.size()));
    mesh.edges.push_back(edge);
  }
  for (int t = 0; t < mesh.n_tris(); ++t) {
    Edge& edge = mesh.edges[mesh.tris[t].macro_r];
    if (edge.tri[0] < 0)
      edge.tri[0] = t;
    else
      edge.tri[1] = t;
  }
  for (size_t p = 0; p < initial.edges.size(); ++p) {
    Edge& edge = mesh.edges[p];
    if (edge.tri[1] >= 0 && edge.tri[0] > edge.tri[1]) std::swap(edge.tri[0], edge.tri[1]);
    mesh.r_map[p] = edge.tri;
  }

  // dual edges, grouped per macro
  for (int t = 0; t < n_macros; ++t) {
    const auto& tri = initial.triangles[t];
    const int nu_index = mesh.n_initial_vertices + t;
    for (int l = 0; l < 3; ++l) {
      Edge edge;
      edge.a = tri[l];
      edge.b = nu_index;
      edge.kind = EdgeKind::Dual;
      edge.tri = {mesh.s_map[t][(l + 2) % 3], mesh.s_map[t][l]};
      if (edge.tri[0] > edge.tri[1]) std::swap(edge.tri[0], edge.tri[1]);
      mesh.s_dual_edges[t][l] = static_cast<int>(mesh.edges.size());
      mesh.dual_edges.push_back(static_cast<int>(mesh.edges.size()));
      mesh.edges.push_back(edge);
    }
  }

  // lengths and oriented normals
  for (auto& edge : mesh.edges) {
    const Eigen::Vector2d pa = mesh.vertices[edge.a];
    const Eigen::Vector2d pb = mesh.vertices[edge.b];
    edge.length = (pb - pa).norm();
    const Eigen::Vector2d tangent = (pb - pa) / edge.length;
    Eigen::Vector2d normal(tangent.y(), -tangent.x());
    if (edge.interior()) {
      const Eigen::Vector2d d = subtriangle_centroid(mesh, edge.tri[1]) - subtriangle_centroid(mesh, edge.tri[0]);
      if (normal.dot(d) < 0) normal = -normal;
    } else {
      const Eigen::Vector2d d = subtriangle_centroid(mesh, edge.tri[0]) - 0.5 * (pa + pb);
      if (normal.dot(d) > 0) normal = -normal;
    }
    edge.normal = normal;
  }

  for (int t = 0; t < mesh.n_tris(); ++t) {
    const auto& v = mesh.tris[t].v;
    for (int l = 0; l < 3; ++l) {
      const double len = (mesh.vertices[v[(l + 1) % 3]] - mesh.vertices[v[l]]).norm();
      mesh.h = std::max(mesh.h, len);
    }
  }
  return mesh;
}

EdgeClassification classify_edges(const StaggeredMesh& mesh) {
  EdgeClassification cls;
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    switch (mesh.edges[e].kind) {
      case EdgeKind::PrimalInterior:
        cls.f_u.push_back(static_cast<int>(e));
        cls.f_u0.push_back(static_cast<int>(e));
        break;
      case EdgeKind::PrimalBoundary:
        cls.f_u.push_back(static_cast<int>(e));
        break;
      case EdgeKind::Dual:
        cls.f_p.push_back(static_cast<int>(e));
        break;
    }
  }
  return cls;
}

ElementGeometry StaggeredMesh::geometry(int tri) const {
  const auto& v = tris[tri].v;
  return make_element_geometry(vertices[v[0]], vertices[v[1]], vertices[v[2]]);
}

int StaggeredMesh::locate(const Eigen::Vector2d& point, double tol) const {
  for (int t = 0; t < n_tris(); ++t) {
    const Eigen::Vector2d ref = geometry(t).to_reference(point);
    if (ref.x() >= -tol && ref.y() >= -tol && ref.x() + ref.y() <= 1.0 + tol) return t;
  }
  return -1;
}

double min_angle_degrees(const StaggeredMesh& mesh) {
  double min_angle = 180.0;
  for (const auto& tri : mesh.tris) {
    for (int l = 0; l < 3; ++l) {
      const Eigen::Vector2d a = mesh.vertices[tri.v[l]];
      const Eigen::Vector2d u = (mesh.vertices[tri.v[(l + 1) % 3]] - a).normalized();
      const Eigen::Vector2d w = (mesh.vertices[tri.v[(l + 2) % 3]] - a).normalized();
      const double angle = std::acos(std::clamp(u.dot(w), -1.0, 1.0)) * 180.0 / M_PI;
      min_angle = std::min(min_angle, angle);
    }
  }
  return min_angle;
}

void dump_mesh(const StaggeredMesh& mesh, std::ostream& out) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const auto& t : mesh.tris) {
    std::snprintf(buf, sizeof(buf), "t %d %d %d %d\n", t.v[0], t.v[1], t.v[2], t.macro_s);
    out << buf;
  }
  for (const auto& e : mesh.edges) {
    std::snprintf(buf, sizeof(buf), "e %d %d %s\n", e.a, e.b, to_string(e.kind).c_str());
    out << buf;
  }
}

}  // namespace sdg
