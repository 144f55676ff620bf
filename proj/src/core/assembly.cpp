#include "core/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace sdg {

namespace {

struct ReferenceData {
  QuadratureRule rule;
  Eigen::MatrixXd vals, dx, dy;  // nq x m at reference points
};

ReferenceData make_reference_data(const PolynomialBasis& basis, int quad_degree) {
  ReferenceData ref;
  ref.rule = triangle_rule(quad_degree);
  ref.vals = basis.values(ref.rule.points);
  std::tie(ref.dx, ref.dy) = basis.gradients(ref.rule.points);
  return ref;
}

struct ElementData {
  ElementGeometry geo;
  Eigen::VectorXd w;                  // physical quadrature weights
  std::vector<Eigen::Vector2d> pts;   // physical quadrature points
  Eigen::MatrixXd vals, dx, dy;       // physical values/gradients of the scaled basis
};

ElementData make_element_data(const StaggeredMesh& mesh, int tri, const ReferenceData& ref) {
  ElementData ed;
  ed.geo = mesh.geometry(tri);
  const int nq = ref.rule.size();
  ed.w.resize(nq);
  ed.pts.resize(nq);
  for (int q = 0; q < nq; ++q) {
    ed.w(q) = ref.rule.weights[q] * ed.geo.det_jac;
    ed.pts[q] = ed.geo.to_physical(ref.rule.points[q]);
  }
  const double scale = 1.0 / std::sqrt(ed.geo.det_jac);
  ed.vals = scale * ref.vals;
  const Eigen::Matrix2d& it = ed.geo.inv_jac_t;
  ed.dx = scale * (it(0, 0) * ref.dx + it(0, 1) * ref.dy);
  ed.dy = scale * (it(1, 0) * ref.dx + it(1, 1) * ref.dy);
  return ed;
}

struct EdgeTrace {
  Eigen::VectorXd w;  // gauss weights times edge length
  std::vector<Eigen::Vector2d> pts;
};

EdgeTrace make_edge_trace(const StaggeredMesh& mesh, const Edge& edge, const GaussRule1d& rule) {
  EdgeTrace et;
  const int np = static_cast<int>(rule.points.size());
  et.w.resize(np);
  et.pts.resize(np);
  const Eigen::Vector2d pa = mesh.vertex(edge.a);
  const Eigen::Vector2d pb = mesh.vertex(edge.b);
  for (int q = 0; q < np; ++q) {
    et.w(q) = rule.weights[q] * edge.length;
    et.pts[q] = pa + rule.points[q] * (pb - pa);
  }
  return et;
}

Eigen::MatrixXd trace_values(const StaggeredMesh& mesh, const PolynomialBasis& basis, int tri,
                             const std::vector<Eigen::Vector2d>& phys_pts) {
  const ElementGeometry geo = mesh.geometry(tri);
  std::vector<Eigen::Vector2d> ref;
  ref.reserve(phys_pts.size());
  for (const auto& p : phys_pts) ref.push_back(geo.to_reference(p));
  return basis.values(ref) / std::sqrt(geo.det_jac);
}

/// Dense contribution destined for a set of global rows and columns.
struct CooBlock {
  const std::vector<int>* rows = nullptr;
  const std::vector<int>* cols = nullptr;
  Eigen::MatrixXd values;
};

SparseMat blocks_to_matrix(int n_rows, int n_cols, const std::vector<std::vector<CooBlock>>& per_macro) {
  std::vector<Eigen::Triplet<double>> triplets;
  size_t count = 0;
  for (const auto& blocks : per_macro)
    for (const auto& blk : blocks) count += blk.values.size();
  triplets.reserve(count);
  for (const auto& blocks : per_macro)
    for (const auto& blk : blocks)
      for (Eigen::Index i = 0; i < blk.values.rows(); ++i)
        for (Eigen::Index j = 0; j < blk.values.cols(); ++j)
          triplets.emplace_back((*blk.rows)[i], (*blk.cols)[j], blk.values(i, j));
  SparseMat mat(n_rows, n_cols);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

int resolve_quad_degree(int requested, int degree) {
  if (requested >= 0) return requested;
  return default_quadrature_degree(degree);
}

}  // namespace

std::vector<Eigen::MatrixXd> assemble_mass_blocks(const StaggeredMesh& mesh, const DofMap& wh,
                                                  int quad_degree) {
  quad_degree = resolve_quad_degree(quad_degree, wh.degree);
  const ReferenceData ref = make_reference_data(wh.basis, quad_degree);
  const int m = wh.basis.dim;

  std::vector<Eigen::MatrixXd> blocks(wh.macros.size());
  parallel_for(static_cast<int>(wh.macros.size()), [&](int s) {
    const MacroBlock& mb = wh.macros[s];
    const int n_local = static_cast<int>(mb.tris.size()) * wh.local_dim;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_local, n_local);
    for (size_t slot = 0; slot < mb.tris.size(); ++slot) {
      const ElementData ed = make_element_data(mesh, mb.tris[slot], ref);
      const Eigen::MatrixXd a = ed.vals.transpose() * ed.w.asDiagonal() * ed.vals;
      const int o = static_cast<int>(slot) * wh.local_dim;
      local.block(o, o, m, m) = a;
      local.block(o + m, o + m, m, m) = a;
    }
    blocks[s] = mb.null_basis.transpose() * local * mb.null_basis;
  });
  return blocks;
}

SparseMat blocks_to_sparse(const DofMap& map, const std::vector<Eigen::MatrixXd>& blocks) {
  std::vector<Eigen::Triplet<double>> triplets;
  size_t count = 0;
  for (const auto& blk : blocks) count += blk.size();
  triplets.reserve(count);
  for (size_t s = 0; s < blocks.size(); ++s) {
    const auto& global = map.macros[s].global;
    for (Eigen::Index i = 0; i < blocks[s].rows(); ++i)
      for (Eigen::Index j = 0; j < blocks[s].cols(); ++j)
        triplets.emplace_back(global[i], global[j], blocks[s](i, j));
  }
  SparseMat mat(map.n_global, map.n_global);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

SparseMat assemble_mass(const StaggeredMesh& mesh, const DofMap& wh, int quad_degree) {
  return blocks_to_sparse(wh, assemble_mass_blocks(mesh, wh, quad_degree));
}

SparseMat assemble_b(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                     int quad_degree) {
  const int k = std::max(uh.degree, wh.degree);
  quad_degree = resolve_quad_degree(quad_degree, k);
  const ReferenceData ref_u = make_reference_data(uh.basis, quad_degree);
  const ReferenceData ref_w = make_reference_data(wh.basis, quad_degree);
  const GaussRule1d edge_rule = gauss_legendre_01(k + 2);
  const int mu = uh.basis.dim;
  const int mw = wh.basis.dim;

  std::vector<std::vector<CooBlock>> per_macro(wh.macros.size());
  parallel_for(static_cast<int>(wh.macros.size()), [&](int s) {
    const MacroBlock& wmb = wh.macros[s];
    auto& blocks = per_macro[s];

    for (size_t slot = 0; slot < wmb.tris.size(); ++slot) {
      const int tri = wmb.tris[slot];
      const ElementData eu = make_element_data(mesh, tri, ref_u);
      const ElementData ew = make_element_data(mesh, tri, ref_w);
      // int_tau psi_j . grad phi_i
      Eigen::MatrixXd vol(mu, 2 * mw);
      vol.leftCols(mw) = eu.dx.transpose() * ew.w.asDiagonal() * ew.vals;
      vol.rightCols(mw) = eu.dy.transpose() * ew.w.asDiagonal() * ew.vals;

      CooBlock blk;
      blk.rows = &uh.macros[uh.tri_macro[tri]].global;
      blk.cols = &wmb.global;
      blk.values = uh.tri_restriction(tri).transpose() * vol * wh.tri_restriction(tri);
      blocks.push_back(std::move(blk));
    }

    for (int d = 0; d < 3; ++d) {
      const Edge& edge = mesh.edges[mesh.s_dual_edges[s][d]];
      const EdgeTrace et = make_edge_trace(mesh, edge, edge_rule);
      const int t0 = edge.tri[0];

      // V.n is single valued across dual edges; evaluate it from tri[0]
      const Eigen::MatrixXd tvw = trace_values(mesh, wh.basis, t0, et.pts);
      Eigen::MatrixXd tw(static_cast<int>(et.pts.size()), 2 * mw);
      tw.leftCols(mw) = edge.normal.x() * tvw;
      tw.rightCols(mw) = edge.normal.y() * tvw;
      const Eigen::MatrixXd tw_rest = tw * wh.tri_restriction(t0);

      // -int_e (V.n) [phi] with [phi] = phi|tri0 - phi|tri1
      for (int side = 0; side < 2; ++side) {
        const int tri = edge.tri[side];
        const double sign = side == 0 ? -1.0 : 1.0;
        const Eigen::MatrixXd tu = trace_values(mesh, uh.basis, tri, et.pts);
        CooBlock blk;
        blk.rows = &uh.macros[uh.tri_macro[tri]].global;
        blk.cols = &wmb.global;
        blk.values = (uh.tri_restriction(tri).transpose() * tu.transpose()) *
                     (sign * et.w).asDiagonal() * tw_rest;
        blocks.push_back(std::move(blk));
      }
    }
  });
  return blocks_to_matrix(uh.n_global, wh.n_global, per_macro);
}

SparseMat assemble_b_star(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                          int quad_degree) {
  const int k = std::max(uh.degree, wh.degree);
  quad_degree = resolve_quad_degree(quad_degree, k);
  const ReferenceData ref_u = make_reference_data(uh.basis, quad_degree);
  const ReferenceData ref_w = make_reference_data(wh.basis, quad_degree);
  const GaussRule1d edge_rule = gauss_legendre_01(k + 2);
  const int mu = uh.basis.dim;
  const int mw = wh.basis.dim;

  std::vector<std::vector<CooBlock>> per_macro(uh.macros.size());
  parallel_for(static_cast<int>(uh.macros.size()), [&](int r) {
    const MacroBlock& umb = uh.macros[r];
    auto& blocks = per_macro[r];

    for (const int tri : umb.tris) {
      const ElementData eu = make_element_data(mesh, tri, ref_u);
      const ElementData ew = make_element_data(mesh, tri, ref_w);
      // -int_tau phi_i div psi_j
      Eigen::MatrixXd vol(mu, 2 * mw);
      vol.leftCols(mw) = -(eu.vals.transpose() * ew.w.asDiagonal() * ew.dx);
      vol.rightCols(mw) = -(eu.vals.transpose() * ew.w.asDiagonal() * ew.dy);

      CooBlock blk;
      blk.rows = &umb.global;
      blk.cols = &wh.macros[wh.tri_macro[tri]].global;
      blk.values = uh.tri_restriction(tri).transpose() * vol * wh.tri_restriction(tri);
      blocks.push_back(std::move(blk));
    }

    const Edge& edge = mesh.edges[mesh.primal_edges[r]];
    if (edge.interior()) {
      const EdgeTrace et = make_edge_trace(mesh, edge, edge_rule);
      // v is single valued across interior primal edges; evaluate from tri[0]
      const Eigen::MatrixXd tu = trace_values(mesh, uh.basis, edge.tri[0], et.pts);
      const Eigen::MatrixXd tu_rest =
          uh.tri_restriction(edge.tri[0]).transpose() * tu.transpose();  // Du x np

      // +int_e v [V.n] with [V.n] = V|tri0 . n - V|tri1 . n
      for (int side = 0; side < 2; ++side) {
        const int tri = edge.tri[side];
        const double sign = side == 0 ? 1.0 : -1.0;
        const Eigen::MatrixXd tvw = trace_values(mesh, wh.basis, tri, et.pts);
        Eigen::MatrixXd tw(static_cast<int>(et.pts.size()), 2 * mw);
        tw.leftCols(mw) = edge.normal.x() * tvw;
        tw.rightCols(mw) = edge.normal.y() * tvw;

        CooBlock blk;
        blk.rows = &umb.global;
        blk.cols = &wh.macros[wh.tri_macro[tri]].global;
        blk.values = tu_rest * (sign * et.w).asDiagonal() * (tw * wh.tri_restriction(tri));
        blocks.push_back(std::move(blk));
      }
    }
  });
  return blocks_to_matrix(uh.n_global, wh.n_global, per_macro);
}

Eigen::VectorXd assemble_load(const StaggeredMesh& mesh, const DofMap& uh,
                              const std::function<double(double, double)>& f, int quad_degree) {
  quad_degree = resolve_quad_degree(quad_degree, uh.degree);
  const ReferenceData ref = make_reference_data(uh.basis, quad_degree);

  std::vector<Eigen::VectorXd> per_macro(uh.macros.size());
  parallel_for(static_cast<int>(uh.macros.size()), [&](int r) {
    const MacroBlock& mb = uh.macros[r];
    Eigen::VectorXd local(static_cast<Eigen::Index>(mb.tris.size()) * uh.local_dim);
    for (size_t slot = 0; slot < mb.tris.size(); ++slot) {
      const ElementData ed = make_element_data(mesh, mb.tris[slot], ref);
      Eigen::VectorXd fw(ed.w.size());
      for (Eigen::Index q = 0; q < ed.w.size(); ++q)
        fw(q) = ed.w(q) * f(ed.pts[q].x(), ed.pts[q].y());
      local.segment(static_cast<Eigen::Index>(slot) * uh.local_dim, uh.local_dim) =
          ed.vals.transpose() * fw;
    }
    per_macro[r] = mb.null_basis.transpose() * local;
  });

  Eigen::VectorXd load = Eigen::VectorXd::Zero(uh.n_global);
  for (size_t r = 0; r < uh.macros.size(); ++r)
    for (int g = 0; g < uh.macros[r].n_dofs(); ++g) load(uh.macros[r].global[g]) = per_macro[r](g);
  return load;
}

namespace {

[[noreturn]] void throw_nonfinite_coefficient(const char* what, int tri, const Eigen::Vector2d& pt,
                                              const Eigen::Vector2d& g) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s is not finite on subtriangle %d at point (%.6g, %.6g), G = (%.6g, %.6g)", what,
                tri, pt.x(), pt.y(), g.x(), g.y());
  throw std::runtime_error(buf);
}

}  // namespace

Eigen::VectorXd assemble_nonlinear_moment(const StaggeredMesh& mesh, const DofMap& wh,
                                          const Coefficient& rho, const Eigen::VectorXd& g_hat,
                                          int quad_degree) {
  quad_degree = resolve_quad_degree(quad_degree, wh.degree);
  const ReferenceData ref = make_reference_data(wh.basis, quad_degree);
  const int m = wh.basis.dim;

  std::vector<Eigen::VectorXd> per_macro(wh.macros.size());
  parallel_for(static_cast<int>(wh.macros.size()), [&](int s) {
    const MacroBlock& mb = wh.macros[s];
    const Eigen::VectorXd local_coeffs = mb.null_basis * wh.gather(mb, g_hat);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(local_coeffs.size());
    for (size_t slot = 0; slot < mb.tris.size(); ++slot) {
      const int tri = mb.tris[slot];
      const ElementData ed = make_element_data(mesh, tri, ref);
      const int o = static_cast<int>(slot) * wh.local_dim;
      const Eigen::VectorXd gx = ed.vals * local_coeffs.segment(o, m);
      const Eigen::VectorXd gy = ed.vals * local_coeffs.segment(o + m, m);
      Eigen::VectorXd ax(ed.w.size()), ay(ed.w.size());
      for (Eigen::Index q = 0; q < ed.w.size(); ++q) {
        const Eigen::Vector2d g(gx(q), gy(q));
        const double a = rho.rho(g);
        if (!std::isfinite(a)) throw_nonfinite_coefficient("rho(G_h)", tri, ed.pts[q], g);
        ax(q) = ed.w(q) * a * gx(q);
        ay(q) = ed.w(q) * a * gy(q);
      }
      local.segment(o, m) = ed.vals.transpose() * ax;
      local.segment(o + m, m) = ed.vals.transpose() * ay;
    }
    per_macro[s] = mb.null_basis.transpose() * local;
  });

  Eigen::VectorXd result = Eigen::VectorXd::Zero(wh.n_global);
  for (size_t s = 0; s < wh.macros.size(); ++s)
    for (int g = 0; g < wh.macros[s].n_dofs(); ++g)
      result(wh.macros[s].global[g]) = per_macro[s](g);
  return result;
}

std::vector<Eigen::MatrixXd> assemble_nonlinear_derivative_blocks(const StaggeredMesh& mesh,
                                                                  const DofMap& wh,
                                                                  const Coefficient& rho,
                                                                  const Eigen::VectorXd& g_hat,
                                                                  int quad_degree) {
  quad_degree = resolve_quad_degree(quad_degree, wh.degree);
  const ReferenceData ref = make_reference_data(wh.basis, quad_degree);
  const int m = wh.basis.dim;

  std::vector<Eigen::MatrixXd> blocks(wh.macros.size());
  parallel_for(static_cast<int>(wh.macros.size()), [&](int s) {
    const MacroBlock& mb = wh.macros[s];
    const Eigen::VectorXd local_coeffs = mb.null_basis * wh.gather(mb, g_hat);
    const int n_local = static_cast<int>(local_coeffs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_local, n_local);
    for (size_t slot = 0; slot < mb.tris.size(); ++slot) {
      const int tri = mb.tris[slot];
      const ElementData ed = make_element_data(mesh, tri, ref);
      const int o = static_cast<int>(slot) * wh.local_dim;
      const Eigen::VectorXd gx = ed.vals * local_coeffs.segment(o, m);
      const Eigen::VectorXd gy = ed.vals * local_coeffs.segment(o + m, m);
      Eigen::VectorXd waxx(ed.w.size()), waxy(ed.w.size()), wayx(ed.w.size()), wayy(ed.w.size());
      for (Eigen::Index q = 0; q < ed.w.size(); ++q) {
        const Eigen::Vector2d g(gx(q), gy(q));
        const double a = rho.rho(g);
        const Eigen::Vector2d da = rho.grad_rho(g);
        if (!std::isfinite(a) || !da.allFinite())
          throw_nonfinite_coefficient("rho(G_h) or grad rho(G_h)", tri, ed.pts[q], g);
        // entry (i in comp ci, j in comp cj): rho delta_{ci,cj} + da_cj * G_ci
        waxx(q) = ed.w(q) * (a + da.x() * g.x());
        waxy(q) = ed.w(q) * da.y() * g.x();
        wayx(q) = ed.w(q) * da.x() * g.y();
        wayy(q) = ed.w(q) * (a + da.y() * g.y());
      }
      local.block(o, o, m, m) = ed.vals.transpose() * waxx.asDiagonal() * ed.vals;
      local.block(o, o + m, m, m) = ed.vals.transpose() * waxy.asDiagonal() * ed.vals;
      local.block(o + m, o, m, m) = ed.vals.transpose() * wayx.asDiagonal() * ed.vals;
      local.block(o + m, o + m, m, m) = ed.vals.transpose() * wayy.asDiagonal() * ed.vals;
    }
    blocks[s] = mb.null_basis.transpose() * local * mb.null_basis;
  });
  return blocks;
}

SparseMat assemble_nonlinear_derivative(const StaggeredMesh& mesh, const DofMap& wh,
                                        const Coefficient& rho, const Eigen::VectorXd& g_hat,
                                        int quad_degree) {
  return blocks_to_sparse(wh, assemble_nonlinear_derivative_blocks(mesh, wh, rho, g_hat, quad_degree));
}

Eigen::VectorXd SdgSystem::apply_mass_inverse(const Eigen::VectorXd& x) const {
  Eigen::VectorXd result(x.size());
  for (size_t s = 0; s < wh->macros.size(); ++s) {
    const MacroBlock& mb = wh->macros[s];
    const Eigen::VectorXd solved = mass_llt[s].solve(wh->gather(mb, x));
    for (int g = 0; g < mb.n_dofs(); ++g) result(mb.global[g]) = solved(g);
  }
  return result;
}

std::vector<Eigen::MatrixXd> SdgSystem::mass_inverse_times(
    const std::vector<Eigen::MatrixXd>& blocks) const {
  std::vector<Eigen::MatrixXd> result(blocks.size());
  for (size_t s = 0; s < blocks.size(); ++s) result[s] = mass_llt[s].solve(blocks[s]);
  return result;
}

SdgSystem build_system(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                       const std::function<double(double, double)>& f, int quad_degree) {
  SdgSystem sys;
  sys.mesh = &mesh;
  sys.uh = &uh;
  sys.wh = &wh;
  sys.quad_degree = resolve_quad_degree(quad_degree, std::max(uh.degree, wh.degree));

  sys.mass_blocks = assemble_mass_blocks(mesh, wh, sys.quad_degree);
  sys.mass = blocks_to_sparse(wh, sys.mass_blocks);
  sys.mass_llt.reserve(sys.mass_blocks.size());
  for (size_t s = 0; s < sys.mass_blocks.size(); ++s) {
    sys.mass_llt.emplace_back(sys.mass_blocks[s]);
    if (sys.mass_llt.back().info() != Eigen::Success)
      throw std::runtime_error("build_system: mass block " + std::to_string(s) +
                               " is not SPD (dof map defect)");
  }
  sys.b = assemble_b(mesh, uh, wh, sys.quad_degree);
  sys.load = assemble_load(mesh, uh, f, sys.quad_degree);
  return sys;
}

void dump_matrix_coo(const SparseMat& matrix, std::ostream& out) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(matrix.nonZeros());
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMat::InnerIterator it(matrix, k); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  char buf[128];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(e.row()),
                  static_cast<int>(e.col()), e.value());
    out << buf;
  }
}

}  // namespace sdg
