#include "vem/dofspace.hpp"

#include <algorithm>
#include <cctype>

#include "vem/error.hpp"

namespace vem {

Space parse_space(std::string_view name) {
  std::string key;
  for (char ch : name)
    if (std::isalnum(static_cast<unsigned char>(ch)))
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (key == "c1nc") return Space::C1nc;
  if (key == "c1mod") return Space::C1mod;
  if (key == "c1c0") return Space::C1C0;
  throw Error("config", "unknown space '" + std::string(name) + "' (expected c1nc, c1mod, c1c0)");
}

std::string space_name(Space space) {
  switch (space) {
    case Space::C1nc: return "C1-nc";
    case Space::C1mod: return "C1-mod";
    case Space::C1C0: return "C1-C0";
  }
  return "?";
}

DofTuple space_tuple(Space space, int order) {
  const int l = order;
  auto clamp = [](int d) { return std::max(d, -1); };
  switch (space) {
    case Space::C1nc:
    case Space::C1mod: return {0, -1, clamp(l - 3), clamp(l - 2), clamp(l - 4)};
    case Space::C1C0: return {0, -1, clamp(l - 2), clamp(l - 2), clamp(l - 4)};
  }
  return {};
}

DofTuple extended_tuple(int order) { return {0, -1, order - 2, order - 2, order}; }

void validate_tuple(const DofTuple& t, int l) {
  auto fail = [&](const std::string& why) {
    throw Error("dofs", "inadmissible dof tuple (" + std::to_string(t.d0v) + "," +
                            std::to_string(t.d1v) + "," + std::to_string(t.d0e) + "," +
                            std::to_string(t.d1e) + "," + std::to_string(t.d0i) + ") for l=" +
                            std::to_string(l) + ": " + why);
  };
  if (l < 2) fail("order must be at least 2");
  if (t.d0v != 0 || t.d1v != -1) fail("only vertex values are supported (d0v = 0, d1v = -1)");
  if (t.d0e > l - 2 || t.d1e > l - 2) fail("edge moments above l-2");
  if (t.d0i > l) fail("interior moments above l");
  if (t.d0e < std::max(l - 3, -1)) fail("d0e below l-3");
  if (t.d1e < l - 2) fail("d1e below l-2");
  if (t.d0i < std::max(l - 4, -1)) fail("d0i below l-4");
}

int local_dof_count(const DofTuple& t, int n_edges) {
  const int nv = t.d0v >= 0 ? n_edges : 0;
  return nv + n_edges * ((t.d0e + 1) + (t.d1e + 1)) + CellBasis::dim(t.d0i);
}

int extended_dof_count(int order, int n_edges) {
  return n_edges * (2 * order - 1) + CellBasis::dim(order);
}

std::vector<LocalDof> local_dofs(const DofTuple& t, const CellGeometry& cell) {
  std::vector<LocalDof> dofs;
  const int n = static_cast<int>(cell.vertices.size());
  if (t.d0v >= 0)
    for (int v = 0; v < n; ++v) dofs.push_back({DofKind::vertex_value, v, 0, 1.0});
  for (int e = 0; e < n; ++e) {
    const double len = cell.edges[e].length;
    for (int k = 0; k <= t.d0e; ++k) dofs.push_back({DofKind::edge_value_moment, e, k, 1.0 / len});
    for (int k = 0; k <= t.d1e; ++k) dofs.push_back({DofKind::edge_normal_moment, e, k, 1.0});
  }
  for (int a = 0; a < CellBasis::dim(t.d0i); ++a)
    dofs.push_back({DofKind::interior_moment, 0, a, 1.0 / cell.area});
  return dofs;
}

namespace {

// Parameter of a point on the canonical edge frame.
struct EdgeSample {
  Point x;
  double t;
  double w;
};

std::vector<EdgeSample> edge_samples(const CellEdgeGeometry& e, int degree) {
  const QuadRule g = gauss_legendre(std::max(1, (degree + 2) / 2));
  std::vector<EdgeSample> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.points[i].x();
    out.push_back({0.5 * (e.start + e.end) + 0.5 * t * (e.end - e.start), t,
                   0.5 * e.length * g.weights[i]});
  }
  return out;
}

}  // namespace

Eigen::VectorXd dofs_of_function(const DofTuple& t, const CellGeometry& cell,
                                 const SmoothFunction& g, int quad_degree) {
  const auto dofs = local_dofs(t, cell);
  Eigen::VectorXd out(static_cast<Eigen::Index>(dofs.size()));
  const int edge_order = std::max({t.d0e, t.d1e, 0});
  const CellBasis interior(std::max(t.d0i, 0), cell);
  QuadRule rule;
  if (t.d0i >= 0) rule = cell_quadrature(cell, std::min(quad_degree, max_quadrature_degree));
  Eigen::VectorXd interior_moments;
  if (t.d0i >= 0) {
    interior_moments = Eigen::VectorXd::Zero(CellBasis::dim(t.d0i));
    for (std::size_t q = 0; q < rule.size(); ++q)
      interior_moments +=
          rule.weights[q] * g.value(rule.points[q]) * interior.evaluate(rule.points[q], t.d0i);
  }
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const LocalDof& d = dofs[i];
    switch (d.kind) {
      case DofKind::vertex_value: out(i) = g.value(cell.vertices[d.entity]); break;
      case DofKind::edge_value_moment:
      case DofKind::edge_normal_moment: {
        const CellEdgeGeometry& e = cell.edges[d.entity];
        double s = 0.0;
        for (const auto& p : edge_samples(e, quad_degree)) {
          const double lk = EdgeBasis::legendre(edge_order, p.t)(d.moment);
          const double f = d.kind == DofKind::edge_value_moment ? g.value(p.x)
                                                                : g.gradient(p.x).dot(e.normal);
          s += p.w * f * lk;
        }
        out(i) = d.scaling * s;
        break;
      }
      case DofKind::interior_moment: out(i) = d.scaling * interior_moments(d.moment); break;
    }
  }
  return out;
}

Eigen::MatrixXd dofs_of_polynomials(const DofTuple& t, const CellGeometry& cell,
                                    const CellBasis& basis) {
  const auto dofs = local_dofs(t, cell);
  const int l = basis.order();
  const int np = basis.size();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dofs.size()), np);
  const int edge_order = std::max({t.d0e, t.d1e, 0});
  const int degree = std::min(2 * l + 2, max_quadrature_degree);

  Eigen::MatrixXd interior;
  if (t.d0i >= 0) {
    const QuadRule rule = cell_quadrature(cell, degree);
    interior = Eigen::MatrixXd::Zero(CellBasis::dim(t.d0i), np);
    for (std::size_t q = 0; q < rule.size(); ++q)
      interior.noalias() += rule.weights[q] * basis.evaluate(rule.points[q], t.d0i) *
                            basis.evaluate(rule.points[q]).transpose();
  }

  // per-edge moment tables: value (k x alpha) and outward normal derivative
  std::vector<Eigen::MatrixXd> value_moments(cell.edges.size()), normal_moments(cell.edges.size());
  for (std::size_t e = 0; e < cell.edges.size(); ++e) {
    const auto& eg = cell.edges[e];
    value_moments[e] = Eigen::MatrixXd::Zero(edge_order + 1, np);
    normal_moments[e] = Eigen::MatrixXd::Zero(edge_order + 1, np);
    for (const auto& p : edge_samples(eg, degree)) {
      const Eigen::VectorXd lk = EdgeBasis::legendre(edge_order, p.t);
      const Eigen::VectorXd m = basis.evaluate(p.x);
      const Eigen::RowVectorXd dn = eg.normal.transpose() * basis.gradient(p.x, l);
      value_moments[e].noalias() += p.w * lk * m.transpose();
      normal_moments[e].noalias() += p.w * lk * dn;
    }
  }

  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const LocalDof& d = dofs[i];
    switch (d.kind) {
      case DofKind::vertex_value:
        D.row(i) = basis.evaluate(cell.vertices[d.entity]).transpose();
        break;
      case DofKind::edge_value_moment:
        D.row(i) = d.scaling * value_moments[d.entity].row(d.moment);
        break;
      case DofKind::edge_normal_moment:
        D.row(i) = d.scaling * normal_moments[d.entity].row(d.moment);
        break;
      case DofKind::interior_moment: D.row(i) = d.scaling * interior.row(d.moment); break;
    }
  }
  return D;
}

Eigen::VectorXd dofs_of_polynomial(const DofTuple& tuple, const CellGeometry& cell,
                                   const CellBasis& basis, const Eigen::VectorXd& coeffs) {
  return dofs_of_polynomials(tuple, cell, basis) * coeffs;
}

Eigen::VectorXd DofLayout::gather(int cell, const Eigen::VectorXd& global) const {
  const auto& idx = cell_dofs[cell];
  const auto& sg = cell_signs[cell];
  Eigen::VectorXd local(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) local(i) = idx[i] < 0 ? 0.0 : sg[i] * global(idx[i]);
  return local;
}

DofLayout build_global_numbering(const PolyMesh& mesh, const DofTuple& t) {
  DofLayout layout;
  layout.tuple = t;
  const int per_vertex = t.d0v >= 0 ? 1 : 0;
  const int per_edge = (t.d0e + 1) + (t.d1e + 1);
  const int per_cell = CellBasis::dim(t.d0i);

  std::vector<int> vertex_base(mesh.n_vertices(), -1), edge_base(mesh.n_edges(), -1),
      cell_base(mesh.n_cells(), -1);
  int next = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (per_vertex == 0) continue;
    if (mesh.vertex_on_boundary(v)) {
      layout.n_constrained += per_vertex;
    } else {
      vertex_base[v] = next;
      next += per_vertex;
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (per_edge == 0) continue;
    if (mesh.edge(e).boundary) {
      layout.n_constrained += per_edge;
    } else {
      edge_base[e] = next;
      next += per_edge;
    }
  }
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (per_cell == 0) continue;
    cell_base[c] = next;
    next += per_cell;
  }
  layout.n_free = next;

  layout.vertex_scale.assign(mesh.n_vertices(), 0.0);
  std::vector<int> incident(mesh.n_vertices(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int v : mesh.cell_vertices(c)) {
      layout.vertex_scale[v] += mesh.cell_geometry(c).diameter;
      ++incident[v];
    }
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (incident[v] > 0) layout.vertex_scale[v] /= incident[v];

  layout.cell_dofs.resize(mesh.n_cells());
  layout.cell_signs.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry& g = mesh.cell_geometry(c);
    const auto verts = mesh.cell_vertices(c);
    auto& idx = layout.cell_dofs[c];
    auto& sg = layout.cell_signs[c];
    for (const LocalDof& d : local_dofs(t, g)) {
      int gi = -1;
      double s = 1.0;
      switch (d.kind) {
        case DofKind::vertex_value: {
          const int base = vertex_base[verts[d.entity]];
          gi = base < 0 ? -1 : base;
          break;
        }
        case DofKind::edge_value_moment: {
          const int base = edge_base[g.edges[d.entity].edge];
          gi = base < 0 ? -1 : base + d.moment;
          break;
        }
        case DofKind::edge_normal_moment: {
          const int base = edge_base[g.edges[d.entity].edge];
          gi = base < 0 ? -1 : base + (t.d0e + 1) + d.moment;
          s = g.edges[d.entity].sign;
          break;
        }
        case DofKind::interior_moment: gi = cell_base[c] + d.moment; break;
      }
      idx.push_back(gi);
      sg.push_back(s);
    }
  }
  return layout;
}

}  // namespace vem
