#include "vem/projections.hpp"

#include <Eigen/Dense>

#include "vem/error.hpp"
#include "vem/linsolve.hpp"

namespace vem {

LocalElement::LocalElement(const CellGeometry& cell, const DofTuple& tuple, int order)
    : cell_(&cell),
      tuple_(tuple),
      order_(order),
      basis_(order, cell),
      quadrature_(cell_quadrature(cell, std::min(2 * order + 2, max_quadrature_degree))),
      dofs_(local_dofs(tuple, cell)),
      dof_matrix_(dofs_of_polynomials(tuple, cell, basis_)) {
  const QuadRule g = gauss_legendre(order + 2);
  edge_points_.resize(cell.edges.size());
  for (std::size_t e = 0; e < cell.edges.size(); ++e) {
    const auto& eg = cell.edges[e];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.points[i].x();
      edge_points_[e].push_back(
          {0.5 * (eg.start + eg.end) + 0.5 * t * (eg.end - eg.start), t,
           0.5 * eg.length * g.weights[i]});
    }
  }
}

Eigen::MatrixXd LocalElement::mass(int k) const { return mass_matrix(basis_, k, quadrature_); }

int LocalElement::edge_value_dof(int e, int k) const {
  const int per_edge = (tuple_.d0e + 1) + (tuple_.d1e + 1);
  return n_edges() + e * per_edge + k;
}

int LocalElement::edge_normal_dof(int e, int k) const {
  const int per_edge = (tuple_.d0e + 1) + (tuple_.d1e + 1);
  return n_edges() + e * per_edge + (tuple_.d0e + 1) + k;
}

int LocalElement::interior_dof(int a) const {
  const int per_edge = (tuple_.d0e + 1) + (tuple_.d1e + 1);
  return n_edges() + n_edges() * per_edge + a;
}

int LocalElement::edge_start_vertex(int e) const {
  return cell_->edges[e].sign > 0 ? e : (e + 1) % n_edges();
}

int LocalElement::edge_end_vertex(int e) const {
  return cell_->edges[e].sign > 0 ? (e + 1) % n_edges() : e;
}

double evaluate_edge_polynomial(const Eigen::VectorXd& coeffs, double t) {
  return EdgeBasis::legendre(static_cast<int>(coeffs.size()) - 1, t).dot(coeffs);
}

namespace {

// (1/|e|) int_e m_alpha L_k for alpha in P_order(K), k <= edge_order.
Eigen::MatrixXd edge_moments(const LocalElement& elem, int e, int edge_order, int order) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(edge_order + 1, CellBasis::dim(order));
  for (const auto& p : elem.edge_points(e))
    q.noalias() += p.w * EdgeBasis::legendre(edge_order, p.t) *
                   elem.basis().evaluate(p.x, order).transpose();
  return q / elem.geometry().edges[e].length;
}

Eigen::MatrixXd solve_mass(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) throw Error("projection", "singular cell mass matrix");
  return llt.solve(rhs);
}

// B(beta, alpha) = int_K m_alpha d_axis m_beta, beta in P_test, alpha in P_trial.
Eigen::MatrixXd derivative_moments(const LocalElement& elem, int axis, int test_order,
                                   int trial_order) {
  const QuadRule& rule = elem.quadrature();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(CellBasis::dim(test_order), CellBasis::dim(trial_order));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto g = elem.basis().gradient(rule.points[q], test_order);
    b.noalias() += rule.weights[q] * g.row(axis).transpose() *
                   elem.basis().evaluate(rule.points[q], trial_order).transpose();
  }
  return b;
}

// Gradient projection from a value projection and per-edge traces given in
// Legendre coefficients of arbitrary degree.
std::array<Eigen::MatrixXd, 2> gradient_from_traces(const LocalElement& elem,
                                                    const Eigen::MatrixXd& value,
                                                    const std::vector<Eigen::MatrixXd>& traces) {
  const int l = elem.order();
  const Eigen::MatrixXd mass = elem.mass(l - 1);
  std::array<Eigen::MatrixXd, 2> out;
  for (int axis = 0; axis < 2; ++axis) {
    Eigen::MatrixXd rhs = -derivative_moments(elem, axis, l - 1, l) * value;
    for (int e = 0; e < elem.n_edges(); ++e) {
      const double ni = elem.geometry().edges[e].normal[axis];
      const int deg = static_cast<int>(traces[e].rows()) - 1;
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(CellBasis::dim(l - 1), deg + 1);
      for (const auto& p : elem.edge_points(e))
        w.noalias() += p.w * elem.basis().evaluate(p.x, l - 1) *
                       EdgeBasis::legendre(deg, p.t).transpose();
      rhs.noalias() += ni * w * traces[e];
    }
    out[axis] = solve_mass(mass, rhs);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd build_value_projection(const LocalElement& elem) {
  const Eigen::MatrixXd& D = elem.dof_matrix();
  const int n = elem.n_dofs();
  const int ni = CellBasis::dim(elem.tuple().d0i);

  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(D);
  rank_check.setThreshold(1e-10);
  if (rank_check.rank() < D.cols())
    throw Error("projection", "dof matrix is rank deficient (" + std::to_string(rank_check.rank()) +
                                  " < " + std::to_string(D.cols()) + "): dofs not unisolvent on P_l");

  Eigen::MatrixXd C(ni, D.cols());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ni, n);
  for (int a = 0; a < ni; ++a) {
    const int row = elem.interior_dof(a);
    C.row(a) = D.row(row);
    m(a, row) = 1.0;
  }
  const Eigen::MatrixXd H = 2.0 * D.transpose() * D;
  const Eigen::MatrixXd g = 2.0 * D.transpose();
  return solve_kkt(H, C, g, m).x;
}

Eigen::MatrixXd build_edge_value_projection(const LocalElement& elem, int edge,
                                            const Eigen::MatrixXd& value) {
  const int l = elem.order();
  const int n = elem.n_dofs();
  const int d0e = elem.tuple().d0e;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(l + 1, l + 1);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(l + 1, n);
  const Eigen::MatrixXd q = edge_moments(elem, edge, l, l);
  for (int k = 0; k <= l - 2; ++k) {
    G(k, k) = 1.0;
    if (k <= d0e)
      R(k, elem.edge_value_dof(edge, k)) = 1.0;
    else
      R.row(k) = q.row(k) * value;
  }
  G.row(l - 1) = EdgeBasis::legendre(l, -1.0).transpose();
  G.row(l) = EdgeBasis::legendre(l, 1.0).transpose();
  R(l - 1, elem.vertex_dof(elem.edge_start_vertex(edge))) = 1.0;
  R(l, elem.vertex_dof(elem.edge_end_vertex(edge))) = 1.0;
  return solve_dense(G, R);
}

std::array<Eigen::MatrixXd, 2> build_gradient_projection(
    const LocalElement& elem, const Eigen::MatrixXd& value,
    const std::vector<Eigen::MatrixXd>& edge_value) {
  return gradient_from_traces(elem, value, edge_value);
}

Eigen::MatrixXd build_serendipity_trace(const LocalElement& elem, int edge) {
  const int l = elem.order();
  const int n = elem.n_dofs();
  if (elem.tuple().d0e < l - 3)
    throw Error("projection", "serendipity trace needs edge value moments up to l-3");
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(l, l);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(l, n);
  for (int k = 0; k <= l - 3; ++k) {
    G(k, k) = 1.0;
    R(k, elem.edge_value_dof(edge, k)) = 1.0;
  }
  G.row(l - 2) = EdgeBasis::legendre(l - 1, -1.0).transpose();
  G.row(l - 1) = EdgeBasis::legendre(l - 1, 1.0).transpose();
  R(l - 2, elem.vertex_dof(elem.edge_start_vertex(edge))) = 1.0;
  R(l - 1, elem.vertex_dof(elem.edge_end_vertex(edge))) = 1.0;
  return solve_dense(G, R);
}

std::array<Eigen::MatrixXd, 2> build_modified_gradient_projection(const LocalElement& elem,
                                                                  const Eigen::MatrixXd& value) {
  std::vector<Eigen::MatrixXd> traces;
  for (int e = 0; e < elem.n_edges(); ++e) traces.push_back(build_serendipity_trace(elem, e));
  return gradient_from_traces(elem, value, traces);
}

Eigen::MatrixXd build_edge_normal_projection(const LocalElement& elem, int edge,
                                             const std::array<Eigen::MatrixXd, 2>& gradient) {
  const int l = elem.order();
  const int n = elem.n_dofs();
  const int d1e = elem.tuple().d1e;
  const auto& eg = elem.geometry().edges[edge];
  const Eigen::MatrixXd q = edge_moments(elem, edge, l - 1, l - 1);
  const Eigen::MatrixXd dn = eg.normal.x() * gradient[0] + eg.normal.y() * gradient[1];
  // rows are orthonormal moments, so the system is the identity
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(l, n);
  for (int k = 0; k <= l - 1; ++k) {
    if (k <= d1e)
      E(k, elem.edge_normal_dof(edge, k)) = 1.0 / eg.length;
    else
      E.row(k) = q.row(k) * dn;
  }
  return E;
}

std::array<Eigen::MatrixXd, 4> build_hessian_projection(
    const LocalElement& elem, const std::array<Eigen::MatrixXd, 2>& gradient,
    const std::vector<Eigen::MatrixXd>& edge_value,
    const std::vector<Eigen::MatrixXd>& edge_normal) {
  const int l = elem.order();
  const Eigen::MatrixXd mass = elem.mass(l - 2);
  std::array<Eigen::MatrixXd, 2> dmom = {derivative_moments(elem, 0, l - 2, l - 1),
                                         derivative_moments(elem, 1, l - 2, l - 1)};
  // per edge: int_e m_beta L_k and int_e m_beta dL_k/ds
  std::vector<Eigen::MatrixXd> wn(elem.n_edges()), ws(elem.n_edges());
  for (int e = 0; e < elem.n_edges(); ++e) {
    const auto& eg = elem.geometry().edges[e];
    const double ds = eg.sign * 2.0 / eg.length;
    wn[e] = Eigen::MatrixXd::Zero(CellBasis::dim(l - 2), l);
    ws[e] = Eigen::MatrixXd::Zero(CellBasis::dim(l - 2), l + 1);
    for (const auto& p : elem.edge_points(e)) {
      const Eigen::VectorXd m = elem.basis().evaluate(p.x, l - 2);
      wn[e].noalias() += p.w * m * EdgeBasis::legendre(l - 1, p.t).transpose();
      ws[e].noalias() += p.w * ds * m * EdgeBasis::legendre_derivative(l, p.t).transpose();
    }
  }
  std::array<Eigen::MatrixXd, 4> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::MatrixXd rhs = -dmom[j] * gradient[i];
      for (int e = 0; e < elem.n_edges(); ++e) {
        const auto& eg = elem.geometry().edges[e];
        rhs.noalias() += (eg.normal[i] * eg.normal[j]) * wn[e] * edge_normal[e];
        rhs.noalias() += (eg.tangent[i] * eg.normal[j]) * ws[e] * edge_value[e];
      }
      out[2 * i + j] = solve_mass(mass, rhs);
    }
  }
  return out;
}

CellProjections build_cell_projections(const LocalElement& elem, bool modified_gradient) {
  CellProjections p;
  p.modified_gradient = modified_gradient;
  p.value = build_value_projection(elem);
  for (int e = 0; e < elem.n_edges(); ++e)
    p.edge_value.push_back(build_edge_value_projection(elem, e, p.value));
  const auto standard = build_gradient_projection(elem, p.value, p.edge_value);
  for (int e = 0; e < elem.n_edges(); ++e)
    p.edge_normal.push_back(build_edge_normal_projection(elem, e, standard));
  p.hessian = build_hessian_projection(elem, standard, p.edge_value, p.edge_normal);
  p.gradient = modified_gradient ? build_modified_gradient_projection(elem, p.value) : standard;
  return p;
}

}  // namespace vem
