#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "vem/dofspace.hpp"
#include "vem/polykernel.hpp"

namespace vem {

/// Per-cell data shared by all projection builders: scaled monomial basis
/// of order l, a cell rule of exactness 2l+2, the local dof list and the dof
/// matrix D of the basis.
class LocalElement {
 public:
  LocalElement(const CellGeometry& cell, const DofTuple& tuple, int order);

  const CellGeometry& geometry() const { return *cell_; }
  const DofTuple& tuple() const { return tuple_; }
  int order() const { return order_; }
  const CellBasis& basis() const { return basis_; }
  const QuadRule& quadrature() const { return quadrature_; }
  const std::vector<LocalDof>& dofs() const { return dofs_; }
  int n_dofs() const { return static_cast<int>(dofs_.size()); }
  int n_edges() const { return static_cast<int>(cell_->edges.size()); }
  const Eigen::MatrixXd& dof_matrix() const { return dof_matrix_; }

  /// Monomial mass matrix of P_k(K), k <= l.
  Eigen::MatrixXd mass(int k) const;

  int vertex_dof(int v) const { return v; }
  int edge_value_dof(int e, int k) const;
  int edge_normal_dof(int e, int k) const;
  int interior_dof(int a) const;
  /// Local vertex indices of the canonical start / end of local edge e.
  int edge_start_vertex(int e) const;
  int edge_end_vertex(int e) const;

  struct EdgePoint {
    Point x;
    double t;  // canonical parameter in [-1, 1]
    double w;
  };
  /// Gauss points on local edge e, exact to degree 2l+2.
  const std::vector<EdgePoint>& edge_points(int e) const { return edge_points_[e]; }

 private:
  const CellGeometry* cell_;
  DofTuple tuple_;
  int order_;
  CellBasis basis_;
  QuadRule quadrature_;
  std::vector<LocalDof> dofs_;
  Eigen::MatrixXd dof_matrix_;
  std::vector<std::vector<EdgePoint>> edge_points_;
};

/// All matrices map local dof vectors to polynomial coefficients:
/// cell quantities in the scaled monomial basis, edge quantities in the
/// normalised Legendre basis of the canonical edge frame.
struct CellProjections {
  Eigen::MatrixXd value;                       // P_l        x N
  std::vector<Eigen::MatrixXd> edge_value;     // P_l(e)     x N, per edge
  std::vector<Eigen::MatrixXd> edge_normal;    // P_{l-1}(e) x N, outward normal
  std::array<Eigen::MatrixXd, 2> gradient;     // P_{l-1}    x N, used by the form
  std::array<Eigen::MatrixXd, 4> hessian;      // P_{l-2}    x N, (xx, xy, yx, yy)
  bool modified_gradient = false;
};

/// Value projection from the equality constrained least squares problem
/// min sum_i (dof_i(P v) - dof_i(v))^2 s.t. interior moments of P v match.
Eigen::MatrixXd build_value_projection(const LocalElement& elem);

/// Edge trace in P_l(e): value moments up to d0e from the dofs, endpoint
/// values from the vertex dofs, remaining moments up to l-2 from P0.
Eigen::MatrixXd build_edge_value_projection(const LocalElement& elem, int edge,
                                            const Eigen::MatrixXd& value);

std::array<Eigen::MatrixXd, 2> build_gradient_projection(
    const LocalElement& elem, const Eigen::MatrixXd& value,
    const std::vector<Eigen::MatrixXd>& edge_value);

/// Trace in P_{l-1}(e) fixed by the two endpoint values and the value
/// moments up to l-3 (serendipity edge trace of order l-1).
Eigen::MatrixXd build_serendipity_trace(const LocalElement& elem, int edge);

/// Gradient projection with the boundary term evaluated on the serendipity
/// traces; exact on P_{l-1} only.
std::array<Eigen::MatrixXd, 2> build_modified_gradient_projection(const LocalElement& elem,
                                                                  const Eigen::MatrixXd& value);

/// Outward normal derivative trace in P_{l-1}(e): normal moments up to d1e
/// from the dofs, the rest from moments of gradient . n.
Eigen::MatrixXd build_edge_normal_projection(const LocalElement& elem, int edge,
                                             const std::array<Eigen::MatrixXd, 2>& gradient);

std::array<Eigen::MatrixXd, 4> build_hessian_projection(
    const LocalElement& elem, const std::array<Eigen::MatrixXd, 2>& gradient,
    const std::vector<Eigen::MatrixXd>& edge_value,
    const std::vector<Eigen::MatrixXd>& edge_normal);

/// Builds P0 -> E0 -> P1 -> E1 -> P2. With `modified_gradient` the gradient
/// stored for the bilinear form is the modified one; the hessian chain keeps
/// the standard gradient so that it is identical across C1-nc and C1-mod.
CellProjections build_cell_projections(const LocalElement& elem, bool modified_gradient);

/// Value at parameter t of an edge polynomial given by Legendre coefficients.
double evaluate_edge_polynomial(const Eigen::VectorXd& coeffs, double t);

}  // namespace vem
