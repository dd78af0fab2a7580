#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "vem/mesh.hpp"

namespace vem {

using ScalarField = std::function<double(const Point&)>;

/// Points and weights; `degree` is the polynomial degree integrated exactly.
struct QuadRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
  double integrate(const ScalarField& f) const;
};

/// Highest supported exactness degree.
inline constexpr int max_quadrature_degree = 30;

/// Gauss-Legendre on [-1, 1] with n points (points stored in x()).
QuadRule gauss_legendre(int n);
/// Collapsed Gauss rule on the reference triangle (0,0), (1,0), (0,1).
const QuadRule& reference_triangle_rule(int degree);

/// Rule on a polygon: fan triangulation from the centroid.
QuadRule cell_quadrature(const CellGeometry& cell, int degree);
QuadRule cell_quadrature(std::span<const Point> polygon, int degree);
/// Gauss-Legendre rule on the segment a -> b. Weights sum to |b - a|.
QuadRule edge_quadrature(const Point& a, const Point& b, int degree);

/// Scaled monomials m_alpha(x) = ((x - center) / scale)^alpha in graded order:
/// index k(k+1)/2 + j holds alpha = (k - j, j).
class CellBasis {
 public:
  CellBasis(int order, Point center, double scale);
  explicit CellBasis(int order, const CellGeometry& cell)
      : CellBasis(order, cell.centroid, cell.diameter) {}

  static int dim(int order) { return order < 0 ? 0 : (order + 1) * (order + 2) / 2; }
  static int index(int px, int py) { return (px + py) * (px + py + 1) / 2 + py; }
  static std::array<int, 2> exponent(int idx);

  int order() const { return order_; }
  int size() const { return dim(order_); }
  const Point& center() const { return center_; }
  double scale() const { return scale_; }

  /// Values of the first dim(order) monomials at x.
  Eigen::VectorXd evaluate(const Point& x, int order) const;
  Eigen::VectorXd evaluate(const Point& x) const { return evaluate(x, order_); }
  /// Gradient of each monomial up to `order`; row 0 = d/dx, row 1 = d/dy.
  Eigen::Matrix<double, 2, Eigen::Dynamic> gradient(const Point& x, int order) const;

  /// Coefficient-space derivative: maps P_from coefficients to P_{from-1}
  /// coefficients of the derivative along `axis`, including the 1/scale factor.
  Eigen::MatrixXd derivative(int axis, int from_order) const;
  Eigen::MatrixXd derivative(int axis) const { return derivative(axis, order_); }

  double evaluate_polynomial(const Eigen::VectorXd& coeffs, const Point& x) const;

 private:
  int order_;
  Point center_;
  double scale_;
};

/// Legendre polynomials normalised so that (1/|e|) int_e L_i L_j = delta_ij,
/// in the parameter t in [-1, 1] running from `start` to `end`.
class EdgeBasis {
 public:
  EdgeBasis(int order, Point start, Point end);

  int order() const { return order_; }
  int size() const { return order_ + 1; }
  double length() const { return (end_ - start_).norm(); }
  Point point(double t) const { return 0.5 * (start_ + end_) + 0.5 * t * (end_ - start_); }

  /// L_0..L_order at parameter t.
  Eigen::VectorXd evaluate(double t) const;
  /// dL_k/dt at parameter t.
  Eigen::VectorXd derivative(double t) const;

  static Eigen::VectorXd legendre(int order, double t);
  static Eigen::VectorXd legendre_derivative(int order, double t);

 private:
  int order_;
  Point start_, end_;
};

/// Mass matrix of the scaled monomials of `order` under a rule.
Eigen::MatrixXd mass_matrix(const CellBasis& basis, int order, const QuadRule& rule);

/// Coefficients of the L2(K) projection of f onto P_l(K).
Eigen::VectorXd l2_project_cell(const CellGeometry& cell, const ScalarField& f, int order);

}  // namespace vem
