#include "vem/polykernel.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Dense>
#include <gsl/gsl_integration.h>

#include "vem/error.hpp"

namespace vem {

double QuadRule::integrate(const ScalarField& f) const {
  double s = 0.0;
  for (std::size_t q = 0; q < size(); ++q) s += weights[q] * f(points[q]);
  return s;
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw Error("quadrature", "Gauss-Legendre needs at least one point");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw Error("quadrature", "cannot allocate Gauss-Legendre table");
  QuadRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table.get());
    rule.points.emplace_back(x, 0.0);
    rule.weights.push_back(w);
  }
  return rule;
}

namespace {

int points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

void check_degree(int degree) {
  if (degree < 0 || degree > max_quadrature_degree)
    throw Error("quadrature", "unsupported quadrature degree " + std::to_string(degree));
}

QuadRule collapsed_triangle_rule(int degree) {
  // Duffy map (u, v) -> (u (1 - v), u v) collapsing onto the origin; the
  // Jacobian u raises the degree in u by one. Gauss nodes are symmetric in v,
  // so the rule is invariant under swapping the two coordinates.
  const int n = std::max(1, (degree + 3) / 2);
  const QuadRule g = gauss_legendre(n);
  QuadRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.points[i].x() + 1.0);
    const double wu = 0.5 * g.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.points[j].x() + 1.0);
      const double wv = 0.5 * g.weights[j];
      rule.points.emplace_back(u * (1.0 - v), u * v);
      rule.weights.push_back(wu * wv * u);
    }
  }
  return rule;
}

}  // namespace

const QuadRule& reference_triangle_rule(int degree) {
  check_degree(degree);
  static const std::vector<QuadRule> rules = [] {
    std::vector<QuadRule> r;
    for (int d = 0; d <= max_quadrature_degree; ++d) r.push_back(collapsed_triangle_rule(d));
    return r;
  }();
  return rules[degree];
}

QuadRule cell_quadrature(std::span<const Point> polygon, int degree) {
  const QuadRule& ref = reference_triangle_rule(degree);
  Point c = Point::Zero();
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    const double w = p.x() * q.y() - p.y() * q.x();
    a += w;
    c += w * (p + q);
  }
  c /= 3.0 * a;

  QuadRule rule;
  rule.degree = degree;
  rule.points.reserve(n * ref.size());
  rule.weights.reserve(n * ref.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    const Point e1 = p - c, e2 = q - c;
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    if (jac <= 0.0)
      throw Error("quadrature", "polygon is not star shaped with respect to its centroid");
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const Point& r = ref.points[k];
      rule.points.push_back(c + r.x() * e1 + r.y() * e2);
      rule.weights.push_back(ref.weights[k] * jac);
    }
  }
  return rule;
}

QuadRule cell_quadrature(const CellGeometry& cell, int degree) {
  return cell_quadrature(std::span<const Point>(cell.vertices), degree);
}

QuadRule edge_quadrature(const Point& a, const Point& b, int degree) {
  check_degree(degree);
  const QuadRule g = gauss_legendre(points_for_degree(degree));
  const double half = 0.5 * (b - a).norm();
  QuadRule rule;
  rule.degree = g.degree;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.points[i].x();
    rule.points.push_back(0.5 * (a + b) + 0.5 * t * (b - a));
    rule.weights.push_back(g.weights[i] * half);
  }
  return rule;
}

CellBasis::CellBasis(int order, Point center, double scale)
    : order_(order), center_(std::move(center)), scale_(scale) {
  if (order < 0) throw Error("basis", "negative polynomial order");
  if (!(scale > 0.0)) throw Error("basis", "non-positive basis scale");
}

std::array<int, 2> CellBasis::exponent(int idx) {
  int k = 0;
  while ((k + 1) * (k + 2) / 2 <= idx) ++k;
  const int j = idx - k * (k + 1) / 2;
  return {k - j, j};
}

Eigen::VectorXd CellBasis::evaluate(const Point& x, int order) const {
  const double sx = (x.x() - center_.x()) / scale_;
  const double sy = (x.y() - center_.y()) / scale_;
  Eigen::VectorXd v(dim(order));
  for (int k = 0; k <= order; ++k) {
    for (int j = 0; j <= k; ++j) {
      v(index(k - j, j)) = std::pow(sx, k - j) * std::pow(sy, j);
    }
  }
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> CellBasis::gradient(const Point& x, int order) const {
  const double sx = (x.x() - center_.x()) / scale_;
  const double sy = (x.y() - center_.y()) / scale_;
  Eigen::Matrix<double, 2, Eigen::Dynamic> g(2, dim(order));
  for (int k = 0; k <= order; ++k) {
    for (int j = 0; j <= k; ++j) {
      const int px = k - j, py = j;
      const int i = index(px, py);
      g(0, i) = px == 0 ? 0.0 : px * std::pow(sx, px - 1) * std::pow(sy, py) / scale_;
      g(1, i) = py == 0 ? 0.0 : py * std::pow(sx, px) * std::pow(sy, py - 1) / scale_;
    }
  }
  return g;
}

Eigen::MatrixXd CellBasis::derivative(int axis, int from_order) const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim(from_order - 1), dim(from_order));
  for (int i = 0; i < dim(from_order); ++i) {
    auto [px, py] = exponent(i);
    if (axis == 0 && px > 0) d(index(px - 1, py), i) = px / scale_;
    if (axis == 1 && py > 0) d(index(px, py - 1), i) = py / scale_;
  }
  return d;
}

double CellBasis::evaluate_polynomial(const Eigen::VectorXd& coeffs, const Point& x) const {
  int order = 0;
  while (dim(order) < coeffs.size()) ++order;
  return evaluate(x, order).dot(coeffs);
}

EdgeBasis::EdgeBasis(int order, Point start, Point end)
    : order_(order), start_(std::move(start)), end_(std::move(end)) {}

Eigen::VectorXd EdgeBasis::legendre(int order, double t) {
  Eigen::VectorXd p(order + 1);
  if (order >= 0) p(0) = 1.0;
  if (order >= 1) p(1) = t;
  for (int k = 2; k <= order; ++k) p(k) = ((2 * k - 1) * t * p(k - 1) - (k - 1) * p(k - 2)) / k;
  for (int k = 0; k <= order; ++k) p(k) *= std::sqrt(2.0 * k + 1.0);
  return p;
}

Eigen::VectorXd EdgeBasis::legendre_derivative(int order, double t) {
  // P'_k = k P_{k-1} + t P'_{k-1}
  Eigen::VectorXd p(order + 1), dp(order + 1);
  if (order >= 0) {
    p(0) = 1.0;
    dp(0) = 0.0;
  }
  if (order >= 1) {
    p(1) = t;
    dp(1) = 1.0;
  }
  for (int k = 2; k <= order; ++k) {
    p(k) = ((2 * k - 1) * t * p(k - 1) - (k - 1) * p(k - 2)) / k;
    dp(k) = k * p(k - 1) + t * dp(k - 1);
  }
  for (int k = 0; k <= order; ++k) dp(k) *= std::sqrt(2.0 * k + 1.0);
  return dp;
}

Eigen::VectorXd EdgeBasis::evaluate(double t) const { return legendre(order_, t); }
Eigen::VectorXd EdgeBasis::derivative(double t) const { return legendre_derivative(order_, t); }

Eigen::MatrixXd mass_matrix(const CellBasis& basis, int order, const QuadRule& rule) {
  const int n = CellBasis::dim(order);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = basis.evaluate(rule.points[q], order);
    m.noalias() += rule.weights[q] * v * v.transpose();
  }
  return m;
}

Eigen::VectorXd l2_project_cell(const CellGeometry& cell, const ScalarField& f, int order) {
  const CellBasis basis(order, cell);
  const QuadRule rule = cell_quadrature(cell, std::min(2 * order + 2, max_quadrature_degree));
  const Eigen::MatrixXd m = mass_matrix(basis, order, rule);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q)
    b += rule.weights[q] * f(rule.points[q]) * basis.evaluate(rule.points[q]);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw Error("projection", "singular cell mass matrix");
  return llt.solve(b);
}

}  // namespace vem
