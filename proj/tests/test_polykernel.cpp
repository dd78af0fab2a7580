#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "support.hpp"
#include "vem/error.hpp"
#include "vem/polykernel.hpp"

using namespace vem;

namespace {

// Exact integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
double triangle_moment(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate to their degree") {
  const QuadRule two = edge_quadrature({0, 0}, {1, 0}, 3);
  CHECK(two.size() == 2);
  CHECK(two.integrate([](const Point& x) { return x.x() * x.x(); }) == doctest::Approx(1.0 / 3.0));
  const QuadRule three = edge_quadrature({0, 0}, {1, 0}, 5);
  CHECK(three.size() == 3);
  CHECK(three.integrate([](const Point& x) { return std::pow(x.x(), 4); }) ==
        doctest::Approx(0.2).epsilon(1e-14));
  const QuadRule slanted = edge_quadrature({1, 2}, {4, 6}, 0);
  CHECK(slanted.integrate([](const Point&) { return 1.0; }) == doctest::Approx(5.0));
}

TEST_CASE("reference triangle rule is exact up to its degree") {
  for (int degree = 0; degree <= max_quadrature_degree; ++degree) {
    const QuadRule& rule = reference_triangle_rule(degree);
    CHECK(rule.degree >= degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    for (int a = 0; a <= degree; ++a) {
      const int b = degree - a;
      const double q = rule.integrate(
          [&](const Point& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
      CHECK(q == doctest::Approx(triangle_moment(a, b)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(reference_triangle_rule(max_quadrature_degree + 1), Error);
}

TEST_CASE("polygon quadrature: reference values") {
  const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(cell_quadrature(square, 0).integrate([](const Point&) { return 1.0; }) ==
        doctest::Approx(1.0));
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(cell_quadrature(tri, 1).integrate([](const Point& x) { return x.x(); }) ==
        doctest::Approx(1.0 / 6.0));
  std::vector<Point> hexagon;
  for (int k = 0; k < 6; ++k)
    hexagon.emplace_back(std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3));
  CHECK(cell_quadrature(hexagon, 0).integrate([](const Point&) { return 1.0; }) ==
        doctest::Approx(3.0 * std::sqrt(3.0) / 2.0));
}

TEST_CASE("polygon quadrature is exact for random polynomials") {
  // Oracle: divergence theorem, int_K x^a y^b = (1/(a+1)) int_dK x^(a+1) y^b n_x.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = testing::random_polygon(rng);
    for (int degree : {0, 3, 8, 14}) {
      const QuadRule rule = cell_quadrature(poly, degree);
      for (int a = 0; a <= degree; a += 2) {
        const int b = degree - a;
        auto f = [&](const Point& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); };
        double boundary = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const Point& p = poly[i];
          const Point& q = poly[(i + 1) % poly.size()];
          const double nx = (q - p).y();  // outward normal times length
          const QuadRule e = edge_quadrature(p, q, degree + 1);
          for (std::size_t k = 0; k < e.size(); ++k)
            boundary += e.weights[k] / (q - p).norm() * nx * std::pow(e.points[k].x(), a + 1) *
                        std::pow(e.points[k].y(), b) / (a + 1);
        }
        CHECK(rule.integrate(f) == doctest::Approx(boundary).epsilon(1e-12).scale(1e-300));
      }
    }
  }
}

TEST_CASE("scaled monomials") {
  CHECK(CellBasis::dim(2) == 6);
  CHECK(CellBasis::dim(4) == 15);
  for (int i = 0; i < CellBasis::dim(5); ++i) {
    const auto e = CellBasis::exponent(i);
    CHECK(CellBasis::index(e[0], e[1]) == i);
  }
  const CellBasis basis(3, Point(1.0, 2.0), 0.5);
  const Eigen::VectorXd m = basis.evaluate(Point(1.5, 1.0));
  CHECK(m(0) == 1.0);
  CHECK(m(CellBasis::index(1, 0)) == doctest::Approx(1.0));
  CHECK(m(CellBasis::index(0, 1)) == doctest::Approx(-2.0));
  CHECK(m(CellBasis::index(1, 2)) == doctest::Approx(4.0));
}

TEST_CASE("coefficient space derivatives") {
  const double h = 0.3;
  const CellBasis basis(4, Point(0.2, -0.1), h);
  const Eigen::MatrixXd dx = basis.derivative(0), dy = basis.derivative(1);
  CHECK(dx.col(0).isZero());
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(CellBasis::dim(3));
  expected(0) = 1.0 / h;
  CHECK(dx.col(CellBasis::index(1, 0)).isApprox(expected));
  const Eigen::MatrixXd dxy = basis.derivative(1, 3) * dx;
  CHECK(dxy.col(CellBasis::index(1, 1))(0) == doctest::Approx(1.0 / (h * h)));
  CHECK((basis.derivative(1, 3) * dx - basis.derivative(0, 3) * dy).norm() == 0.0);

  // Evaluation commutes with differentiation.
  std::mt19937 rng(3);
  const Eigen::VectorXd c = testing::random_coeffs(rng, 4);
  const Point x(0.35, 0.05);
  auto p = [&](const Point& y) { return basis.evaluate_polynomial(c, y); };
  const CellBasis lower(3, basis.center(), basis.scale());
  CHECK(lower.evaluate_polynomial(dx * c, x) ==
        doctest::Approx(testing::partial(p, x, 0)).epsilon(1e-9));
  CHECK(lower.evaluate_polynomial(dy * c, x) ==
        doctest::Approx(testing::partial(p, x, 1)).epsilon(1e-9));
  const Eigen::Matrix<double, 2, Eigen::Dynamic> g = basis.gradient(x, 4);
  CHECK((g.row(0) * c)(0) == doctest::Approx(lower.evaluate_polynomial(dx * c, x)));
  CHECK((g.row(1) * c)(0) == doctest::Approx(lower.evaluate_polynomial(dy * c, x)));
}

TEST_CASE("normalised Legendre basis on edges") {
  const Point a(0.0, 0.0), b(0.6, 0.8);
  const EdgeBasis edge(4, a, b);
  const QuadRule rule = gauss_legendre(6);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(5, 5);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd l = edge.evaluate(rule.points[q].x());
    gram += 0.5 * rule.weights[q] * l * l.transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-14);
  // Derivatives against differences.
  for (double t : {-0.7, 0.1, 0.9}) {
    const Eigen::VectorXd d = edge.derivative(t);
    for (int k = 0; k < 5; ++k)
      CHECK(d(k) == doctest::Approx(testing::richardson(
                         [&](double s) { return EdgeBasis::legendre(4, t + s)(k); }, 1e-2)));
  }
  CHECK(edge.point(-1.0) == a);
  CHECK((edge.point(1.0) - b).norm() < 1e-15);
}

TEST_CASE("L2 projection reproduces polynomials and is idempotent") {
  std::mt19937 rng(11);
  const auto poly = testing::random_polygon(rng);
  const PolyMesh mesh = testing::single_cell_mesh(poly);
  const CellGeometry& cell = mesh.cell_geometry(0);
  const CellBasis basis(3, cell);
  const Eigen::VectorXd one = l2_project_cell(cell, [](const Point&) { return 1.0; }, 3);
  CHECK(std::abs(one(0) - 1.0) < 1e-12);
  CHECK(one.tail(one.size() - 1).norm() < 1e-12);
  for (int alpha = 0; alpha < basis.size(); ++alpha) {
    const Eigen::VectorXd c =
        l2_project_cell(cell, [&](const Point& x) { return basis.evaluate(x)(alpha); }, 3);
    CHECK((c - Eigen::VectorXd::Unit(basis.size(), alpha)).norm() < 1e-12);
  }
  const Eigen::VectorXd c = testing::random_coeffs(rng, 3);
  const Eigen::VectorXd pc =
      l2_project_cell(cell, [&](const Point& x) { return basis.evaluate_polynomial(c, x); }, 3);
  CHECK((pc - c).norm() < 1e-12 * c.norm());
}

TEST_CASE("L2 projection error of sin(x) decays like h^3 for l = 2") {
  std::vector<double> errors;
  for (double h : {0.2, 0.1, 0.05}) {
    const std::vector<Point> square{{0.3, 0.4}, {0.3 + h, 0.4}, {0.3 + h, 0.4 + h}, {0.3, 0.4 + h}};
    const PolyMesh mesh = testing::single_cell_mesh(square);
    const CellGeometry& cell = mesh.cell_geometry(0);
    auto f = [](const Point& x) { return std::sin(x.x()); };
    const Eigen::VectorXd c = l2_project_cell(cell, f, 2);
    const CellBasis basis(2, cell);
    // Pointwise max error over the cell quadrature points.
    double err = 0.0;
    for (const Point& x : cell_quadrature(cell, 10).points)
      err = std::max(err, std::abs(f(x) - basis.evaluate_polynomial(c, x)));
    errors.push_back(err);
  }
  for (std::size_t i = 1; i < errors.size(); ++i)
    CHECK(std::log2(errors[i - 1] / errors[i]) == doctest::Approx(3.0).epsilon(0.05));
}
