#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "vem/mesh.hpp"
#include "vem/polykernel.hpp"

namespace vem::testing {

/// Convex-ish random polygon with 3..8 vertices around a random centre,
/// accepted only if it passes the regularity check with rho = 0.2.
inline std::vector<Point> random_polygon(std::mt19937& rng, int min_vertices = 3,
                                         int max_vertices = 8) {
  std::uniform_int_distribution<int> count(min_vertices, max_vertices);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    const int n = count(rng);
    const double scale = std::pow(10.0, -2.0 * unit(rng));
    const Point center(unit(rng), unit(rng));
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    std::vector<Point> poly;
    for (int i = 0; i < n; ++i) {
      const double angle = phase + 2.0 * std::numbers::pi * (i + 0.35 * (unit(rng) - 0.5)) / n;
      const double radius = scale * (0.75 + 0.25 * unit(rng));
      poly.emplace_back(center + radius * Point(std::cos(angle), std::sin(angle)));
    }
    double diameter = 0.0;
    for (const auto& a : poly)
      for (const auto& b : poly) diameter = std::max(diameter, (a - b).norm());
    if (edge_diameter_ratio(poly) >= 0.2 && star_ball_radius(poly) >= 0.2 * diameter) return poly;
  }
}

/// Single-cell mesh, so that the geometry comes out of the PolyMesh code path.
inline PolyMesh single_cell_mesh(const std::vector<Point>& poly) {
  std::vector<int> loop(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) loop[i] = static_cast<int>(i);
  return PolyMesh(poly, {loop});
}

inline Eigen::VectorXd random_coeffs(std::mt19937& rng, int order) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Eigen::VectorXd c(CellBasis::dim(order));
  for (auto& v : c) v = coef(rng);
  return c;
}

/// Central difference of f at 0 with step h refined by halving and
/// Richardson extrapolation (Neville tableau in h^2).
inline double richardson(const std::function<double(double)>& f, double h, int levels = 6) {
  std::vector<std::vector<double>> t(levels);
  for (int i = 0; i < levels; ++i) {
    const double hi = h / std::pow(2.0, i);
    t[i].push_back((f(hi) - f(-hi)) / (2.0 * hi));
    for (int k = 1; k <= i; ++k) {
      const double p = std::pow(4.0, k);
      t[i].push_back((p * t[i][k - 1] - t[i - 1][k - 1]) / (p - 1.0));
    }
  }
  return t.back().back();
}

/// Partial derivative of a field along `axis` at x.
inline double partial(const ScalarField& f, const Point& x, int axis, double h = 1e-2) {
  return richardson(
      [&](double s) {
        Point y = x;
        y(axis) += s;
        return f(y);
      },
      h);
}

}  // namespace vem::testing
