#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "vem/assembly.hpp"
#include "vem/mesh.hpp"

namespace vem {

/// Exact solution data at a point: value, gradient and hessian.
struct ExactData {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

/// Derivatives of a scalar field up to second order.
struct FieldDerivatives {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

/// u(x, y) = sin(2 pi x)^2 sin(2 pi y)^2 on the unit square, with clamped
/// boundary values. Third and fourth derivatives are indexed by the number
/// of y-derivatives: third[k] = d^3 u / dx^(3-k) dy^k.
struct ManufacturedSolution {
  static ExactData evaluate(const Point& x);
  static std::array<double, 4> third(const Point& x);
  static std::array<double, 5> fourth(const Point& x);
};

enum class ProblemKind { perturbation, varying_coefficient };

struct ModelProblem {
  std::string name;
  ProblemKind kind = ProblemKind::perturbation;
  double eps = 1.0;
  CoefficientField coeffs;  // kappa, beta, gamma and forcing f

  FieldDerivatives kappa_derivatives(const Point& x) const;
  FieldDerivatives beta_derivatives(const Point& x) const;
  ExactData exact(const Point& x) const { return ManufacturedSolution::evaluate(x); }
};

/// eps^2 Delta^2 u - Delta u = f: kappa = eps^2, beta = 1, gamma = 0.
ModelProblem perturbation_problem(double eps);

/// kappa = 1 / (1 + x^2 + y^2), beta = exp(-x y), gamma = sin(x^2 + y^2)^2.
ModelProblem varying_coefficient_problem();

/// Forcing from the strong form
/// sum_ij d_ij(kappa d_ij u) - sum_i d_i(beta d_i u) + gamma u.
double strong_operator(const ModelProblem& problem, const Point& x);

ExactData exact_error_data(const ModelProblem& problem, const Point& x);

}  // namespace vem
