#include "vem/problems.hpp"

#include <cmath>
#include <numbers>

#include "vem/error.hpp"

namespace vem {

namespace {

constexpr double pi = std::numbers::pi;

// S(s) = sin(2 pi s)^2 = (1 - cos(4 pi s)) / 2 and its derivatives.
std::array<double, 5> profile(double s) {
  const double a = 4.0 * pi * s;
  const double sn = std::sin(a), cs = std::cos(a);
  return {0.5 * (1.0 - cs), 2.0 * pi * sn, 8.0 * pi * pi * cs, -32.0 * pi * pi * pi * sn,
          -128.0 * pi * pi * pi * pi * cs};
}

}  // namespace

ExactData ManufacturedSolution::evaluate(const Point& x) {
  const auto sx = profile(x.x()), sy = profile(x.y());
  ExactData d;
  d.value = sx[0] * sy[0];
  d.gradient = {sx[1] * sy[0], sx[0] * sy[1]};
  d.hessian << sx[2] * sy[0], sx[1] * sy[1], sx[1] * sy[1], sx[0] * sy[2];
  return d;
}

std::array<double, 4> ManufacturedSolution::third(const Point& x) {
  const auto sx = profile(x.x()), sy = profile(x.y());
  return {sx[3] * sy[0], sx[2] * sy[1], sx[1] * sy[2], sx[0] * sy[3]};
}

std::array<double, 5> ManufacturedSolution::fourth(const Point& x) {
  const auto sx = profile(x.x()), sy = profile(x.y());
  return {sx[4] * sy[0], sx[3] * sy[1], sx[2] * sy[2], sx[1] * sy[3], sx[0] * sy[4]};
}

FieldDerivatives ModelProblem::kappa_derivatives(const Point& p) const {
  FieldDerivatives d;
  if (kind == ProblemKind::perturbation) {
    d.value = eps * eps;
    return d;
  }
  const double x = p.x(), y = p.y();
  const double q = 1.0 + x * x + y * y;
  const double q2 = q * q, q3 = q2 * q;
  d.value = 1.0 / q;
  d.gradient = {-2.0 * x / q2, -2.0 * y / q2};
  d.hessian << -2.0 / q2 + 8.0 * x * x / q3, 8.0 * x * y / q3, 8.0 * x * y / q3,
      -2.0 / q2 + 8.0 * y * y / q3;
  return d;
}

FieldDerivatives ModelProblem::beta_derivatives(const Point& p) const {
  FieldDerivatives d;
  if (kind == ProblemKind::perturbation) {
    d.value = 1.0;
    return d;
  }
  const double x = p.x(), y = p.y();
  const double b = std::exp(-x * y);
  d.value = b;
  d.gradient = {-y * b, -x * b};
  d.hessian << y * y * b, (x * y - 1.0) * b, (x * y - 1.0) * b, x * x * b;
  return d;
}

double strong_operator(const ModelProblem& problem, const Point& x) {
  const ExactData u = ManufacturedSolution::evaluate(x);
  const auto u3 = ManufacturedSolution::third(x);
  const auto u4 = ManufacturedSolution::fourth(x);
  const FieldDerivatives k = problem.kappa_derivatives(x);
  const FieldDerivatives b = problem.beta_derivatives(x);
  const double gamma = problem.coeffs.gamma(x);

  const double laplace = u.hessian.trace();
  const Eigen::Vector2d grad_laplace{u3[0] + u3[2], u3[1] + u3[3]};
  const double bilaplace = u4[0] + 2.0 * u4[2] + u4[4];

  const double fourth_order = (k.hessian.array() * u.hessian.array()).sum() +
                              2.0 * k.gradient.dot(grad_laplace) + k.value * bilaplace;
  const double second_order = b.gradient.dot(u.gradient) + b.value * laplace;
  return fourth_order - second_order + gamma * u.value;
}

ModelProblem perturbation_problem(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("problem", "eps must lie in (0, 1]");
  ModelProblem p;
  p.name = "perturbation";
  p.kind = ProblemKind::perturbation;
  p.eps = eps;
  const double e2 = eps * eps;
  p.coeffs.kappa = [e2](const Point&) { return e2; };
  p.coeffs.beta = [](const Point&) { return 1.0; };
  p.coeffs.gamma = [](const Point&) { return 0.0; };
  p.coeffs.forcing = [e2](const Point& x) {
    const ExactData u = ManufacturedSolution::evaluate(x);
    const auto u4 = ManufacturedSolution::fourth(x);
    return e2 * (u4[0] + 2.0 * u4[2] + u4[4]) - u.hessian.trace();
  };
  return p;
}

ModelProblem varying_coefficient_problem() {
  ModelProblem p;
  p.name = "varcoef";
  p.kind = ProblemKind::varying_coefficient;
  p.coeffs.kappa = [](const Point& x) { return 1.0 / (1.0 + x.squaredNorm()); };
  p.coeffs.beta = [](const Point& x) { return std::exp(-x.x() * x.y()); };
  p.coeffs.gamma = [](const Point& x) {
    const double s = std::sin(x.squaredNorm());
    return s * s;
  };
  ModelProblem shape = p;
  shape.coeffs.forcing = nullptr;
  p.coeffs.forcing = [shape](const Point& x) { return strong_operator(shape, x); };
  return p;
}

ExactData exact_error_data(const ModelProblem& problem, const Point& x) {
  return problem.exact(x);
}

}  // namespace vem
