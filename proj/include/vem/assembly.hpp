#pragma once

#include <filesystem>
#include <span>

#include <Eigen/Core>

#include "vem/dofspace.hpp"
#include "vem/linsolve.hpp"
#include "vem/projections.hpp"

namespace vem {

/// PDE data: kappa >= kappa_0 > 0, beta >= 0, gamma >= 0 and the forcing f.
struct CoefficientField {
  ScalarField kappa;
  ScalarField beta;
  ScalarField gamma;
  ScalarField forcing;
};

struct LocalSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  double stabilization = 0.0;  // kappa_K h^-2 + beta_K + gamma_K h^2
};

/// a_h^K: weighted products of the hessian, gradient and value projections
/// plus s * (I - D P0)^T (I - D P0); rhs_j = int_K f (P0 e_j).
LocalSystem assemble_local(const LocalElement& elem, const CellProjections& proj,
                           const CoefficientField& coeffs);

/// Coefficient-weighted continuous form a^K(p, q) between two polynomials
/// given by scaled monomial coefficients, using exact derivatives and the
/// element's quadrature rule.
double polynomial_form(const LocalElement& elem, const CoefficientField& coeffs,
                       const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct GlobalSystem {
  SparseSym matrix;
  Eigen::VectorXd rhs;
  int n_free = 0;
};

/// Signed scatter of the local systems onto the free dofs.
GlobalSystem assemble_global(const DofLayout& layout, std::span<const LocalSystem> locals);

/// Coordinate text: "row col value" per line, 0-based.
void write_matrix_coo(const SparseSym& matrix, const std::filesystem::path& path);

}  // namespace vem
