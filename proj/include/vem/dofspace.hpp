#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vem/mesh.hpp"
#include "vem/polykernel.hpp"

namespace vem {

/// Number of moments per entity type: (d0v, d1v, d0e, d1e, d0i). An entry
/// -1 means "no moments"; 0 means constants only.
struct DofTuple {
  int d0v = 0;
  int d1v = -1;
  int d0e = -1;
  int d1e = -1;
  int d0i = -1;

  friend bool operator==(const DofTuple&, const DofTuple&) = default;
};

enum class Space { C1nc, C1mod, C1C0 };

Space parse_space(std::string_view name);  // "c1nc", "C1-nc", ...
std::string space_name(Space space);       // "C1-nc", "C1-mod", "C1-C0"
/// Tuple of a space at order l; entries below -1 are clamped to -1.
DofTuple space_tuple(Space space, int order);
inline bool uses_modified_gradient(Space space) { return space == Space::C1mod; }

/// Throws unless the tuple is usable locally (d_j^e <= l-2, d0i <= l) and
/// globally (d0v = 0, d1v = -1, d0e >= l-3, d1e >= l-2, d0i >= l-4).
void validate_tuple(const DofTuple& tuple, int order);

/// Extended tuple (0, -1, l-2, l-2, l) of the enlarged local space.
DofTuple extended_tuple(int order);

int local_dof_count(const DofTuple& tuple, int n_edges);
/// n_e (2l - 1) + (l + 1)(l + 2) / 2.
int extended_dof_count(int order, int n_edges);

enum class DofKind { vertex_value, edge_value_moment, edge_normal_moment, interior_moment };

/// One local degree of freedom. `entity` is the local vertex or edge index
/// (0 for interior moments); `moment` the Legendre index on the edge or the
/// scaled monomial index in the cell; `scaling` the functional's prefactor.
struct LocalDof {
  DofKind kind;
  int entity = 0;
  int moment = 0;
  double scaling = 1.0;
};

/// Local dofs of a cell in the order: vertex values, then per edge the value
/// moments followed by the normal moments, then interior moments. Edge
/// moments are taken in the canonical parametrisation of the edge; normal
/// moments use the cell's outward normal.
std::vector<LocalDof> local_dofs(const DofTuple& tuple, const CellGeometry& cell);

/// Smooth function with gradient, used to evaluate dof functionals.
struct SmoothFunction {
  ScalarField value;
  std::function<Point(const Point&)> gradient;
};

Eigen::VectorXd dofs_of_function(const DofTuple& tuple, const CellGeometry& cell,
                                 const SmoothFunction& g, int quad_degree);

/// Dof matrix D: column alpha holds the dofs of the scaled monomial m_alpha.
Eigen::MatrixXd dofs_of_polynomials(const DofTuple& tuple, const CellGeometry& cell,
                                    const CellBasis& basis);
Eigen::VectorXd dofs_of_polynomial(const DofTuple& tuple, const CellGeometry& cell,
                                   const CellBasis& basis, const Eigen::VectorXd& coeffs);

/// Global numbering: free dofs are numbered densely in the order vertices,
/// edges, cells. Dofs on boundary vertices and boundary edges are
/// constrained (homogeneous clamped conditions) and get index -1.
struct DofLayout {
  DofTuple tuple;
  int n_free = 0;
  int n_constrained = 0;
  std::vector<std::vector<int>> cell_dofs;      // global index per local dof, -1 if constrained
  std::vector<std::vector<double>> cell_signs;  // +1/-1 applied when gathering
  std::vector<double> vertex_scale;             // h_v: mean diameter of incident cells

  int n_local(int cell) const { return static_cast<int>(cell_dofs[cell].size()); }
  /// Local dof vector of a cell from a global free-dof vector.
  Eigen::VectorXd gather(int cell, const Eigen::VectorXd& global) const;
};

DofLayout build_global_numbering(const PolyMesh& mesh, const DofTuple& tuple);

}  // namespace vem
