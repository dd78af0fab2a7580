#include "vem/assembly.hpp"

#include <fstream>
#include <iomanip>

#include "vem/error.hpp"

namespace vem {

LocalSystem assemble_local(const LocalElement& elem, const CellProjections& proj,
                           const CoefficientField& coeffs) {
  const int l = elem.order();
  const int n = elem.n_dofs();
  const QuadRule& rule = elem.quadrature();
  const CellBasis& basis = elem.basis();
  const double area = elem.geometry().area;
  const double h = elem.geometry().diameter;

  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(CellBasis::dim(l - 2), CellBasis::dim(l - 2));
  Eigen::MatrixXd mb = Eigen::MatrixXd::Zero(CellBasis::dim(l - 1), CellBasis::dim(l - 1));
  Eigen::MatrixXd mg = Eigen::MatrixXd::Zero(CellBasis::dim(l), CellBasis::dim(l));
  Eigen::VectorXd fm = Eigen::VectorXd::Zero(CellBasis::dim(l));
  double kbar = 0.0, bbar = 0.0, gbar = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& x = rule.points[q];
    const double w = rule.weights[q];
    const double kappa = coeffs.kappa(x);
    if (!(kappa > 0.0))
      throw Error("assembly", "non-positive kappa at (" + std::to_string(x.x()) + ", " +
                                  std::to_string(x.y()) + ")");
    const double beta = coeffs.beta(x);
    const double gamma = coeffs.gamma(x);
    const Eigen::VectorXd m = basis.evaluate(x);
    mk.noalias() += (w * kappa) * m.head(mk.rows()) * m.head(mk.rows()).transpose();
    mb.noalias() += (w * beta) * m.head(mb.rows()) * m.head(mb.rows()).transpose();
    mg.noalias() += (w * gamma) * m * m.transpose();
    if (coeffs.forcing) fm += (w * coeffs.forcing(x)) * m;
    kbar += w * kappa;
    bbar += w * beta;
    gbar += w * gamma;
  }
  kbar /= area;
  bbar /= area;
  gbar /= area;

  LocalSystem sys;
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& block : proj.hessian) sys.matrix.noalias() += block.transpose() * mk * block;
  for (const auto& block : proj.gradient) sys.matrix.noalias() += block.transpose() * mb * block;
  sys.matrix.noalias() += proj.value.transpose() * mg * proj.value;

  sys.stabilization = kbar / (h * h) + bbar + gbar * h * h;
  const Eigen::MatrixXd residual =
      Eigen::MatrixXd::Identity(n, n) - elem.dof_matrix() * proj.value;
  sys.matrix.noalias() += sys.stabilization * residual.transpose() * residual;
  sys.matrix = 0.5 * (sys.matrix + sys.matrix.transpose()).eval();

  sys.rhs = proj.value.transpose() * fm;
  return sys;
}

double polynomial_form(const LocalElement& elem, const CoefficientField& coeffs,
                       const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const int l = elem.order();
  const CellBasis& basis = elem.basis();
  const QuadRule& rule = elem.quadrature();
  const Eigen::MatrixXd dx = basis.derivative(0, l), dy = basis.derivative(1, l);
  const Eigen::MatrixXd dxx = basis.derivative(0, l - 1) * dx, dxy = basis.derivative(1, l - 1) * dx,
                        dyy = basis.derivative(1, l - 1) * dy;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point& x = rule.points[i];
    const Eigen::VectorXd m0 = basis.evaluate(x, l);
    const Eigen::VectorXd m1 = basis.evaluate(x, l - 1);
    const Eigen::VectorXd m2 = basis.evaluate(x, l - 2);
    const double hp = m2.dot(dxx * p) * m2.dot(dxx * q) + 2.0 * m2.dot(dxy * p) * m2.dot(dxy * q) +
                      m2.dot(dyy * p) * m2.dot(dyy * q);
    const double gp = m1.dot(dx * p) * m1.dot(dx * q) + m1.dot(dy * p) * m1.dot(dy * q);
    const double vp = m0.dot(p) * m0.dot(q);
    s += rule.weights[i] * (coeffs.kappa(x) * hp + coeffs.beta(x) * gp + coeffs.gamma(x) * vp);
  }
  return s;
}

GlobalSystem assemble_global(const DofLayout& layout, std::span<const LocalSystem> locals) {
  if (locals.size() != layout.cell_dofs.size())
    throw Error("assembly", "number of local systems does not match the mesh");
  GlobalSystem sys;
  sys.n_free = layout.n_free;
  sys.rhs = Eigen::VectorXd::Zero(layout.n_free);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t c = 0; c < locals.size(); ++c) {
    const auto& idx = layout.cell_dofs[c];
    const auto& sg = layout.cell_signs[c];
    const LocalSystem& loc = locals[c];
    if (loc.matrix.rows() != static_cast<Eigen::Index>(idx.size()))
      throw Error("assembly", "local system size mismatch on cell " + std::to_string(c));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0) continue;
      if (idx[i] >= layout.n_free) throw Error("assembly", "dof index out of range");
      sys.rhs(idx[i]) += sg[i] * loc.rhs(i);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0) continue;
        triplets.emplace_back(idx[i], idx[j], sg[i] * sg[j] * loc.matrix(i, j));
      }
    }
  }
  sys.matrix.resize(layout.n_free, layout.n_free);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

void write_matrix_coo(const SparseSym& matrix, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write matrix file " + path.string());
  out << std::setprecision(17);
  for (int r = 0; r < matrix.outerSize(); ++r)
    for (SparseSym::InnerIterator it(matrix, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace vem
