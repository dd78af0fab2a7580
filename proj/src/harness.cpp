#include "vem/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "vem/error.hpp"
#include "vem/linsolve.hpp"

namespace vem {

void validate_config(const RunConfig& config) {
  if (config.order < 2 || config.order > 4)
    throw Error("config", "order must be 2, 3 or 4");
  validate_tuple(space_tuple(config.space, config.order), config.order);
  if (config.problem != "perturbation" && config.problem != "varcoef")
    throw Error("config", "unknown problem '" + config.problem + "'");
  if (config.problem == "perturbation" && !(config.eps > 0.0 && config.eps <= 1.0))
    throw Error("config", "eps must lie in (0, 1]");
  if (config.levels.empty()) throw Error("config", "no refinement levels given");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (config.mesh != MeshFamily::file && config.levels[i] < 1)
      throw Error("config", "levels must be positive");
    if (i > 0 && config.levels[i] <= config.levels[i - 1])
      throw Error("config", "levels must be strictly increasing");
  }
  if (!(config.tol > 0.0)) throw Error("config", "solver tolerance must be positive");
}

ModelProblem make_problem(const RunConfig& config) {
  if (config.problem == "perturbation") return perturbation_problem(config.eps);
  if (config.problem == "varcoef") return varying_coefficient_problem();
  throw Error("config", "unknown problem '" + config.problem + "'");
}

PolyMesh make_mesh(const RunConfig& config, int level) {
  switch (config.mesh) {
    case MeshFamily::simplex:
      return build_structured_triangles(level);
    case MeshFamily::hexagon:
      return build_remapped_hexagons(level);
    case MeshFamily::file:
      return load_mesh(config.mesh_file);
  }
  throw Error("config", "unknown mesh family");
}

Discretization::Discretization(const PolyMesh& mesh_, Space space_, int order_)
    : mesh(mesh_),
      space(space_),
      order(order_),
      tuple(space_tuple(space_, order_)),
      layout(build_global_numbering(mesh_, tuple)) {
  validate_tuple(tuple, order);
  elements.reserve(mesh.n_cells());
  projections.reserve(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    try {
      elements.emplace_back(mesh.cell_geometry(c), tuple, order);
      projections.push_back(build_cell_projections(elements.back(), uses_modified_gradient(space)));
    } catch (const Error& e) {
      throw Error(e.stage(), "cell " + std::to_string(c) + ": " + e.what());
    }
  }
}

GlobalSystem assemble(const Discretization& disc, const CoefficientField& coeffs) {
  std::vector<LocalSystem> locals;
  locals.reserve(disc.elements.size());
  for (std::size_t c = 0; c < disc.elements.size(); ++c)
    locals.push_back(assemble_local(disc.elements[c], disc.projections[c], coeffs));
  return assemble_global(disc.layout, locals);
}

ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& solution,
                          const ModelProblem& problem) {
  const int l = disc.order;
  const int degree = std::min(2 * l + 6, max_quadrature_degree);
  const CoefficientField& cf = problem.coeffs;
  double energy = 0.0, h2 = 0.0, h1 = 0.0, l2 = 0.0;
  for (std::size_t c = 0; c < disc.elements.size(); ++c) {
    const LocalElement& elem = disc.elements[c];
    const CellProjections& proj = disc.projections[c];
    const Eigen::VectorXd uh = disc.layout.gather(static_cast<int>(c), solution);
    const Eigen::VectorXd p0 = proj.value * uh;
    const Eigen::VectorXd p1x = proj.gradient[0] * uh, p1y = proj.gradient[1] * uh;
    std::array<Eigen::VectorXd, 4> p2;
    for (int k = 0; k < 4; ++k) p2[k] = proj.hessian[k] * uh;

    const QuadRule rule = cell_quadrature(elem.geometry(), degree);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      const double w = rule.weights[q];
      const ExactData u = exact_error_data(problem, x);
      const Eigen::VectorXd m = elem.basis().evaluate(x, l);
      const auto m1 = m.head(p1x.size());
      const auto m2 = m.head(p2[0].size());
      const double e0 = u.value - m.dot(p0);
      const double g = std::pow(u.gradient.x() - m1.dot(p1x), 2) +
                       std::pow(u.gradient.y() - m1.dot(p1y), 2);
      const double hs = std::pow(u.hessian(0, 0) - m2.dot(p2[0]), 2) +
                        std::pow(u.hessian(0, 1) - m2.dot(p2[1]), 2) +
                        std::pow(u.hessian(1, 0) - m2.dot(p2[2]), 2) +
                        std::pow(u.hessian(1, 1) - m2.dot(p2[3]), 2);
      energy += w * (cf.kappa(x) * hs + cf.beta(x) * g + cf.gamma(x) * e0 * e0);
      h2 += w * hs;
      h1 += w * g;
      l2 += w * e0 * e0;
    }
  }
  return {std::sqrt(energy), std::sqrt(h2), std::sqrt(h1), std::sqrt(l2)};
}

namespace {

constexpr int dense_fallback_limit = 20000;

Eigen::VectorXd dense_cholesky(const SparseSym& A, const Eigen::VectorXd& b) {
  Eigen::MatrixXd dense = Eigen::MatrixXd(A);
  // In place so that only one n x n buffer is alive.
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(dense);
  if (llt.info() != Eigen::Success)
    throw Error("solve", "global matrix is not positive definite");
  return llt.solve(b);
}

}  // namespace

SolveOutcome solve_system(const GlobalSystem& system, double tol) {
  CgOptions options;
  options.tolerance = tol;
  CgResult cg = solve_cg(system.matrix, system.rhs, options);
  SolveOutcome out;
  out.iterations = cg.iterations;
  if (cg.converged) {
    out.x = std::move(cg.x);
    return out;
  }
  out.used_fallback = true;
  if (system.n_free <= dense_fallback_limit) {
    out.x = dense_cholesky(system.matrix, system.rhs);
    return out;
  }
  // Too large for a dense factor: continue CG from where it stopped with a
  // larger budget.
  CgOptions more = options;
  more.max_iterations = 3 * cg.iterations;
  const CgResult again = solve_cg(system.matrix, system.rhs, more, &cg.x);
  out.iterations += again.iterations;
  if (!again.converged)
    throw Error("solve", "CG stopped at relative residual " +
                             std::to_string(again.relative_residual) + " after " +
                             std::to_string(out.iterations) + " iterations");
  out.x = again.x;
  return out;
}

LevelResult solve_on_mesh(const PolyMesh& mesh, const RunConfig& config,
                          const ModelProblem& problem, int level) {
  const auto start = std::chrono::steady_clock::now();
  const Discretization disc(mesh, config.space, config.order);
  LevelResult result;
  result.system = assemble(disc, problem.coeffs);
  const SolveOutcome sol = solve_system(result.system, config.tol);
  result.solution = sol.x;

  ConvergenceRecord& rec = result.record;
  rec.level = level;
  rec.h = mesh.max_diameter();
  rec.dofs = disc.layout.n_free;
  rec.errors = compute_errors(disc, result.solution, problem);
  rec.cg_iters = sol.iterations;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  rec.seconds = config.timing ? elapsed.count() : 0.0;
  return result;
}

LevelResult solve_once(const RunConfig& config, int level) {
  validate_config(config);
  const ModelProblem problem = make_problem(config);
  const PolyMesh mesh = make_mesh(config, level);
  return solve_on_mesh(mesh, config, problem, level);
}

double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

void fill_eoc(std::vector<ConvergenceRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i == 0) {
      records[i].eoc.reset();
      continue;
    }
    const auto& a = records[i - 1];
    const auto& b = records[i];
    records[i].eoc = ErrorNorms{eoc(a.errors.energy, b.errors.energy, a.h, b.h),
                                eoc(a.errors.h2, b.errors.h2, a.h, b.h),
                                eoc(a.errors.h1, b.errors.h1, a.h, b.h),
                                eoc(a.errors.l2, b.errors.l2, a.h, b.h)};
  }
}

std::vector<ConvergenceRecord> run_study(const RunConfig& config) {
  validate_config(config);
  const ModelProblem problem = make_problem(config);
  std::vector<ConvergenceRecord> records;
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    const int level = config.levels[i];
    const PolyMesh mesh = make_mesh(config, level);
    LevelResult r = solve_on_mesh(mesh, config, problem, level);
    if (!config.dump_matrix.empty() && i + 1 == config.levels.size())
      write_matrix_coo(r.system.matrix, config.dump_matrix);
    records.push_back(r.record);
  }
  fill_eoc(records);
  if (!config.out.empty()) write_study(config, records);
  return records;
}

std::string to_csv(const std::vector<ConvergenceRecord>& records, bool timing) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "level,h,dofs,energy_err,energy_eoc,h2_err,h2_eoc,h1_err,h1_eoc,l2_err,l2_eoc,cg_iters,"
        "seconds\n";
  for (const auto& r : records) {
    auto eoc_field = [&](double ErrorNorms::*field) {
      std::ostringstream s;
      s << std::setprecision(17);
      if (r.eoc) s << (*r.eoc).*field;
      return s.str();
    };
    os << r.level << ',' << r.h << ',' << r.dofs << ',' << r.errors.energy << ','
       << eoc_field(&ErrorNorms::energy) << ',' << r.errors.h2 << ',' << eoc_field(&ErrorNorms::h2)
       << ',' << r.errors.h1 << ',' << eoc_field(&ErrorNorms::h1) << ',' << r.errors.l2 << ','
       << eoc_field(&ErrorNorms::l2) << ',' << r.cg_iters << ',' << (timing ? r.seconds : 0.0)
       << '\n';
  }
  return os.str();
}

namespace {

std::string mesh_name(const RunConfig& config) {
  switch (config.mesh) {
    case MeshFamily::simplex:
      return "simplex";
    case MeshFamily::hexagon:
      return "hex";
    case MeshFamily::file:
      return "file:" + config.mesh_file.string();
  }
  return "?";
}

nlohmann::json norms_json(const ErrorNorms& n) {
  return {{"energy", n.energy}, {"h2", n.h2}, {"h1", n.h1}, {"l2", n.l2}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string to_json(const RunConfig& config, const std::vector<ConvergenceRecord>& records) {
  nlohmann::json doc;
  doc["space"] = space_name(config.space);
  doc["order"] = config.order;
  doc["problem"] = config.problem;
  doc["eps"] = config.eps;
  doc["mesh"] = mesh_name(config);
  doc["tolerance"] = config.tol;
  doc["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json row = {{"level", r.level},
                          {"h", r.h},
                          {"dofs", r.dofs},
                          {"errors", norms_json(r.errors)},
                          {"eoc", r.eoc ? norms_json(*r.eoc) : nlohmann::json(nullptr)},
                          {"cg_iters", r.cg_iters},
                          {"seconds", config.timing ? r.seconds : 0.0}};
    doc["records"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::string to_plot_data(const RunConfig& config, const std::vector<ConvergenceRecord>& records) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# space h energy h2 h1 l2\n";
  for (const auto& r : records)
    os << space_name(config.space) << ' ' << r.h << ' ' << r.errors.energy << ' ' << r.errors.h2
       << ' ' << r.errors.h1 << ' ' << r.errors.l2 << '\n';
  return os.str();
}

void write_study(const RunConfig& config, const std::vector<ConvergenceRecord>& records) {
  write_text(config.out, to_csv(records, config.timing));
  std::filesystem::path json = config.out, plot = config.out;
  write_text(json.replace_extension(".json"), to_json(config, records));
  write_text(plot.replace_extension(".plot.dat"), to_plot_data(config, records));
}

}  // namespace vem
