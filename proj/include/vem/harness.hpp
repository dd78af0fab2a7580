#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vem/assembly.hpp"
#include "vem/dofspace.hpp"
#include "vem/mesh.hpp"
#include "vem/problems.hpp"
#include "vem/projections.hpp"

namespace vem {

enum class MeshFamily { simplex, hexagon, file };

struct RunConfig {
  Space space = Space::C1nc;
  int order = 2;
  std::string problem = "perturbation";  // or "varcoef"
  double eps = 1.0;
  MeshFamily mesh = MeshFamily::simplex;
  std::filesystem::path mesh_file;  // used by MeshFamily::file
  std::vector<int> levels{4, 8, 16, 32};
  double tol = 1e-10;
  std::filesystem::path out;          // CSV path; JSON and plot data are written next to it
  std::filesystem::path dump_matrix;  // matrix of the finest level
  bool timing = true;                 // false writes 0 in the seconds column
};

/// Throws Error("config", ...) for inadmissible orders, unknown problems or
/// levels that are not strictly increasing.
void validate_config(const RunConfig& config);

ModelProblem make_problem(const RunConfig& config);
PolyMesh make_mesh(const RunConfig& config, int level);

/// Everything needed to assemble and post-process on one mesh. Keeps a
/// reference to the mesh, which must outlive it.
struct Discretization {
  Discretization(const PolyMesh& mesh, Space space, int order);

  const PolyMesh& mesh;
  Space space;
  int order;
  DofTuple tuple;
  DofLayout layout;
  std::vector<LocalElement> elements;
  std::vector<CellProjections> projections;
};

GlobalSystem assemble(const Discretization& disc, const CoefficientField& coeffs);

struct ErrorNorms {
  double energy = 0.0;  // kappa D^2, beta grad, gamma value parts
  double h2 = 0.0;      // broken H^2 seminorm
  double h1 = 0.0;      // broken H^1 seminorm
  double l2 = 0.0;
};

/// Errors between the exact solution and the projections of u_h, by cell
/// quadrature of degree 2l + 6.
ErrorNorms compute_errors(const Discretization& disc, const Eigen::VectorXd& solution,
                          const ModelProblem& problem);

struct SolveOutcome {
  Eigen::VectorXd x;
  int iterations = 0;
  bool used_fallback = false;
};

/// Jacobi CG. If it does not reach `tol` within its budget: dense Cholesky
/// for up to 20000 unknowns, otherwise CG continued from the last iterate
/// with three times the budget; Error("solve", ...) if that fails too.
SolveOutcome solve_system(const GlobalSystem& system, double tol);

struct ConvergenceRecord {
  int level = 0;
  double h = 0.0;
  int dofs = 0;
  ErrorNorms errors;
  std::optional<ErrorNorms> eoc;  // empty on the first level
  int cg_iters = 0;
  double seconds = 0.0;
};

struct LevelResult {
  ConvergenceRecord record;
  Eigen::VectorXd solution;
  GlobalSystem system;
};

/// Mesh -> layout -> projections -> assembly -> solve -> errors.
LevelResult solve_on_mesh(const PolyMesh& mesh, const RunConfig& config,
                          const ModelProblem& problem, int level);
LevelResult solve_once(const RunConfig& config, int level);

double eoc(double e_coarse, double e_fine, double h_coarse, double h_fine);
void fill_eoc(std::vector<ConvergenceRecord>& records);

/// Runs every level, fills the EOC columns and writes the exports when
/// `config.out` is set.
std::vector<ConvergenceRecord> run_study(const RunConfig& config);

std::string to_csv(const std::vector<ConvergenceRecord>& records, bool timing = true);
std::string to_json(const RunConfig& config, const std::vector<ConvergenceRecord>& records);
/// Whitespace separated columns "space h energy h2 h1 l2" for plotting tools.
std::string to_plot_data(const RunConfig& config, const std::vector<ConvergenceRecord>& records);
/// Writes <out>, <out>.json and <out>.plot.dat (extension of <out> replaced).
void write_study(const RunConfig& config, const std::vector<ConvergenceRecord>& records);

}  // namespace vem
