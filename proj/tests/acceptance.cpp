// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "oracles.hpp"
#include "projection_check.hpp"
#include "support.hpp"
#include "vem/harness.hpp"

using namespace vem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

const Space all_spaces[] = {Space::C1nc, Space::C1mod, Space::C1C0};

// Final-interval energy EOCs of several studies, spread over the hardware
// threads.
struct StudyCase {
  RunConfig config;
  double eoc = 0.0;
  std::string error;
};

void run_cases(std::vector<StudyCase>& cases) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        cases[i].eoc = run_study(cases[i].config).back().eoc->energy;
      } catch (const std::exception& e) {
        cases[i].eoc = NAN;
        cases[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), cases.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

StudyCase study(Space space, int order, const std::string& problem, double eps, MeshFamily mesh,
                std::vector<int> levels) {
  StudyCase c;
  c.config.space = space;
  c.config.order = order;
  c.config.problem = problem;
  c.config.eps = eps;
  c.config.mesh = mesh;
  c.config.levels = std::move(levels);
  c.config.timing = false;
  return c;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << v;
  return s.str();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

Outcome projection_exactness() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937 rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PolyMesh mesh = testing::single_cell_mesh(testing::random_polygon(rng));
    for (int l = 2; l <= 4; ++l)
      for (Space s : all_spaces) {
        const LocalElement elem(mesh.cell_geometry(0), space_tuple(s, l), l);
        const CellProjections proj = build_cell_projections(elem, uses_modified_gradient(s));
        const auto full = testing::check_exactness(elem, proj, testing::random_coeffs(rng, l));
        worst = std::max({worst, full.value, full.edge_value, full.edge_normal, full.hessian});
        if (!uses_modified_gradient(s)) worst = std::max(worst, full.gradient);
        // The modified gradient targets P_{l-1}.
        const auto lower = testing::check_exactness(elem, proj, testing::random_coeffs(rng, l - 1));
        worst = std::max(worst, lower.worst());
      }
  }
  const double t = seconds_since(start);
  o.pass = worst <= 1e-10 && t < 30.0;
  o.detail << "worst relative error " << worst << ", " << fmt(t, 1) << " s";
  return o;
}

Outcome polynomial_consistency() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937 rng(2);
  const CoefficientField coeffs = varying_coefficient_problem().coeffs;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const PolyMesh mesh = testing::single_cell_mesh(testing::random_polygon(rng));
    for (int l = 2; l <= 4; ++l)
      for (Space s : all_spaces) {
        const LocalElement elem(mesh.cell_geometry(0), space_tuple(s, l), l);
        const CellProjections proj = build_cell_projections(elem, uses_modified_gradient(s));
        const LocalSystem sys = assemble_local(elem, proj, coeffs);
        const Eigen::MatrixXd& D = elem.dof_matrix();
        const Eigen::MatrixXd discrete = D.transpose() * sys.matrix * D;
        const int dim = CellBasis::dim(uses_modified_gradient(s) ? l - 1 : l);
        const double norm = sys.matrix.norm();
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b <= a; ++b) {
            const Eigen::VectorXd p = Eigen::VectorXd::Unit(CellBasis::dim(l), a);
            const Eigen::VectorXd q = Eigen::VectorXd::Unit(CellBasis::dim(l), b);
            worst = std::max(worst, std::abs(discrete(a, b) - polynomial_form(elem, coeffs, p, q)) / norm);
          }
      }
  }
  const double t = seconds_since(start);
  o.pass = worst <= 1e-9 && t < 30.0;
  o.detail << "worst |a_h - a| / ||A_K|| " << worst << ", " << fmt(t, 1) << " s";
  return o;
}

Outcome forcing_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.emplace_back(unit(rng), unit(rng));
  double worst = 0.0;
  for (const ModelProblem& p : {perturbation_problem(1.0), perturbation_problem(1e-2),
                                perturbation_problem(1e-8), varying_coefficient_problem()})
    for (const Point& x : pts)
      worst = std::max(worst, std::abs(p.coeffs.forcing(x) - testing::fd_strong_operator(p, x)));
  const double t = seconds_since(start);
  o.pass = worst <= 1e-5 && t < 5.0;
  o.detail << "worst |f - f_fd| " << worst << ", " << fmt(t, 2) << " s";
  return o;
}

Outcome solver_spd() {
  Outcome o;
  const auto start = Clock::now();
  const PolyMesh mesh = build_structured_triangles(4);
  const GlobalSystem sys = assemble(Discretization(mesh, Space::C1nc, 2), perturbation_problem(1.0).coeffs);
  const Eigen::MatrixXd A(sys.matrix);
  const double asym = (A - A.transpose()).norm() / A.norm();
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues().minCoeff();
  const CgResult cg = solve_cg(sys.matrix, sys.rhs);
  const Eigen::VectorXd ref = solve_cholesky(A, sys.rhs);
  const double diff = (cg.x - ref).norm() / ref.norm();
  const double t = seconds_since(start);
  o.pass = sys.n_free == 49 && asym <= 1e-12 && lmin > 0.0 && cg.converged && diff <= 1e-8 && t < 5.0;
  o.detail << sys.n_free << " dofs, min eigenvalue " << lmin << ", CG vs Cholesky " << diff << ", "
           << fmt(t, 2) << " s";
  return o;
}

Outcome smooth_rates() {
  Outcome o;
  std::vector<StudyCase> cases;
  for (const std::string problem : {"varcoef", "perturbation"})
    for (Space s : all_spaces)
      for (int l = 2; l <= 4; ++l)
        cases.push_back(study(s, l, problem, 1.0, MeshFamily::simplex, {4, 8, 16, 32}));
  run_cases(cases);
  for (const auto& c : cases) {
    const int l = c.config.order;
    const bool ok = c.eoc >= l - 1 - 0.2 && c.eoc <= l - 1 + 0.35;
    o.pass = o.pass && ok;
    o.detail << "\n    " << c.config.problem << ' ' << space_name(c.config.space) << " l=" << l
             << " eoc " << fmt(c.eoc) << (c.error.empty() ? "" : " [" + c.error + "]") << " in [" << fmt(l - 1.2, 2) << ", " << fmt(l - 0.65, 2)
             << "] " << (ok ? "ok" : "out of band");
  }
  return o;
}

Outcome eps_robustness() {
  Outcome o;
  std::vector<StudyCase> cases;
  for (Space s : all_spaces)
    cases.push_back(study(s, 3, "perturbation", 1e-8, MeshFamily::simplex, {4, 8, 16, 32}));
  for (Space s : all_spaces)
    for (int l = 2; l <= 4; ++l)
      cases.push_back(study(s, l, "perturbation", 1e-2, MeshFamily::simplex, {4, 8, 16, 32}));
  run_cases(cases);
  const double lo[] = {0.7, 1.7, 2.5}, hi[] = {1.4, 2.35, 3.4};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const int l = c.config.order;
    bool ok = false;
    o.detail << "\n    eps=" << c.config.eps << ' ' << space_name(c.config.space) << " l=" << l
             << " eoc " << fmt(c.eoc) << (c.error.empty() ? "" : " [" + c.error + "]");
    if (i < 3) {
      ok = c.eoc >= lo[i] && c.eoc <= hi[i];
      o.detail << " in [" << lo[i] << ", " << hi[i] << "]";
    } else {
      ok = c.eoc >= l - 1 - 0.3;
      o.detail << " >= " << fmt(l - 1.3, 2);
    }
    o.detail << ' ' << (ok ? "ok" : "below");
    o.pass = o.pass && ok;
  }
  return o;
}

Outcome hexagon_rates() {
  Outcome o;
  std::vector<StudyCase> cases;
  for (Space s : all_spaces)
    for (int l = 2; l <= 3; ++l)
      cases.push_back(study(s, l, "perturbation", 1.0, MeshFamily::hexagon, {16, 32, 64}));
  run_cases(cases);
  for (const auto& c : cases) {
    const int l = c.config.order;
    const bool ok = c.eoc >= l - 1 - 0.35;
    o.pass = o.pass && ok;
    o.detail << "\n    " << space_name(c.config.space) << " l=" << l << " eoc " << fmt(c.eoc) << (c.error.empty() ? "" : " [" + c.error + "]")
             << " >= " << fmt(l - 1.35, 2) << ' ' << (ok ? "ok" : "below");
  }
  return o;
}

Outcome property_suites() {
  Outcome o;
  const auto start = Clock::now();
  auto check = [&](const std::string& name, bool ok) {
    o.pass = o.pass && ok;
    o.detail << "\n    " << name << ' ' << (ok ? "ok" : "FAILED");
  };

  // Mesh invariants.
  bool mesh_ok = true;
  for (int n : {2, 4, 8, 16, 32})
    for (const PolyMesh& m : {build_structured_triangles(n), build_remapped_hexagons(n)}) {
      mesh_ok = mesh_ok && m.n_vertices() - m.n_edges() + m.n_cells() == 1;
      mesh_ok = mesh_ok && std::abs(m.total_area() - 1.0) <= 1e-12;
      mesh_ok = mesh_ok && check_regularity(m).passes(0.2);
      for (int c = 0; c < m.n_cells(); ++c) {
        const CellGeometry& g = m.cell_geometry(c);
        mesh_ok = mesh_ok && g.area > 0.0;
        for (const auto& e : g.edges) {
          const Point n = m.edge_normal(e.edge);
          mesh_ok = mesh_ok && e.normal.x() == e.sign * n.x() && e.normal.y() == e.sign * n.y();
        }
      }
    }
  check("mesh Euler, area, regularity and normals", mesh_ok);

  // Single-valued global dofs of a smooth function.
  const SmoothFunction g{
      [](const Point& x) { return std::sin(1.3 * x.x()) * std::cos(0.7 * x.y()) + x.x() * x.y(); },
      [](const Point& x) {
        return Point(1.3 * std::cos(1.3 * x.x()) * std::cos(0.7 * x.y()) + x.y(),
                     -0.7 * std::sin(1.3 * x.x()) * std::sin(0.7 * x.y()) + x.x());
      }};
  double jump = 0.0;
  for (const PolyMesh& m : {build_structured_triangles(4), build_remapped_hexagons(5)})
    for (Space s : all_spaces)
      for (int l = 2; l <= 4; ++l) {
        const DofTuple t = space_tuple(s, l);
        const DofLayout layout = build_global_numbering(m, t);
        std::vector<double> value(layout.n_free, 0.0);
        std::vector<bool> seen(layout.n_free, false);
        for (int c = 0; c < m.n_cells(); ++c) {
          const Eigen::VectorXd local = dofs_of_function(t, m.cell_geometry(c), g, 2 * l + 2);
          for (int i = 0; i < layout.n_local(c); ++i) {
            const int gi = layout.cell_dofs[c][i];
            if (gi < 0) continue;
            const double v = layout.cell_signs[c][i] * local(i);
            if (seen[gi]) jump = std::max(jump, std::abs(v - value[gi]));
            value[gi] = v;
            seen[gi] = true;
          }
        }
      }
  check("dof single-valuedness (max jump " + sci(jump) + ")", jump <= 1e-12);

  // KKT constraint residuals of the value projection on random cells.
  std::mt19937 rng(8);
  double kkt = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const PolyMesh m = testing::single_cell_mesh(testing::random_polygon(rng));
    for (int l = 2; l <= 4; ++l) {
      const LocalElement elem(m.cell_geometry(0), space_tuple(Space::C1nc, l), l);
      const DofTuple& t = elem.tuple();
      if (t.d0i < 0) continue;
      const Eigen::MatrixXd P0 = build_value_projection(elem);
      const Eigen::MatrixXd DP0 = elem.dof_matrix() * P0;
      for (int a = 0; a < CellBasis::dim(t.d0i); ++a) {
        const int row = elem.interior_dof(a);
        const double scale = (elem.dof_matrix().row(row).cwiseAbs() * P0.cwiseAbs()).maxCoeff();
        kkt = std::max(kkt, (DP0.row(row) - Eigen::RowVectorXd::Unit(elem.n_dofs(), row))
                                    .lpNorm<Eigen::Infinity>() / std::max(scale, 1.0));
      }
    }
  }
  check("KKT interior constraints (relative residual " + sci(kkt) + ")", kkt <= 1e-12);

  // CG against dense Cholesky in the energy norm.
  double cg_gap = 0.0;
  for (const PolyMesh& m : {build_structured_triangles(8), build_remapped_hexagons(8)})
    for (Space s : all_spaces)
      for (int l = 2; l <= 4; ++l) {
        const GlobalSystem sys = assemble(Discretization(m, s, l), varying_coefficient_problem().coeffs);
        const Eigen::MatrixXd A(sys.matrix);
        const Eigen::VectorXd ref = solve_cholesky(A, sys.rhs);
        CgOptions options;
        options.tolerance = 1e-12;
        options.max_iterations = 100000;
        const CgResult cg = solve_cg(sys.matrix, sys.rhs, options);
        const Eigen::VectorXd e = cg.x - ref;
        cg_gap = std::max(cg_gap, std::sqrt(e.dot(A * e) / ref.dot(A * ref)));
      }
  check("CG vs dense energy-norm gap " + sci(cg_gap), cg_gap <= 1e-8);

  // EOC arithmetic and determinism of the CSV export.
  RunConfig c;
  c.space = Space::C1mod;
  c.order = 3;
  c.levels = {2, 4, 8};
  c.timing = false;
  const auto records = run_study(c);
  const std::string csv = to_csv(records, false);
  bool eoc_ok = true;
  {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<std::string>> raw;
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::string s;
      std::istringstream ls(line);
      while (std::getline(ls, s, ',')) f.push_back(s);
      raw.push_back(f);
    }
    for (std::size_t i = 1; i < raw.size(); ++i)
      for (int col : {3, 5, 7, 9}) {
        const double expected = std::log(std::stod(raw[i - 1][col]) / std::stod(raw[i][col])) /
                                std::log(std::stod(raw[i - 1][1]) / std::stod(raw[i][1]));
        eoc_ok = eoc_ok && std::abs(std::stod(raw[i][col + 1]) - expected) <= 1e-12 * std::max(1.0, std::abs(expected));
      }
    eoc_ok = eoc_ok && raw.size() == 3 && raw[0][4].empty();
  }
  check("EOC arithmetic from the exported columns", eoc_ok);
  check("deterministic CSV bytes", to_csv(run_study(c), false) == csv);

  const double t = seconds_since(start);
  check("runtime " + fmt(t, 1) + " s under 120 s", t < 120.0);
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"projection exactness on 100 random polygons", projection_exactness},
      {"polynomial consistency on 50 random cells", polynomial_consistency},
      {"forcing against the finite-difference strong operator", forcing_oracle},
      {"49-dof system is SPD and CG matches Cholesky", solver_spd},
      {"smooth-regime energy rates on simplex meshes", smooth_rates},
      {"eps-robustness of the energy rates", eps_robustness},
      {"energy rates on remapped hexagons", hexagon_rates},
      {"property suites", property_suites},
  };
  if (selected.empty())
    for (int i = 1; i <= 8; ++i) selected.push_back(i);

  bool all = true;
  for (int k : selected) {
    const Criterion& c = criteria[k - 1];
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    all = all && o.pass;
    std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", k, c.title,
                o.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
