// Convergence study driver: one CSV row per refinement level.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vem/error.hpp"
#include "vem/harness.hpp"

namespace {

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      levels.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw vem::Error("config", "bad level '" + item + "'");
    }
  }
  return levels;
}

vem::RunConfig make_config(const std::string& space, int order, const std::string& problem,
                           double eps, const std::string& mesh, const std::string& levels,
                           double tol, const std::string& out, const std::string& dump,
                           bool no_timing) {
  vem::RunConfig config;
  config.space = vem::parse_space(space);
  config.order = order;
  config.problem = problem;
  config.eps = eps;
  if (mesh == "simplex") {
    config.mesh = vem::MeshFamily::simplex;
  } else if (mesh == "hex") {
    config.mesh = vem::MeshFamily::hexagon;
  } else if (mesh.rfind("file:", 0) == 0) {
    config.mesh = vem::MeshFamily::file;
    config.mesh_file = mesh.substr(5);
  } else {
    throw vem::Error("config", "unknown mesh '" + mesh + "'");
  }
  config.levels = parse_levels(levels);
  config.tol = tol;
  config.out = out;
  config.dump_matrix = dump;
  config.timing = !no_timing;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming VEM for fourth order problems: convergence studies"};
  std::string space = "c1nc", problem = "perturbation", mesh = "simplex", levels = "4,8,16,32";
  std::string out, dump;
  int order = 2;
  double eps = 1.0, tol = 1e-10;
  bool no_timing = false;
  app.add_option("--space", space, "c1nc | c1mod | c1c0")->capture_default_str();
  app.add_option("--order", order, "polynomial order l")
      ->check(CLI::IsMember({2, 3, 4}))
      ->capture_default_str();
  app.add_option("--problem", problem, "perturbation | varcoef")->capture_default_str();
  app.add_option("--eps", eps, "perturbation parameter")->capture_default_str();
  app.add_option("--mesh", mesh, "simplex | hex | file:<path>")->capture_default_str();
  app.add_option("--levels", levels, "comma separated n per level")->capture_default_str();
  app.add_option("--tol", tol, "relative CG residual")->capture_default_str();
  app.add_option("--out", out, "CSV path; .json and .plot.dat are written alongside");
  app.add_option("--dump-matrix", dump, "write the finest global matrix as 0-based COO text");
  app.add_flag("--no-timing", no_timing, "write 0 in the seconds column");
  CLI11_PARSE(app, argc, argv);

  try {
    const vem::RunConfig config =
        make_config(space, order, problem, eps, mesh, levels, tol, out, dump, no_timing);
    const auto records = vem::run_study(config);
    std::cout << vem::to_csv(records, config.timing);
  } catch (const vem::Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
