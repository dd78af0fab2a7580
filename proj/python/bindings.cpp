#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vem/error.hpp"
#include "vem/harness.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonconforming virtual elements for fourth order problems";

  static py::exception<vem::Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vem::Error& e) {
      py::set_error(error, (e.stage() + ": " + e.what()).c_str());
    }
  });

  py::enum_<vem::Space>(m, "Space")
      .value("C1nc", vem::Space::C1nc)
      .value("C1mod", vem::Space::C1mod)
      .value("C1C0", vem::Space::C1C0);

  m.def("space_tuple", [](vem::Space s, int order) {
    const vem::DofTuple t = vem::space_tuple(s, order);
    return py::make_tuple(t.d0v, t.d1v, t.d0e, t.d1e, t.d0i);
  });

  py::class_<vem::PolyMesh>(m, "PolyMesh")
      .def(py::init<std::vector<vem::Point>, std::vector<std::vector<int>>>(),
           py::arg("vertices"), py::arg("cells"))
      .def_property_readonly("n_vertices", &vem::PolyMesh::n_vertices)
      .def_property_readonly("n_edges", &vem::PolyMesh::n_edges)
      .def_property_readonly("n_cells", &vem::PolyMesh::n_cells)
      .def("max_diameter", &vem::PolyMesh::max_diameter)
      .def("total_area", &vem::PolyMesh::total_area)
      .def("to_json", [](const vem::PolyMesh& mesh) { return vem::serialize_mesh(mesh); });

  m.def("build_structured_triangles", &vem::build_structured_triangles, py::arg("n"));
  m.def("build_remapped_hexagons", &vem::build_remapped_hexagons, py::arg("n"),
        py::arg("delta") = 0.05);

  py::class_<vem::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("space", &vem::RunConfig::space)
      .def_readwrite("order", &vem::RunConfig::order)
      .def_readwrite("problem", &vem::RunConfig::problem)
      .def_readwrite("eps", &vem::RunConfig::eps)
      .def_property(
          "mesh",
          [](const vem::RunConfig& c) -> std::string {
            switch (c.mesh) {
              case vem::MeshFamily::simplex: return "simplex";
              case vem::MeshFamily::hexagon: return "hex";
              case vem::MeshFamily::file: return "file:" + c.mesh_file.string();
            }
            return "";
          },
          [](vem::RunConfig& c, const std::string& name) {
            if (name == "simplex") {
              c.mesh = vem::MeshFamily::simplex;
            } else if (name == "hex") {
              c.mesh = vem::MeshFamily::hexagon;
            } else if (name.rfind("file:", 0) == 0) {
              c.mesh = vem::MeshFamily::file;
              c.mesh_file = name.substr(5);
            } else {
              throw vem::Error("config", "unknown mesh '" + name + "'");
            }
          })
      .def_readwrite("levels", &vem::RunConfig::levels)
      .def_readwrite("tol", &vem::RunConfig::tol)
      .def_readwrite("out", &vem::RunConfig::out)
      .def_readwrite("timing", &vem::RunConfig::timing);

  py::class_<vem::ConvergenceRecord>(m, "ConvergenceRecord")
      .def_readonly("level", &vem::ConvergenceRecord::level)
      .def_readonly("h", &vem::ConvergenceRecord::h)
      .def_readonly("dofs", &vem::ConvergenceRecord::dofs)
      .def_readonly("cg_iters", &vem::ConvergenceRecord::cg_iters)
      .def_readonly("seconds", &vem::ConvergenceRecord::seconds)
      .def_property_readonly("errors",
                             [](const vem::ConvergenceRecord& r) {
                               py::dict d;
                               d["energy"] = r.errors.energy;
                               d["h2"] = r.errors.h2;
                               d["h1"] = r.errors.h1;
                               d["l2"] = r.errors.l2;
                               return d;
                             })
      .def_property_readonly("eoc", [](const vem::ConvergenceRecord& r) -> py::object {
        if (!r.eoc) return py::none();
        py::dict d;
        d["energy"] = r.eoc->energy;
        d["h2"] = r.eoc->h2;
        d["h1"] = r.eoc->h1;
        d["l2"] = r.eoc->l2;
        return d;
      });

  m.def("run_study", &vem::run_study, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve_once",
      [](const vem::RunConfig& config, int level) {
        vem::LevelResult r = vem::solve_once(config, level);
        return py::make_tuple(r.solution, r.record);
      },
      py::arg("config"), py::arg("level"));
  m.def("eoc", &vem::eoc, py::arg("e_coarse"), py::arg("e_fine"), py::arg("h_coarse"),
        py::arg("h_fine"));
  m.def("to_csv", &vem::to_csv, py::arg("records"), py::arg("timing") = true);
}
