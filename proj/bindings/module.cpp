// Python extension: periodic grids, tensor fields with numpy interop, the
// difference-operator toolbox, and the scenario harness.
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlt/field.hpp"
#include "nlt/grid.hpp"
#include "nlt/harness.hpp"
#include "nlt/ops.hpp"
#include "nlt/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace py = pybind11;

namespace {

// Numpy layout mirrors Field storage exactly: tensor indices first (each of
// extent grid.dims), then the node axes slowest-to-fastest ([ny,] nx).
std::vector<py::ssize_t> numpy_shape(const nlt::Field& f) {
  std::vector<py::ssize_t> shape(std::size_t(f.rank()), f.grid().dims());
  if (f.grid().dims() == 2) shape.push_back(f.grid().n(1));
  shape.push_back(f.grid().n(0));
  return shape;
}

py::array_t<double> to_numpy(const nlt::Field& f) {
  py::array_t<double> out(numpy_shape(f));
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

nlt::Field from_numpy(const nlt::Grid& g,
                      py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  const int rank = int(a.ndim()) - g.dims();
  if (rank < 0 || rank > 3)
    throw std::invalid_argument("from_numpy: array rank incompatible with a rank-0..3 field");
  nlt::Field f(g, rank);
  const auto want = numpy_shape(f);
  for (std::size_t d = 0; d < want.size(); ++d)
    if (a.shape(py::ssize_t(d)) != want[d])
      throw std::invalid_argument("from_numpy: shape must be (dims,)*rank + ([ny,] nx)");
  std::copy(a.data(), a.data() + a.size(), f.data().data());
  return f;
}

std::string grid_repr(const nlt::Grid& g) {
  char buf[128];
  if (g.dims() == 1)
    std::snprintf(buf, sizeof buf, "Grid(n=%d, length=%g)", g.n(0), g.length(0));
  else
    std::snprintf(buf, sizeof buf, "Grid(nx=%d, ny=%d, lx=%g, ly=%g)", g.n(0), g.n(1),
                  g.length(0), g.length(1));
  return buf;
}

py::dict report_to_dict(const nlt::harness::RunReport& rep) {
  py::list checks;
  for (const auto& c : rep.checks) {
    py::dict cd;
    cd["name"] = c.name;
    cd["value"] = c.value;
    cd["comparison"] = c.comparison;
    cd["tolerance"] = c.tolerance;
    cd["pass"] = c.pass;
    cd["note"] = c.note;
    checks.append(cd);
  }
  py::dict d;
  d["scenario"] = rep.scenario;
  d["model"] = rep.model;
  d["seed"] = rep.seed;
  d["config"] = rep.config_echo;
  d["checks"] = checks;
  d["outputs"] = rep.outputs;
  d["directory"] = rep.directory;
  d["wall_seconds"] = rep.wall_seconds;
  d["pass"] = rep.pass();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "periodic grids, tensor fields, difference operators, and the scenario harness";

  py::class_<nlt::Grid>(m, "Grid", "uniform periodic grid in one or two dimensions")
      .def(py::init<int, double>(), py::arg("n"), py::arg("length"))
      .def(py::init<int, int, double, double>(), py::arg("nx"), py::arg("ny"), py::arg("lx"),
           py::arg("ly"))
      .def_property_readonly("dims", &nlt::Grid::dims)
      .def("n", &nlt::Grid::n, py::arg("axis") = 0)
      .def("length", &nlt::Grid::length, py::arg("axis") = 0)
      .def("spacing", &nlt::Grid::spacing, py::arg("axis") = 0)
      .def_property_readonly("nodes", &nlt::Grid::nodes)
      .def_property_readonly("cell_volume", &nlt::Grid::cell_volume)
      .def("coord", &nlt::Grid::coord, py::arg("axis"), py::arg("node"))
      .def("index", &nlt::Grid::index, py::arg("ix"), py::arg("iy") = 0)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__repr__", &grid_repr);

  py::class_<nlt::Field>(m, "Field", "nodal tensor field of rank 0..3 on a periodic grid")
      .def(py::init<const nlt::Grid&, int>(), py::arg("grid"), py::arg("rank"))
      .def_static("zeros", &nlt::Field::zeros, py::arg("grid"), py::arg("rank"))
      .def_static("from_numpy", &from_numpy, py::arg("grid"), py::arg("array"),
                  "build a field from an array shaped (dims,)*rank + ([ny,] nx)")
      .def("to_numpy", &to_numpy, "copy out as an array shaped (dims,)*rank + ([ny,] nx)")
      .def_property_readonly("rank", &nlt::Field::rank)
      .def_property_readonly("comps", &nlt::Field::comps)
      .def_property_readonly("grid", &nlt::Field::grid)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def("__repr__", [](const nlt::Field& f) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Field(rank=%d, %s)", f.rank(), grid_repr(f.grid()).c_str());
        return std::string(buf);
      });

  py::class_<nlt::Rng>(m, "Rng", "deterministic random source (seed reproduces the stream)")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", py::overload_cast<>(&nlt::Rng::uniform))
      .def("uniform", py::overload_cast<double, double>(&nlt::Rng::uniform), py::arg("a"),
           py::arg("b"))
      .def("uniform_int", &nlt::Rng::uniform_int, py::arg("lo"), py::arg("hi"))
      .def("raw", &nlt::Rng::raw);

  m.def("random_field", &nlt::random_field, py::arg("rng"), py::arg("grid"), py::arg("rank"),
        py::arg("amp"), "independent uniform nodal values in [-amp, amp]");
  m.def("random_trig_field", &nlt::random_trig_field, py::arg("rng"), py::arg("grid"),
        py::arg("rank"), py::arg("kmax"), py::arg("nterms"), py::arg("amp"),
        "smooth periodic field; draws are independent of the grid resolution");

  m.def("grad", &nlt::grad, py::arg("f"),
        "central-difference gradient; the derivative axis becomes the first tensor index");
  m.def("div", &nlt::div, py::arg("f"),
        "central-difference divergence contracting the first tensor index");
  m.def("laplacian", &nlt::laplacian, py::arg("f"), "compact 3-point-per-axis laplacian");
  m.def("grad2", &nlt::grad2, py::arg("f"), "grad(grad(f))");
  m.def("biharmonic", &nlt::biharmonic, py::arg("f"), "laplacian(laplacian(f))");
  m.def("volume_integral", &nlt::volume_integral, py::arg("f"));
  m.def("inner", &nlt::inner, py::arg("a"), py::arg("b"),
        "pointwise full contraction of equal-rank fields");
  m.def("contract_last", &nlt::contract_last, py::arg("a"), py::arg("b"), py::arg("m"));
  m.def("multiply", &nlt::multiply, py::arg("s"), py::arg("f"));
  m.def("divide", &nlt::divide, py::arg("f"), py::arg("s"));
  m.def("max_abs", &nlt::max_abs, py::arg("f"));
  m.def("min_value", &nlt::min_value, py::arg("f"));
  m.def("l1_norm", &nlt::l1_norm, py::arg("f"));
  m.def("sup_distance_rel", &nlt::sup_distance_rel, py::arg("a"), py::arg("b"),
        py::arg("floor") = 1e-300);
  m.def("shifted", &nlt::shifted, py::arg("f"), py::arg("off_x"), py::arg("off_y") = 0,
        "cyclic translation by whole cells");
  m.def("second_grade_identity_residual", &nlt::second_grade_identity_residual, py::arg("t3"),
        py::arg("v"), "residual field of the second-grade product-rule identity");
  m.def("gk_identity_residual", &nlt::gk_identity_residual, py::arg("q"),
        "global residual of the heat-flux product-rule identity");

  m.def("list_scenarios", &nlt::harness::list_scenarios, "names of the bundled scenarios");
  m.def("scenario_summary", &nlt::harness::scenario_summary, py::arg("name"),
        "first comment line of a bundled scenario");
  m.def("validate_scenario", &nlt::harness::validate_scenario, py::arg("ref"),
        "parse and schema-check a bundled name or config path; returns the resolved keys");
  m.def(
      "run_scenario",
      [](const std::string& ref, long seed) {
        nlt::harness::RunReport rep;
        {
          py::gil_scoped_release release;
          rep = nlt::harness::run_scenario(ref, seed);
        }
        return report_to_dict(rep);
      },
      py::arg("ref"), py::arg("seed") = -1,
      "run a bundled scenario or config path; artifacts land under NLT_OUTPUT_DIR (default "
      "'out'); seed >= 0 overrides the config's seed");
}
