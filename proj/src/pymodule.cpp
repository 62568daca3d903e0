#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corelab/commands.hpp"
#include "corelab/structure.hpp"

namespace py = pybind11;

namespace corelab {
namespace {

std::string finish(const CommandResult& res) {
  Json j = res.report.json();
  j["exit_code"] = res.exit_code;
  return j.dump();
}

std::string py_validate(const std::string& path) {
  CommandOptions opt;
  return finish(cmd_validate(path, opt));
}

std::string py_structure(const std::string& path, std::uint64_t seed,
                         const std::vector<int>& m) {
  CommandOptions opt;
  opt.seed = seed;
  opt.m = m;
  return finish(cmd_structure(path, opt));
}

std::string py_equiv(const std::string& path_a, const std::string& path_b,
                     std::uint64_t seed) {
  CommandOptions opt;
  opt.seed = seed;
  return finish(cmd_equiv(path_a, path_b, opt));
}

std::string py_dilate(const std::string& path, int depth, bool check,
                      std::uint64_t seed) {
  CommandOptions opt;
  opt.depth = depth;
  opt.check = check;
  opt.seed = seed;
  return finish(cmd_dilate(path, opt));
}

std::string py_report(const std::string& path, int depth, std::uint64_t seed) {
  CommandOptions opt;
  opt.depth = depth;
  opt.seed = seed;
  return finish(cmd_report(path, opt));
}

ComplexMatrix py_vhat(const std::vector<ComplexMatrix>& generators,
                      std::uint64_t seed) {
  if (generators.empty())
    throw ParseError("need at least one generator matrix");
  OperatorAlgebra alg =
      generate_algebra(generators, generators[0].rows(), Tolerance{});
  return minimal_cyclic_coinvariant(alg, seed, Tolerance{}).frame();
}

std::pair<std::size_t, std::size_t> py_algebra_dims(
    const std::vector<ComplexMatrix>& generators) {
  if (generators.empty())
    throw ParseError("need at least one generator matrix");
  OperatorAlgebra alg =
      generate_algebra(generators, generators[0].rows(), Tolerance{});
  return {alg.basis.size(), commutant(alg, Tolerance{}).basis.size()};
}

}  // namespace
}  // namespace corelab

PYBIND11_MODULE(_corelab, m) {
  using namespace corelab;
  m.doc() = "analysis of graph correspondence representations";
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<AnalysisError>(m, "AnalysisError");
  m.def("version", [] { return std::string("corelab 0.1.0"); });
  m.def("validate_file", &py_validate, py::arg("path"));
  m.def("structure_file", &py_structure, py::arg("path"),
        py::arg("seed") = 1234, py::arg("m") = std::vector<int>{});
  m.def("equiv_files", &py_equiv, py::arg("path_a"), py::arg("path_b"),
        py::arg("seed") = 1234);
  m.def("dilate_file", &py_dilate, py::arg("path"), py::arg("depth") = 4,
        py::arg("check") = true, py::arg("seed") = 1234);
  m.def("report_file", &py_report, py::arg("path"), py::arg("depth") = 4,
        py::arg("seed") = 1234);
  m.def("minimal_cyclic_coinvariant", &py_vhat, py::arg("generators"),
        py::arg("seed") = 1234);
  m.def("algebra_dims", &py_algebra_dims, py::arg("generators"));
}
