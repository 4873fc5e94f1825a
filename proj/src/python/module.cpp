#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "subgauss/bounds.hpp"
#include "subgauss/cli.hpp"
#include "subgauss/ensembles.hpp"
#include "subgauss/orlicz.hpp"

namespace py = pybind11;
using namespace subgauss;

namespace {

PsiNorm psi_of(const std::string& dist, std::optional<double> param, double alpha) {
  const Distribution law = parse_distribution(dist, param.value_or(default_parameter(dist)));
  return psi_norm_of_law(law, alpha);
}

}  // namespace

PYBIND11_MODULE(_subgauss, m) {
  m.doc() = "Orlicz norms, tail bounds and random-matrix probes";

  py::class_<Distribution>(m, "Distribution")
      .def(py::init(&parse_distribution), py::arg("name"), py::arg("parameter"))
      .def_property_readonly("name", &Distribution::name)
      .def_property_readonly("mean", &Distribution::mean)
      .def_property_readonly("variance", &Distribution::variance)
      .def("__repr__", &Distribution::name);

  py::class_<PsiNorm>(m, "PsiNorm")
      .def_readonly("alpha", &PsiNorm::alpha)
      .def_readonly("value", &PsiNorm::value)
      .def_readonly("ci", &PsiNorm::ci)
      .def_readonly("upper_bound", &PsiNorm::upper_bound)
      .def_property_readonly("method", [](const PsiNorm& p) { return to_string(p.method); });

  py::class_<TailBound>(m, "TailBound")
      .def_readonly("name", &TailBound::name)
      .def_readonly("V", &TailBound::V)
      .def_readonly("S", &TailBound::S)
      .def_readonly("c", &TailBound::c)
      .def("__call__", &TailBound::operator(), py::arg("t"))
      .def("log_value", &TailBound::log_value, py::arg("t"));

  py::class_<ScalarInequalityCheck>(m, "ScalarInequalityCheck")
      .def_readonly("name", &ScalarInequalityCheck::name)
      .def_readonly("max_slack", &ScalarInequalityCheck::max_slack)
      .def_readonly("holds", &ScalarInequalityCheck::holds);

  m.def("psi_norm", &psi_of, py::arg("dist"), py::arg("param") = py::none(), py::arg("alpha") = 2.0,
        "Orlicz norm of a named law by root finding on its moment generating function.");
  m.def("psi_norm_analytic", &psi_norm_analytic, py::arg("law"), py::arg("alpha"));
  m.def(
      "psi_norm_from_samples",
      [](const std::vector<double>& xs, double alpha, std::uint64_t seed) {
        SampleOptions o;
        o.seed = seed;
        return psi_norm_from_samples(xs, alpha, o);
      },
      py::arg("samples"), py::arg("alpha") = 2.0, py::arg("seed") = kDefaultSeed);
  m.def("sub_gaussian_parameter", &sub_gaussian_parameter, py::arg("law"));
  m.def("k2logk", &k2logk, py::arg("K"));

  m.def(
      "bernstein_bound",
      [](const std::vector<double>& a, const std::vector<double>& ks, std::optional<double> c) {
        return new_bernstein_bound(a, ks, c);
      },
      py::arg("a"), py::arg("ks"), py::arg("c") = py::none());
  m.def(
      "hanson_wright_bound",
      [](const Matrix& A, double K, std::optional<double> c) { return new_hanson_wright_bound(A, K, c); },
      py::arg("A"), py::arg("K"), py::arg("c") = py::none());

  m.def("binom_tail_lower", &binom_tail_lower, py::arg("m"), py::arg("p"), py::arg("k"));
  m.def("binom_tail_exact", &binom_tail_exact, py::arg("m"), py::arg("p"), py::arg("j"));
  m.def("appendix_c_check", &appendix_c_check, py::arg("grid_density") = 100000);

  m.def("jl_dimension", &jl_dimension, py::arg("K"), py::arg("eps"), py::arg("delta"), py::arg("C"));
  m.def("sketch_dimension", &sketch_dimension, py::arg("K"), py::arg("width_sq"), py::arg("delta"),
        py::arg("c0"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return cli::dispatch(cli::parse_args(args));
      },
      py::arg("args"), "Runs one command-line subcommand and returns its exit code.");

  py::register_exception<cli::UsageError>(m, "UsageError", PyExc_ValueError);
}
