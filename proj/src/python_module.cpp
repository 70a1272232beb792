// Python bindings. Structured values cross the boundary as JSON text; python/maxavg wraps them.

#include "commands.hpp"
#include "maxavg/discrete_averaging.hpp"
#include "maxavg/exponent_region.hpp"
#include "maxavg/json_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace maxavg;
using nlohmann::json;

namespace {

AveragingMatrix matrix_arg(const std::string& text) { return matrix_from_json(json::parse(text)); }

std::vector<Signal> signals_arg(const std::string& text) {
  std::vector<Signal> out;
  for (const auto& s : json::parse(text)) out.push_back(signal_from_json(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_maxavg, m) {
  m.doc() = "Exponent regions and multilinear discrete maximal averages";

  m.def("rank_star", [](const std::string& matrix) { return nondegeneracy_rank(matrix_arg(matrix).entries); });
  m.def("rank_star_extended",
        [](const std::string& matrix) { return nondegeneracy_rank(extend_matrix(matrix_arg(matrix))); });
  m.def("complexity", [](const std::string& matrix) { return complexity(matrix_arg(matrix)); });
  m.def("corollary_threshold",
        [](const std::string& matrix) { return to_string(corollary_threshold(matrix_arg(matrix))); });

  m.def("vertex_set", [](const std::string& matrix, const std::string& eps) {
    return to_json(vertex_set(matrix_arg(matrix), parse_rational(eps))).dump();
  });

  m.def(
      "region_contains",
      [](const std::string& matrix, const std::string& point, std::size_t resolution) {
        ExponentTuple x = exponents_from_json(json::parse(point));
        py::gil_scoped_release release;
        MembershipVerdict v = region_contains(matrix_arg(matrix), x, resolution);
        json j = to_json(v);
        j["certificate_ok"] = !v.inside() || verify_certificate(v, x);
        return j.dump();
      },
      py::arg("matrix"), py::arg("point"), py::arg("resolution") = 1024);

  m.def("corollary_contains", [](const std::string& matrix, const std::string& point) {
    return corollary_region_contains(matrix_arg(matrix), exponents_from_json(json::parse(point)));
  });

  m.def(
      "maximal_at",
      [](const std::string& matrix, const std::string& signals, long x, long cap) {
        MaximalValue v = maximal_at(integer_matrix(matrix_arg(matrix)), signals_arg(signals), x, cap);
        return py::make_tuple(v.value, v.argmax_n);
      },
      py::arg("matrix"), py::arg("signals"), py::arg("x"), py::arg("cap") = 0);

  m.def(
      "average_at",
      [](const std::string& matrix, const std::string& signals, long n, long x, bool absolute) {
        return average_at(integer_matrix(matrix_arg(matrix)), signals_arg(signals), n, x, absolute);
      },
      py::arg("matrix"), py::arg("signals"), py::arg("n"), py::arg("x"), py::arg("absolute") = true);

  m.def(
      "ergodic_average",
      [](const std::vector<std::vector<long>>& a, long size, const std::vector<std::vector<double>>& f, long l, long x) {
        return ergodic_average(a, FiniteSystem(size), f, l, x);
      },
      py::arg("matrix"), py::arg("size"), py::arg("functions"), py::arg("length"), py::arg("x"));

  m.def(
      "period_mean",
      [](const std::vector<std::vector<long>>& a, long size, const std::vector<std::vector<double>>& f, long x) {
        return period_mean(a, FiniteSystem(size), f, x);
      },
      py::arg("matrix"), py::arg("size"), py::arg("functions"), py::arg("x"));

  m.def("command_names", &cli::command_names);

  // Returns (report json, csv, checks_passed); files are not written.
  m.def("run_command", [](const std::string& name, const std::string& config) {
    json cfg = json::parse(config);
    cli::Output out;
    {
      py::gil_scoped_release release;
      out = cli::run_command(name, cfg);
    }
    return py::make_tuple(out.report.dump(), out.csv, out.checks_passed);
  });
}
