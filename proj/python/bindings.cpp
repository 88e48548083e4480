#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sitelab/catalogue.hpp"
#include "sitelab/experiments.hpp"
#include "sitelab/scenario.hpp"
#include "sitelab/valuation.hpp"

namespace py = pybind11;
using namespace sitelab;
namespace val = sitelab::valuation;

namespace {

scenario::Options options(std::uint64_t seed, std::optional<int> max_n) {
  scenario::Options o;
  o.seed = seed;
  o.max_n = max_n;
  return o;
}

py::tuple outcome(const scenario::Outcome& r) { return py::make_tuple(r.report.dump(), r.exit_code); }

template <typename E>
E parsed(std::optional<E> v, const std::string& what, const std::string& name) {
  if (!v) throw py::value_error("unknown " + what + " '" + name + "'");
  return *v;
}

}  // namespace

PYBIND11_MODULE(_sitelab, m) {
  m.doc() = "Native core of the sitelab package";

  m.def("value", [](const std::string& f) { return val::value(val::parse_rational_fn(f)).str(); }, py::arg("f"));
  m.def(
      "membership",
      [](const std::string& f) { return val::to_string(val::rv_membership(val::parse_rational_fn(f))); },
      py::arg("f"));
  m.def(
      "center_sequence",
      [](int n) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& c : val::center_sequence(n)) out.emplace_back(std::string(1, c.chart), c.beta.str(), c.gamma.str());
        return out;
      },
      py::arg("n"));
  m.def(
      "lift_dvr_point",
      [](const std::string& a, const std::string& b, int max_n) {
        const auto r = val::lift_dvr_point(val::parse_t_function(a), val::parse_t_function(b), max_n);
        py::dict d;
        d["escaped"] = r.escaped;
        d["step"] = r.step;
        d["word"] = r.word;
        d["witness"] = r.witness;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("max_n") = 64);
  m.def(
      "canonical_rv_trace",
      [](int n) {
        const auto t = val::canonical_rv_trace(n);
        py::dict d;
        d["escaped"] = t.escaped;
        d["word"] = t.word;
        d["matches_center"] = t.matches_center;
        d["runs"] = t.runs;
        d["preperiod"] = t.preperiod;
        d["period"] = t.period;
        d["expected_period"] = t.expected_period;
        std::vector<std::pair<std::string, std::string>> values;
        for (std::size_t k = 0; k < t.values_a.size(); ++k) values.emplace_back(t.values_a[k].str(), t.values_b[k].str());
        d["values"] = values;
        return d;
      },
      py::arg("n"));
  m.def(
      "unit_or_zero_lift",
      [](const std::string& model, const std::string& r) {
        const auto l = val::unit_or_zero_lift(parsed(val::parse_ring_model(model), "ring model", model),
                                              val::parse_t_function(r));
        return py::make_tuple(val::to_string(l.kind), l.witness);
      },
      py::arg("model"), py::arg("r"));
  m.def(
      "divisibility_witness",
      [](const std::string& group, long long l) -> py::tuple {
        const auto r = val::divisibility_witness(parsed(val::parse_value_group(group), "value group", group), l);
        return py::make_tuple(r.divisible, r.witness ? py::cast(r.witness->str()) : py::none());
      },
      py::arg("group"), py::arg("l"));

  m.def("catalogue_spaces", [] {
    std::vector<std::string> out;
    for (const auto& ns : space_catalogue()) out.push_back(ns.name);
    return out;
  });
  m.def(
      "topology_soundness",
      [](int max_points, int max_family) {
        py::gil_scoped_release release;
        return experiments::topology_soundness(max_points, max_family);
      },
      py::arg("max_points"), py::arg("max_family"));
  m.def(
      "cover_detection_sweep",
      [](int max_points, int max_family) {
        py::gil_scoped_release release;
        return experiments::cover_detection_sweep(max_points, max_family);
      },
      py::arg("max_points"), py::arg("max_family"));
  m.def(
      "deligne_sample",
      [](const std::string& space, int samples, std::uint64_t seed) {
        const auto s = catalogue_space(space);
        experiments::DeligneResult r;
        {
          py::gil_scoped_release release;
          r = experiments::deligne_sample(s, samples, seed);
        }
        return py::make_tuple(r.outcome.ok, r.outcome.checked, r.isos, r.discrepancies);
      },
      py::arg("space"), py::arg("samples") = 200, py::arg("seed") = 0);

  py::class_<experiments::Outcome>(m, "Outcome")
      .def_readonly("ok", &experiments::Outcome::ok)
      .def_readonly("checked", &experiments::Outcome::checked)
      .def_readonly("witness", &experiments::Outcome::witness)
      .def("__repr__", [](const experiments::Outcome& o) {
        return "Outcome(ok=" + std::string(o.ok ? "True" : "False") + ", checked=" + std::to_string(o.checked) + ")";
      });

  m.def("operations", &scenario::operations);
  m.def("builtin_demos", &scenario::builtin_demos);
  m.def(
      "run_scenario_text",
      [](const std::string& text, const std::string& base_dir, std::uint64_t seed, std::optional<int> max_n) {
        scenario::Outcome r;
        {
          py::gil_scoped_release release;
          try {
            r = scenario::run(io::parse_document(text, "<scenario>"), options(seed, max_n), base_dir);
          } catch (const io::DocumentError& e) {
            r.report = {{"schema", 1}, {"name", "<scenario>"}, {"status", "error"}, {"error", e.what()},
                        {"entries", io::Json::array()}};
            r.exit_code = 2;
          }
        }
        return outcome(r);
      },
      py::arg("text"), py::arg("base_dir") = ".", py::arg("seed") = 0, py::arg("max_n") = py::none());
  m.def(
      "run_scenario_file",
      [](const std::string& path, std::uint64_t seed, std::optional<int> max_n) {
        scenario::Outcome r;
        {
          py::gil_scoped_release release;
          r = scenario::run_file(path, options(seed, max_n));
        }
        return outcome(r);
      },
      py::arg("path"), py::arg("seed") = 0, py::arg("max_n") = py::none());
  m.def(
      "run_demo",
      [](const std::string& name, std::uint64_t seed) {
        scenario::Outcome r;
        {
          py::gil_scoped_release release;
          r = scenario::run_demo(name, options(seed, std::nullopt));
        }
        return outcome(r);
      },
      py::arg("name"), py::arg("seed") = 0);
}
