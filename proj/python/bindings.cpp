#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "hfsign/homology.hpp"

namespace py = pybind11;
using namespace hfsign;

namespace {

std::string as_json_text(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  py::object dumps = py::module_::import("json").attr("dumps");
  return dumps(obj).cast<std::string>();
}

py::object json_to_py(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

py::int_ big_to_py(const BigInt& v) {
  return py::module_::import("builtins").attr("int")(py::str(v.str()));
}

SignFunction diagram_signs(const GridDiagram& d) {
  return sign_function(shared_evaluator(d.n, d.b_stabilizations));
}

py::dict homology_to_py(const HomologyResult& h) {
  py::dict out;
  out["betti"] = h.betti;
  py::list torsion;
  for (const auto& t : h.torsion) torsion.append(big_to_py(t));
  out["torsion"] = torsion;
  out["f2_dim"] = h.f2_dim;
  out["q_rank"] = h.q_rank;
  return out;
}

}  // namespace

PYBIND11_MODULE(hfsign, m) {
  m.doc() = "exact sign assignments on formal flows and integral grid-diagram "
            "Floer homology";

  py::register_exception<Error>(m, "HfsignError");

  m.def("counts", [](int n) {
    return py::make_tuple(generator_count(n), bigon_count(n), rectangle_count(n));
  }, py::arg("n"), "generator, bigon and rectangle counts for a power");

  m.def("enumerate_counts", [](int n) {
    auto gens = enumerate_generators(n);
    auto [bigons, rects] = enumerate_flows(n);
    return py::make_tuple(gens.size(), bigons.size(), rects.size());
  }, py::arg("n"), "counts by explicit enumeration (bounded power)");

  m.def("solve_profile1", [](int n) {
    SolveResult res = solve_profile1(n);
    py::dict out;
    out["dimension"] = res.dimension;
    out["table"] = json_to_py(res.table.to_json());
    return out;
  }, py::arg("n"));

  m.def("solve_global", [](int n, bool allow_large, int gauge_seed) {
    SolveResult res = solve_global(n, allow_large, gauge_seed);
    py::dict out;
    out["dimension"] = res.dimension;
    out["table"] = json_to_py(res.table.to_json());
    return out;
  }, py::arg("n"), py::arg("allow_large") = false, py::arg("gauge_seed") = 0);

  m.def("sign_of", [](const py::object& flow) {
    FormalFlow f = flow_from_json(as_json_text(flow));
    return shared_evaluator(flow_power(f))->evaluate(f);
  }, py::arg("flow"), "evaluate the sign of one flow given as JSON text or a dict");

  m.def("verify", [](int n, const std::string& families, bool twisted, bool swapped,
                     long long samples, uint64_t seed, int jobs) {
    SignFunction s = sign_function(shared_evaluator(n));
    if (twisted) s = parity_twist(s);
    VerifyReport rep = verify(s, n, parse_families(families), swapped, samples, seed, jobs);
    return json_to_py(rep.to_json());
  }, py::arg("n"), py::arg("families") = "all", py::arg("twisted") = false,
     py::arg("swapped") = false, py::arg("samples") = 0, py::arg("seed") = 0,
     py::arg("jobs") = 1);

  m.def("gauge_equivalent_to_solver", [](int n) {
    SignTable evt = materialize(sign_function(shared_evaluator(n)), n, "all_flows");
    return find_gauge(evt, solve_global(n).table).has_value();
  }, py::arg("n"));

  py::class_<GridDiagram>(m, "GridDiagram")
      .def(py::init([](int n, const Perm& O, const py::object& X) {
             std::optional<Perm> x;
             if (!X.is_none()) x = X.cast<Perm>();
             return GridDiagram::make(n, O, x);
           }),
           py::arg("n"), py::arg("O"), py::arg("X") = py::none())
      .def_static("from_json",
                  [](const py::object& text) {
                    return GridDiagram::from_json(as_json_text(text));
                  })
      .def("to_json", [](const GridDiagram& d) { return json_to_py(d.to_json()); })
      .def_readonly("n", &GridDiagram::n)
      .def_readonly("b_stab", &GridDiagram::b_stabilizations)
      .def("b_stabilize", [](const GridDiagram& d) { return b_stabilize(d); })
      .def("generator_count",
           [](const GridDiagram& d) { return generators(d).size(); })
      .def("__repr__", [](const GridDiagram& d) {
        return "<GridDiagram n=" + std::to_string(d.n) + " b_stab=" +
               std::to_string(d.b_stabilizations) + ">";
      });

  m.def("homology", [](const GridDiagram& d, int jobs) {
    return homology_to_py(homology(d, diagram_signs(d), jobs));
  }, py::arg("diagram"), py::arg("jobs") = 1);

  m.def("d_squared_is_zero", [](const GridDiagram& d) {
    return d_squared_is_zero(d, diagram_signs(d)).zero;
  }, py::arg("diagram"));

  m.def("f2_homology_dimension", [](const GridDiagram& d) {
    return gf2_homology_dimension(d);
  }, py::arg("diagram"));

  m.def("differential_triplets", [](const GridDiagram& d) {
    SparseIntMatrix mt = differential(d, diagram_signs(d));
    py::list out;
    for (const auto& [rc, v] : mt.entries)
      out.append(py::make_tuple(rc.first, rc.second, big_to_py(v)));
    return out;
  }, py::arg("diagram"));

  m.def("smith_normal_form", [](int rows, int cols,
                                const std::vector<std::tuple<int, int, long long>>& t) {
    SparseIntMatrix mt;
    mt.rows = rows;
    mt.cols = cols;
    for (const auto& [r, c, v] : t) mt.add(r, c, BigInt(v));
    SnfResult res = smith_normal_form(mt);
    py::list factors;
    for (const auto& f : res.factors) factors.append(big_to_py(f));
    return py::make_tuple(factors, res.rank);
  }, py::arg("rows"), py::arg("cols"), py::arg("triplets"));
}
