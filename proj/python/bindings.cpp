#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "needsem/harness.hpp"
#include "needsem/instrumented.hpp"
#include "needsem/natural.hpp"
#include "needsem/reduction.hpp"
#include "needsem/textio.hpp"

namespace py = pybind11;
using namespace needsem;

namespace {

Mode mode_of(const std::string& s) {
  auto m = mode_from_string(s);
  if (!m) throw py::value_error("unknown mode '" + s + "'");
  return *m;
}

// Engines recurse on the term, so they get a big stack and drop the GIL.
template <class F>
auto deep(F&& f) {
  decltype(f()) out;
  py::gil_scoped_release nogil;
  run_with_stack([&] { out = f(); });
  return out;
}

py::list heap_list(const std::vector<Binding>& heap) {
  py::list out;
  for (const auto& b : heap) out.append(py::make_tuple(b.name, print(b.value)));
  return out;
}

py::dict reduce_py(const std::string& src, const std::string& mode, std::size_t steps) {
  Mode m = mode_of(mode);
  Term t = parse(src, m);
  ReduceOptions o;
  o.max_steps = steps;
  ReduceResult r = deep([&] { return reduce(t, m, o); });
  py::list trace;
  for (const auto& s : r.trace.steps) trace.append(py::make_tuple(std::string(rule_name(s.rule)), print(s.term)));
  py::dict d;
  d["outcome"] = std::string(to_string(r.outcome));
  d["steps"] = r.steps;
  d["initial"] = print(r.trace.initial);
  d["trace"] = trace;
  d["term"] = print(r.term);
  d["fault"] = std::string(to_string(r.fault));
  return d;
}

py::dict eval_py(const std::string& src, const std::string& mode, const std::string& engine,
                 std::size_t budget) {
  Mode m = mode_of(mode);
  Term t = parse(src, m);
  py::dict d;
  if (engine == "need-inst") {
    IEvalOptions o;
    o.budget = budget;
    IEvalOutcome r = deep([&] { return m == Mode::Let ? ieval_let({}, t, o) : ieval_letrec({}, t, o); });
    d["status"] = std::string(to_string(r.status));
    d["sigma"] = print_heap(r.sigma);
    d["heap"] = heap_list(r.ok() ? decomp(r.sigma) : std::vector<Binding>{});
    d["value"] = r.value ? py::cast(print(r.value)) : py::none();
    return d;
  }
  EvalOptions o;
  o.budget = budget;
  EvalOutcome r = deep([&]() -> EvalOutcome {
    if (engine == "need-nat") return m == Mode::Let ? eval_let({}, t, {}, o) : eval_letrec({}, t, o);
    if (engine == "stuck") return eval_letrec_stuck({}, t, o);
    if (engine == "name") return eval_name({}, t, o);
    if (engine == "value") return eval_value({}, t, o);
    throw std::invalid_argument("unknown engine '" + engine + "'");
  });
  d["status"] = std::string(to_string(r.status));
  d["heap"] = heap_list(r.heap);
  d["value"] = r.value ? py::cast(print(r.value)) : py::none();
  d["stuck_on"] = r.stuck_on;
  return d;
}

std::vector<std::string> check_py(const std::string& src, const std::string& mode, bool audit) {
  Mode m = mode_of(mode);
  Term t = parse(src, m);
  CheckOptions o;
  o.audit = audit;
  return deep([&] {
    std::vector<std::string> out;
    for (const auto& v : check_all(t, m, o)) out.push_back(encode_verdict(v));
    return out;
  });
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "call-by-need semantics workbench";
  py::register_exception<ParseFailure>(mod, "ParseError", PyExc_ValueError);
  py::register_exception<InvariantFault>(mod, "InvariantFault", PyExc_RuntimeError);

  mod.def("parse", [](const std::string& src, const std::string& mode) { return print(parse(src, mode_of(mode))); },
          py::arg("source"), py::arg("mode") = "letrec", "normalized printing of a program");
  mod.def("alpha_eq", [](const std::string& a, const std::string& b, const std::string& mode) {
    Mode m = mode_of(mode);
    return alpha_eq(parse(a, m), parse(b, m));
  }, py::arg("a"), py::arg("b"), py::arg("mode") = "letrec");
  mod.def("classify", [](const std::string& src, const std::string& mode) {
    Mode m = mode_of(mode);
    return std::string(to_string(classify(parse(src, m), m)));
  }, py::arg("source"), py::arg("mode") = "letrec");
  mod.def("reduce", &reduce_py, py::arg("source"), py::arg("mode") = "letrec", py::arg("steps") = 10000);
  mod.def("eval", &eval_py, py::arg("source"), py::arg("mode") = "letrec",
          py::arg("engine") = "need-nat", py::arg("budget") = 10000);
  mod.def("check", &check_py, py::arg("source"), py::arg("mode") = "letrec", py::arg("audit") = false,
          "verdicts as JSON lines");
  mod.def("gen", [](std::uint64_t seed, const std::string& mode, std::size_t size) {
    GenConfig g;
    g.seed = seed;
    g.mode = mode_of(mode);
    g.max_size = size;
    return print(gen_program(g));
  }, py::arg("seed"), py::arg("mode") = "letrec", py::arg("size") = 30);
}
