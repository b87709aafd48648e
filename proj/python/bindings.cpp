#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gfm/config.hpp"
#include "gfm/corpus.hpp"
#include "gfm/errors.hpp"
#include "gfm/harness.hpp"
#include "gfm/kernels.hpp"
#include "gfm/operators.hpp"
#include "gfm/rearrange.hpp"
#include "gfm/spaces.hpp"
#include "gfm/supremal.hpp"

namespace py = pybind11;
using namespace gfm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

GridFunction grid_from(const Array& values, int n, double half_width) {
  if (values.ndim() != n) throw DomainError("array rank must equal the dimension");
  const auto m = static_cast<int>(values.shape(0));
  for (int d = 1; d < n; ++d)
    if (values.shape(d) != m) throw DomainError("grid arrays must be square");
  // numpy C order has the last index fastest; cells use axis 0 fastest
  const GridGeometry g{n, half_width, m};
  std::vector<double> v(g.cell_count());
  const double* src = values.data();
  for (std::size_t c = 0; c < v.size(); ++c) {
    const auto ix = g.coords(c);
    std::size_t flat = 0;
    for (int d = 0; d < n; ++d) flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(ix[d]);
    v[c] = src[flat];
  }
  return GridFunction(g, std::move(v));
}

Array grid_to(const GridFunction& f) {
  const auto& g = f.geometry();
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.n), g.cells_per_axis);
  Array a(shape);
  double* dst = a.mutable_data();
  for (std::size_t c = 0; c < f.size(); ++c) {
    const auto ix = g.coords(c);
    std::size_t flat = 0;
    for (int d = 0; d < g.n; ++d) flat = flat * static_cast<std::size_t>(g.cells_per_axis) + static_cast<std::size_t>(ix[d]);
    dst[flat] = f[c];
  }
  return a;
}

py::dict class_dict(const ClassReport& c) {
  py::dict d;
  d["is_decreasing"] = c.is_decreasing;
  d["quasi_increase_constant_rn"] = c.quasi_increase_constant_rn;
  d["B_constant"] = c.B_constant;
  d["B_lower_ratio"] = c.B_lower_ratio;
  d["D_constant"] = c.D_constant;
  d["member_An"] = c.member_An;
  d["member_Bn"] = c.member_Bn;
  d["member_D"] = c.member_D;
  d["B_growth_factor"] = c.B_growth_factor;
  d["D_growth_factor"] = c.D_growth_factor;
  d["note"] = c.note;
  return d;
}

py::list rows_of(const VerificationReport& r) {
  py::list out;
  for (const auto& row : r.rows) {
    py::dict d;
    d["suite"] = row.suite;
    d["kernel"] = row.kernel;
    d["generator"] = row.generator;
    d["m"] = row.m;
    d["statistic"] = row.statistic;
    d["x"] = row.x;
    d["value"] = row.value;
    d["status"] = to_string(row.status);
    d["note"] = row.note;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Rearrangement calculus of generalized fractional maximal functions";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularIntegrand>(mod, "SingularIntegrand", PyExc_ArithmeticError);

  py::class_<KernelSpec>(mod, "Kernel")
      .def_static("power", &KernelSpec::power, py::arg("alpha"), py::arg("n"))
      .def_static("log", &KernelSpec::log_kernel, py::arg("R"), py::arg("n"))
      .def_static("log_power", &KernelSpec::log_power, py::arg("alpha"), py::arg("n"))
      .def_static("parse", [](const std::string& s, int n) { return kernel_for(s, n); }, py::arg("text"), py::arg("n"))
      .def("__call__", [](const KernelSpec& k, double r) { return k(r); })
      .def_property_readonly("n", &KernelSpec::dim)
      .def_property_readonly("right_endpoint", &KernelSpec::right_endpoint)
      .def("__repr__", &KernelSpec::describe);

  mod.def("unit_ball_volume", &unit_ball_volume);
  mod.def(
      "classify",
      [](const KernelSpec& k, double r_min, double r_max, int ppd) {
        return class_dict(classify(k, GeometricGrid{r_min, r_max, ppd}));
      },
      py::arg("kernel"), py::arg("r_min") = 1e-3, py::arg("r_max") = 1e3, py::arg("points_per_decade") = 16);

  py::class_<StepFunction>(mod, "StepFunction")
      .def(py::init([](const Array& b, const Array& v, double tail) { return StepFunction(to_vector(b), to_vector(v), tail); }),
           py::arg("breakpoints"), py::arg("values"), py::arg("tail") = 0.0)
      .def("__call__", [](const StepFunction& f, double t) { return f(t); })
      .def_property_readonly("breakpoints", [](const StepFunction& f) { return to_array(f.breakpoints()); })
      .def_property_readonly("values", [](const StepFunction& f) { return to_array(f.values()); })
      .def("mass", &StepFunction::mass)
      .def("support_end", &StepFunction::support_end)
      .def("scaled", &StepFunction::scaled);

  mod.def(
      "rearrangement",
      [](const Array& values, double half_width) { return rearrangement(grid_from(values, static_cast<int>(values.ndim()), half_width)); },
      py::arg("values"), py::arg("half_width") = 2.0, "Non-increasing rearrangement of a cell-constant grid function.");
  mod.def("double_star", [](const StepFunction& f, double t) { return double_star(f, t); });
  mod.def(
      "maximal_function",
      [](const Array& values, const KernelSpec& k, double half_width, bool bucketed) {
        MaximalOptions o;
        o.path = bucketed ? MaximalPath::bucketed : MaximalPath::exact;
        return grid_to(maximal_function(grid_from(values, k.dim(), half_width), k, o).field);
      },
      py::arg("values"), py::arg("kernel"), py::arg("half_width") = 2.0, py::arg("bucketed") = false);
  mod.def(
      "riesz_potential",
      [](const Array& values, const KernelSpec& k, double half_width) {
        return grid_to(riesz_potential(grid_from(values, k.dim(), half_width), k));
      },
      py::arg("values"), py::arg("kernel"), py::arg("half_width") = 2.0);
  mod.def(
      "supremal_T",
      [](const StepFunction& fstar, const KernelSpec& k, const Array& ts) {
        const SupremalOperator T(fstar, k);
        return to_array(T.evaluate(std::span<const double>(ts.data(), static_cast<std::size_t>(ts.size()))));
      },
      py::arg("fstar"), py::arg("kernel"), py::arg("t"));
  mod.def(
      "k4_functional",
      [](const StepFunction& fstar, const KernelSpec& k, const Array& ts) {
        const K4Functional F(fstar, k);
        std::vector<double> out;
        for (py::ssize_t i = 0; i < ts.size(); ++i) out.push_back(F(ts.data()[i]));
        return to_array(out);
      },
      py::arg("fstar"), py::arg("kernel"), py::arg("t"));
  mod.def("norm", [](double p, const StepFunction& f) { return norm(RISpec::Lp(p), f); }, py::arg("p"), py::arg("fstar"));
  mod.def("theorem43", [](const Array& width, const Array& f, const Array& w) {
    const PrefixConstraintProblem p{to_vector(width), to_vector(f), to_vector(w)};
    py::dict d;
    d["rhs"] = theorem43_rhs(p);
    d["greedy"] = theorem43_lhs_greedy(p).value;
    d["lp"] = p.size() <= kMaxOracleCells ? py::cast(theorem43_lp_oracle(p)) : py::none();
    return d;
  });
  mod.def(
      "optimal_norm_lower",
      [](const StepFunction& fstar, const KernelSpec& k, double p, std::size_t cells, std::vector<std::uint64_t> seeds) {
        OptimalNormOptions o;
        o.cells = cells;
        o.seeds = std::move(seeds);
        return optimal_norm_estimate(fstar, k, RISpec::Lp(p), o).lower;
      },
      py::arg("fstar"), py::arg("kernel"), py::arg("p") = 2.0, py::arg("cells") = 4,
      py::arg("seeds") = std::vector<std::uint64_t>{1});
  mod.def(
      "corpus",
      [](const std::string& spec, std::uint64_t seed, int n, int m, double half_width) {
        py::dict out;
        const GridGeometry g{n, half_width, m};
        for (const auto& gen : generate_corpus(CorpusSpec::parse(spec, seed), n)) out[py::str(gen.id)] = grid_to(gen.sample(g));
        return out;
      },
      py::arg("spec"), py::arg("seed") = 1, py::arg("n") = 1, py::arg("m") = 64, py::arg("half_width") = 2.0);
  mod.def(
      "run_suites",
      [](const std::string& config_text) {
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run_suites(ExperimentConfig::parse(config_text));
        }
        return rows_of(r);
      },
      py::arg("config_text"), "Runs a config given as text; returns the report rows as dicts.");
  mod.def("plot_keys", &plot_keys);
}
