// Python bindings for the core operations: grid fields, sublevel barcodes,
// depth-filtered counts, barcode arithmetic, band-limited trigonometric
// fields, and the closed-form remainder constants.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cnodal/barcode.hpp"
#include "cnodal/barcode_json.hpp"
#include "cnodal/bottleneck.hpp"
#include "cnodal/coarse.hpp"
#include "cnodal/cubical.hpp"
#include "cnodal/dyadic.hpp"
#include "cnodal/errors.hpp"
#include "cnodal/grid.hpp"
#include "cnodal/trig.hpp"
#include "cnodal/version.hpp"

namespace py = pybind11;
using namespace cnodal;

namespace {

std::vector<AxisTopology> topologies_from_strings(const std::vector<std::string>& names) {
  std::vector<AxisTopology> out;
  out.reserve(names.size());
  for (const auto& s : names) out.push_back(topology_from_string(s));
  return out;
}

std::vector<std::string> topologies_to_strings(const std::vector<AxisTopology>& tops) {
  std::vector<std::string> out;
  out.reserve(tops.size());
  for (AxisTopology t : tops) out.push_back(topology_to_string(t));
  return out;
}

}  // namespace

PYBIND11_MODULE(cnodal, m) {
  m.doc() =
      "Coarse nodal counting on sampled grids: sublevel barcodes, "
      "depth-filtered counts, and band-limited field synthesis.";
  m.attr("__version__") = library_version;

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<resolution_error>(m, "ResolutionError", PyExc_ValueError);
  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<depth_cap_error>(m, "DepthCapError", PyExc_RuntimeError);

  py::class_<Bar>(m, "Bar", "One [birth, death) interval in a fixed degree.")
      .def(py::init([](int degree, double birth, double death, index_t mult) {
             return make_bar(degree, birth, death, mult);
           }),
           py::arg("degree"), py::arg("birth"), py::arg("death"),
           py::arg("multiplicity") = 1)
      .def_readonly("degree", &Bar::degree)
      .def_readonly("birth", &Bar::birth)
      .def_readonly("death", &Bar::death)
      .def_readonly("multiplicity", &Bar::multiplicity)
      .def("is_infinite", &Bar::is_infinite)
      .def("length", &Bar::length)
      .def("__eq__", [](const Bar& a, const Bar& b) { return a == b; })
      .def("__repr__", [](const Bar& b) {
        std::ostringstream os;
        os << "Bar(degree=" << b.degree << ", birth=" << b.birth << ", death="
           << b.death << ", multiplicity=" << b.multiplicity << ")";
        return os.str();
      });

  py::class_<GradedBarcode>(m, "GradedBarcode",
                            "Multiset of bars over all degrees; zero-length "
                            "bars are dropped on insertion.")
      .def(py::init<>())
      .def(py::init<std::vector<Bar>>(), py::arg("bars"))
      .def("push_bar",
           py::overload_cast<int, double, double, index_t>(&GradedBarcode::push_bar),
           py::arg("degree"), py::arg("birth"), py::arg("death"),
           py::arg("multiplicity") = 1)
      .def("bars", &GradedBarcode::bars)
      .def("bars_in_degree", &GradedBarcode::bars_in_degree, py::arg("degree"))
      .def("max_degree", &GradedBarcode::max_degree)
      .def("size", &GradedBarcode::size)
      .def("__len__", [](const GradedBarcode& b) { return b.bars().size(); })
      .def("__eq__", [](const GradedBarcode& a, const GradedBarcode& b) {
        return a == b;
      })
      .def("to_json", [](const GradedBarcode& b) { return barcode_to_json(b).dump(); })
      .def("__repr__", [](const GradedBarcode& b) {
        std::ostringstream os;
        os << "GradedBarcode(" << b.size() << " bars, max degree "
           << b.max_degree() << ")";
        return os.str();
      });

  m.def(
      "n_delta",
      [](const GradedBarcode& b, double delta, std::optional<int> degree) {
        return n_delta(b, delta, degree);
      },
      py::arg("barcode"), py::arg("delta"), py::arg("degree") = std::nullopt,
      "Bars longer than delta (infinite bars always count).");
  m.def(
      "n_delta_window",
      [](const GradedBarcode& b, double delta, double lower, double upper,
         std::optional<int> degree) {
        return n_delta_window(b, delta, CountWindow{lower, upper}, degree);
      },
      py::arg("barcode"), py::arg("delta"), py::arg("lower"), py::arg("upper"),
      py::arg("degree") = std::nullopt,
      "Same count restricted to births inside the closed window.");
  m.def(
      "n_delta_zero",
      [](const GradedBarcode& b, double delta, double zero_tolerance,
         std::optional<int> degree) {
        return n_delta_zero(b, delta, zero_tolerance, degree);
      },
      py::arg("barcode"), py::arg("delta"), py::arg("zero_tolerance"),
      py::arg("degree") = std::nullopt,
      "Bars longer than delta born within zero_tolerance of zero.");
  m.def("barcode_total_norm", &barcode_total_norm, py::arg("barcode"),
        py::arg("global_max"));
  m.def("barcode_p_norm", &barcode_p_norm, py::arg("barcode"), py::arg("p"),
        py::arg("global_max") = std::nullopt);
  m.def("bottleneck_distance", &bottleneck_distance, py::arg("b1"), py::arg("b2"),
        "Max over degrees of the exact matching distance.");
  m.def("bottleneck_distance_in_degree", &bottleneck_distance_in_degree,
        py::arg("b1"), py::arg("b2"), py::arg("degree"));
  m.def("kunneth_product", &kunneth_product, py::arg("b1"), py::arg("b2"),
        "Barcode of a two-factor sum field from the factor barcodes.");
  m.def("dualize", &dualize, py::arg("barcode"), py::arg("manifold_dim"),
        "Barcode of -f from the barcode of f on a closed manifold.");

  py::class_<GridField>(m, "GridField",
                        "Row-major samples on a box/torus product grid.")
      .def_readonly("dims", &GridField::dims)
      .def_readonly("spacing", &GridField::spacing)
      .def_readonly("samples", &GridField::samples)
      .def_property_readonly(
          "topology",
          [](const GridField& g) { return topologies_to_strings(g.topology); })
      .def("ndim", &GridField::ndim)
      .def("vertex_count", &GridField::vertex_count)
      .def("__repr__", [](const GridField& g) {
        std::ostringstream os;
        os << "GridField(dims=[";
        for (std::size_t i = 0; i < g.dims.size(); ++i)
          os << (i ? ", " : "") << g.dims[i];
        os << "])";
        return os.str();
      });

  m.def(
      "grid_field",
      [](std::vector<std::int64_t> dims, std::vector<double> spacing,
         const std::vector<std::string>& topology, std::vector<double> samples) {
        return make_grid_field(std::move(dims), std::move(spacing),
                               topologies_from_strings(topology),
                               std::move(samples));
      },
      py::arg("dims"), py::arg("spacing"), py::arg("topology"),
      py::arg("samples"),
      "Build a field from row-major samples; topology entries are 'box' or "
      "'torus'.");
  m.def("absolute", &absolute, py::arg("field"));
  m.def("negated", &negated, py::arg("field"));

  m.def("sublevel_barcode", &sublevel_barcode, py::arg("field"),
        "Barcode of the sublevel filtration (max-of-vertices cell values).");

  py::class_<CoarseCount>(m, "CoarseCount")
      .def_readonly("count", &CoarseCount::count)
      .def_readonly("delta", &CoarseCount::delta)
      .def_readonly("eta", &CoarseCount::eta)
      .def_readonly("degree", &CoarseCount::degree)
      .def("__repr__", [](const CoarseCount& c) {
        std::ostringstream os;
        os << "CoarseCount(count=" << c.count << ", delta=" << c.delta
           << ", eta=" << c.eta << ", degree=" << c.degree << ")";
        return os.str();
      });

  m.def(
      "coarse_m",
      [](const GridField& g, double delta, int degree, std::optional<double> eta) {
        return coarse_m(g, delta, degree, eta);
      },
      py::arg("abs_field"), py::arg("delta"), py::arg("degree") = 0,
      py::arg("eta") = std::nullopt,
      "Deep components: rank of H({|s| > delta}) -> H({|s| > 0}).");
  m.def(
      "coarse_z",
      [](const GridField& g, double delta, int degree, std::optional<double> eta) {
        return coarse_z(g, delta, degree, eta);
      },
      py::arg("abs_field"), py::arg("delta"), py::arg("degree") = 0,
      py::arg("eta") = std::nullopt,
      "Zero clusters: rank of H({|s| = 0}) -> H({|s| < delta}).");
  m.def("default_zero_cut", &default_zero_cut, py::arg("abs_field"));

  py::class_<TrigPoly>(m, "TrigPoly",
                       "Band-limited field on the flat torus, stored as "
                       "complex frequency coefficients.")
      .def(py::init([](int n) {
             TrigPoly f;
             f.n = n;
             return f;
           }),
           py::arg("n"))
      .def_readonly("n", &TrigPoly::n)
      .def_readwrite("lambda_cut", &TrigPoly::lambda_cut)
      .def("set", &TrigPoly::set, py::arg("xi"), py::arg("coefficient"))
      .def("at", &TrigPoly::at, py::arg("xi"))
      .def("eval", &TrigPoly::eval, py::arg("x"))
      .def("validate", &TrigPoly::validate)
      .def("l2_norm", &TrigPoly::l2_norm)
      .def("sobolev_norm", &TrigPoly::sobolev_norm, py::arg("k"))
      .def("lambda_content", &TrigPoly::lambda_content)
      .def("__repr__", [](const TrigPoly& f) {
        std::ostringstream os;
        os << "TrigPoly(n=" << f.n << ", " << f.coeffs.size()
           << " coefficients, lambda_cut=";
        if (f.lambda_cut)
          os << *f.lambda_cut;
        else
          os << "None";
        os << ")";
        return os.str();
      });

  m.def("random_combination", &random_combination, py::arg("n"),
        py::arg("lambda_cut"), py::arg("seed"),
        "Unit-norm Gaussian combination of all modes with |xi|^2 <= lambda.");
  m.def("lattice_mode_count", &lattice_mode_count, py::arg("n"),
        py::arg("lambda_cut"));
  m.def("nyquist_samples", &nyquist_samples, py::arg("f"));
  m.def(
      "sample",
      [](const TrigPoly& f, std::int64_t per_axis, const std::string& topology) {
        return sample(f, per_axis, topology_from_string(topology));
      },
      py::arg("f"), py::arg("per_axis"), py::arg("topology") = "torus",
      "Exact evaluation on a uniform grid over the fundamental domain.");
  m.def("sample_box", &sample_box, py::arg("f"), py::arg("lo"), py::arg("hi"),
        py::arg("dims"),
        "Exact evaluation on an axis-aligned box with endpoint samples.");

  py::class_<MorreyConstants>(m, "MorreyConstants")
      .def_readonly("omega_n", &MorreyConstants::omega_n)
      .def_readonly("c_n", &MorreyConstants::c_n)
      .def_readonly("t", &MorreyConstants::t)
      .def_readonly("b_nkp", &MorreyConstants::b_nkp)
      .def_readonly("c_prime", &MorreyConstants::c_prime)
      .def("__repr__", [](const MorreyConstants& c) {
        std::ostringstream os;
        os << "MorreyConstants(b_nkp=" << c.b_nkp << ", c_prime=" << c.c_prime
           << ")";
        return os.str();
      });

  m.def(
      "morrey_constant",
      [](int k, double p, int n) {
        return morrey_constant(SobolevParams{k, p, n});
      },
      py::arg("k"), py::arg("p"), py::arg("n"),
      "Closed-form remainder constant for the k, p, n embedding.");
}
