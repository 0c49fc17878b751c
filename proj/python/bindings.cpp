#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <type_traits>

#include "billiards/bem.hpp"
#include "billiards/commands.hpp"
#include "billiards/entropy.hpp"
#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/specfun.hpp"
#include "billiards/twolevel.hpp"

namespace py = pybind11;
using namespace billiards;

namespace {

py::dict mode_dict(const ModeSolution& m) {
  py::dict d;
  d["k"] = m.k;
  d["parity"] = py::make_tuple(m.parity.x, m.parity.y);
  d["sigma_min"] = m.sigma_min;
  d["converged"] = m.converged;
  d["entropy"] = m.field.rho.empty() ? py::object(py::none()) : py::cast(shannon_entropy(m.field));
  return d;
}

std::vector<py::dict> mode_list(const std::vector<ModeSolution>& modes) {
  std::vector<py::dict> out;
  for (const auto& m : modes) out.push_back(mode_dict(m));
  return out;
}

SolverOptions options(double ppw, double tol) {
  SolverOptions o;
  o.elements_per_wavelength = ppw;
  o.tol = tol;
  return o;
}

// Fills a RunConfig from a dict of overrides; unknown keys raise KeyError.
RunConfig config_from(const py::dict& overrides) {
  RunConfig cfg;
  std::size_t used = 0;
  RunConfig::visit(cfg, [&](const char* name, auto& member) {
    if (!overrides.contains(name)) return;
    member = overrides[name].cast<std::remove_reference_t<decltype(member)>>();
    ++used;
  });
  if (used != overrides.size()) throw py::key_error("unknown configuration key");
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave billiards: BEM eigenmodes, resonances and mode entropy";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  py::register_exception<NotSingularError>(m, "NotSingularError", base.ptr());
  py::register_exception<LookupError>(m, "NotFoundError", base.ptr());

  m.def("bessel_j", py::overload_cast<int, cplx>(&specfun::bessel_j), py::arg("order"), py::arg("z"));
  m.def("bessel_y", py::overload_cast<int, cplx>(&specfun::bessel_y), py::arg("order"), py::arg("z"));
  m.def("hankel1", &specfun::hankel1, py::arg("order"), py::arg("z"));

  py::class_<BoundaryShape>(m, "BoundaryShape")
      .def_static("circle", &BoundaryShape::circle, py::arg("radius") = 1.0)
      .def_static("ellipse", &BoundaryShape::ellipse, py::arg("chi"))
      .def_static("quadrupole", &BoundaryShape::quadrupole, py::arg("eps"))
      .def_property_readonly("kind", [](const BoundaryShape& s) { return to_string(s.kind()); })
      .def_property_readonly("parameter", &BoundaryShape::parameter)
      .def_property_readonly("shape_value", &BoundaryShape::shape_value)
      .def_property_readonly("area", &BoundaryShape::area)
      .def_property_readonly("semi_major", &BoundaryShape::semi_major)
      .def_property_readonly("semi_minor", &BoundaryShape::semi_minor)
      .def("contains", [](const BoundaryShape& s, double x, double y) { return s.contains({x, y}); });

  m.def("eccentricity", &eccentricity, py::arg("chi"));
  m.def("chi_from_eccentricity", &chi_from_eccentricity, py::arg("e"));
  m.def(
      "interior_points",
      [](const BoundaryShape& s, int n) {
        const auto g = interior_grid(s, n);
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : g.points) pts.emplace_back(p.x, p.y);
        return pts;
      },
      py::arg("shape"), py::arg("n") = 4166);

  m.def("shannon_entropy",
        [](const std::vector<double>& rho) { return shannon_entropy(std::span<const double>(rho)); },
        py::arg("rho"));
  m.def("max_entropy", &max_entropy, py::arg("n"));

  m.def("circle_dirichlet_oracle",
        [](int m_max, double k_lo, double k_hi) {
          std::vector<std::tuple<double, int, int, int>> out;
          for (const auto& e : circle_dirichlet_oracle(m_max, k_lo, k_hi)) {
            out.emplace_back(e.k, e.m, e.n, e.multiplicity);
          }
          return out;
        },
        py::arg("m_max"), py::arg("k_lo"), py::arg("k_hi"));
  m.def(
      "eigenvalues",
      [](const BoundaryShape& s, double k_lo, double k_hi, double tol, double ppw, int grid_n) {
        auto grid = grid_n > 0 ? std::make_shared<const InteriorGrid>(interior_grid(s, grid_n)) : nullptr;
        py::gil_scoped_release release;
        auto modes = find_real_eigen_k(s, k_lo, k_hi, tol, options(ppw, tol), grid);
        py::gil_scoped_acquire acquire;
        return mode_list(modes);
      },
      py::arg("shape"), py::arg("k_lo"), py::arg("k_hi"), py::arg("tol") = 1e-8,
      py::arg("ppw") = 12.0, py::arg("grid_n") = 0);
  m.def(
      "resonances",
      [](const BoundaryShape& s, double n_index, double re_lo, double re_hi, double im_lo,
         double im_hi, double tol, double ppw, int grid_n) {
        auto grid = grid_n > 0 ? std::make_shared<const InteriorGrid>(interior_grid(s, grid_n)) : nullptr;
        py::gil_scoped_release release;
        auto modes = find_complex_resonances(s, n_index, re_lo, re_hi, im_lo, im_hi, tol,
                                             options(ppw, tol), grid);
        py::gil_scoped_acquire acquire;
        return mode_list(modes);
      },
      py::arg("shape"), py::arg("n_index"), py::arg("re_lo"), py::arg("re_hi"),
      py::arg("im_lo") = -1.0, py::arg("im_hi") = 0.0, py::arg("tol") = 1e-8,
      py::arg("ppw") = 12.0, py::arg("grid_n") = 0);

  m.def(
      "twolevel_eigenvalues",
      [](double e1, double e2, cplx g, double gamma1, double gamma2) {
        TwoLevelSystem sys;
        sys.e1 = {e1, 0.0};
        sys.e2 = {e2, 0.0};
        sys.g = g;
        sys.gamma1 = gamma1;
        sys.gamma2 = gamma2;
        auto [a, b] = eigenpairs(sys, 0.0);
        return py::make_tuple(a.value, b.value);
      },
      py::arg("e1"), py::arg("e2"), py::arg("g"), py::arg("gamma1") = 0.0,
      py::arg("gamma2") = 0.0);

  m.def(
      "resolved_config",
      [](const py::dict& overrides) { return config_from(overrides).resolved(); },
      py::arg("overrides") = py::dict());
  m.def(
      "run",
      [](const std::string& command, const py::dict& overrides) {
        RunConfig cfg = config_from(overrides);
        cfg.command = command;
        std::ostringstream log;
        int status;
        {
          py::gil_scoped_release release;
          status = run_command(cfg, log);
        }
        return py::make_tuple(status, log.str());
      },
      py::arg("command"), py::arg("overrides") = py::dict());
}
