#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <memory>

#include "pbergman/analysis.hpp"
#include "pbergman/kernel.hpp"
#include "pbergman/lacunary.hpp"

namespace py = pybind11;
using namespace pbergman;

namespace {

LacunarySeries make_series(std::vector<std::int64_t> exponents, std::vector<complex> coefficients) {
  return LacunarySeries(std::move(exponents), std::move(coefficients));
}

QuadratureGrid lacunary_grid(const LacunarySeries& s, std::size_t radial, std::size_t angular) {
  if (angular == 0) angular = static_cast<std::size_t>(8 * s.max_lambda());
  return QuadratureGrid(Domain::disk(1.0), radial, std::max<std::size_t>(angular, 16));
}

}  // namespace

PYBIND11_MODULE(_pbergman, m) {
  m.doc() = "p-Bergman kernel lab";

  py::register_exception<MarginError>(m, "MarginError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Domain>(m, "Domain")
      .def_static("parse", &Domain::parse)
      .def_static("disk", &Domain::disk, py::arg("radius") = 1.0)
      .def_static("annulus", &Domain::annulus)
      .def_static("punctured_disk", &Domain::punctured_disk, py::arg("radius") = 1.0)
      .def("area", &Domain::area)
      .def("contains", &Domain::contains)
      .def("__str__", &Domain::to_string);

  py::class_<KernelEngine, std::shared_ptr<KernelEngine>>(m, "Engine")
      .def(py::init([](const std::string& domain, int degree, int n_min, std::size_t radial,
                       std::size_t angular, double margin, std::uint64_t seed, int restarts) {
             KernelSettings s;
             s.domain = Domain::parse(domain);
             s.degree = degree;
             s.n_min = n_min;
             s.radial_count = radial;
             s.angular_count = angular;
             s.margin = margin;
             s.solver.rng_seed = seed;
             s.solver.restarts = restarts;
             return std::make_shared<KernelEngine>(s);
           }),
           py::arg("domain") = "disk:1", py::arg("degree") = 16, py::arg("n_min") = 0,
           py::arg("radial") = 64, py::arg("angular") = 128, py::arg("margin") = 0.05,
           py::arg("seed") = 0, py::arg("restarts") = 8)
      .def("kernel_json",
           [](const KernelEngine& e, double p, complex z) {
             py::gil_scoped_release release;
             return kernel_json(e.mp_minimizer(p, z));
           })
      .def("K_p",
           [](const KernelEngine& e, double p, complex z) {
             py::gil_scoped_release release;
             return e.mp_minimizer(p, z).K_p;
           })
      .def("m_p",
           [](const KernelEngine& e, double p, complex z, complex w) {
             py::gil_scoped_release release;
             return e.offdiag_kernel(p, z, w) / e.mp_minimizer(p, w).K_p;
           },
           py::arg("p"), py::arg("z"), py::arg("w"))
      .def("offdiag",
           [](const KernelEngine& e, double p, complex z, complex w) {
             py::gil_scoped_release release;
             return e.offdiag_kernel(p, z, w);
           })
      .def("H_p",
           [](const KernelEngine& e, double p, complex z, complex w) {
             py::gil_scoped_release release;
             return e.h_function(p, z, w);
           })
      .def("B_p",
           [](const KernelEngine& e, double p, complex z, complex direction) {
             py::gil_scoped_release release;
             return e.metric_at(p, z, direction).B_p;
           },
           py::arg("p"), py::arg("z"), py::arg("direction") = complex{1.0, 0.0})
      .def("levi",
           [](const KernelEngine& e, double p, complex direction) {
             LeviRecord r;
             {
               py::gil_scoped_release release;
               r = levi_comparison(e, p, direction);
             }
             return py::make_tuple(r.levi, r.b_p_squared, r.gap);
           },
           py::arg("p"), py::arg("direction") = complex{1.0, 0.0})
      .def("holder_slope",
           [](const KernelEngine& e, double p, complex z_prime, complex w,
              const std::vector<double>& radii) {
             py::gil_scoped_release release;
             return holder_exponent(e, p, z_prime, w, radii).slope;
           })
      .def("dp_estimate",
           [](const KernelEngine& e, double p, complex z) {
             DpEstimate d;
             {
               py::gil_scoped_release release;
               d = dp_estimate(e, p, z);
             }
             return py::make_tuple(d.K_p, d.d_p, d.near_optimal);
           })
      .def("cache_size", &KernelEngine::cache_size);

  m.def("lacunarity_constant",
        [](const std::vector<std::int64_t>& exponents) { return lacunarity_constant(exponents); });
  m.def("criterion_integral",
        [](std::vector<std::int64_t> exponents, std::vector<complex> coefficients, double p) {
          return criterion_integral(make_series(std::move(exponents), std::move(coefficients)), p);
        });
  m.def("direct_lp",
        [](std::vector<std::int64_t> exponents, std::vector<complex> coefficients, double p,
           std::size_t radial, std::size_t angular) {
          const auto s = make_series(std::move(exponents), std::move(coefficients));
          return direct_lp(s, p, lacunary_grid(s, radial, angular));
        },
        py::arg("exponents"), py::arg("coefficients"), py::arg("p"), py::arg("radial") = 256,
        py::arg("angular") = 0);
  m.def("equivalence_ratio",
        [](std::vector<std::int64_t> exponents, std::vector<complex> coefficients, double p,
           std::size_t radial, std::size_t angular) {
          const auto s = make_series(std::move(exponents), std::move(coefficients));
          return equivalence_ratio(s, p, lacunary_grid(s, radial, angular));
        },
        py::arg("exponents"), py::arg("coefficients"), py::arg("p"), py::arg("radial") = 256,
        py::arg("angular") = 0);
  m.def("lacunary_json",
        [](std::vector<std::int64_t> exponents, std::vector<complex> coefficients, double p,
           std::size_t radial, std::size_t angular) {
          const auto s = make_series(std::move(exponents), std::move(coefficients));
          return lacunary_json(p, s, criterion_integral(s, p),
                               direct_lp(s, p, lacunary_grid(s, radial, angular)));
        });
}
