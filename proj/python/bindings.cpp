#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "purgeom/errors.hpp"
#include "purgeom/metrics.hpp"
#include "purgeom/transport.hpp"

namespace py = pybind11;
using namespace purgeom;

namespace {

BoundaryValues boundary(std::optional<double> at_zero, std::optional<double> at_infinity) {
  return {at_zero, at_infinity};
}

ScalarFunction wrap(const std::function<double(double)>& f, std::optional<double> at_zero,
                    std::optional<double> at_infinity, const std::string& label) {
  // keep the GIL while calling back into Python
  return ScalarFunction(
      [f](double t) {
        py::gil_scoped_acquire gil;
        return f(t);
      },
      boundary(at_zero, at_infinity), label);
}

py::dict result_dict(const TransportResult& r) {
  py::dict d;
  d["t"] = r.t;
  d["w"] = r.w;
  d["v"] = r.v;
  d["w_in"] = r.w_in;
  d["w_out"] = r.w_out;
  d["projection_residual"] = r.projection_residual;
  d["horizontality_residual"] = r.horizontality_residual;
  return d;
}

VonNeumannProblem problem(const Matrix& h, const Matrix& rho_in, double t_in, double t_out, int steps) {
  VonNeumannProblem p;
  p.h = h;
  p.rho_in = rho_in;
  p.t_in = t_in;
  p.t_out = t_out;
  p.steps = steps;
  return p;
}

}  // namespace

PYBIND11_MODULE(_purgeom, m) {
  m.doc() = "Connections, metrics and holonomy on the standard purification bundle";

  py::register_exception<ValidationFailure>(m, "ValidationFailure", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<ScalarFunction>(m, "ScalarFunction")
      .def(py::init(&wrap), py::arg("f"), py::arg("at_zero") = py::none(),
           py::arg("at_infinity") = py::none(), py::arg("label") = "")
      .def("__call__", &ScalarFunction::operator(), py::arg("t"))
      .def_property_readonly("label", &ScalarFunction::label)
      .def_property_readonly("at_zero", [](const ScalarFunction& f) { return f.boundary().at_zero; })
      .def_property_readonly("at_infinity",
                             [](const ScalarFunction& f) { return f.boundary().at_infinity; });

  py::class_<ConnectionFunction>(m, "ConnectionFunction")
      .def(py::init([](const ScalarFunction& F, bool bures) { return ConnectionFunction{F, bures}; }),
           py::arg("F"), py::arg("bures") = false)
      .def("__call__", [](const ConnectionFunction& c, double t) { return c.F(t); })
      .def_readonly("F", &ConnectionFunction::F)
      .def_readonly("bures", &ConnectionFunction::bures);
  py::class_<MetricFunction>(m, "MetricFunction")
      .def(py::init([](const ScalarFunction& k) { return MetricFunction{k}; }), py::arg("k"))
      .def("__call__", [](const MetricFunction& k, double t) { return k.k(t); })
      .def_readonly("k", &MetricFunction::k);
  py::class_<MonotoneFunction>(m, "MonotoneFunction")
      .def(py::init([](const ScalarFunction& f, bool st) { return MonotoneFunction{f, st}; }),
           py::arg("f"), py::arg("selftransposed") = false)
      .def("__call__", [](const MonotoneFunction& f, double t) { return f.f(t); })
      .def_readonly("f", &MonotoneFunction::f)
      .def_readonly("selftransposed", &MonotoneFunction::selftransposed);
  py::class_<HSsolution>(m, "HSsolution")
      .def_readonly("tau", &HSsolution::tau)
      .def_readonly("k", &HSsolution::k)
      .def_readonly("F", &HSsolution::F);

  m.def("connection_catalog", [](const std::string& n) { return connection_catalog(n); });
  m.def("metric_catalog", [](const std::string& n) { return metric_catalog(n); });
  m.def("monotone_catalog", [](const std::string& n) { return monotone_catalog(n); });
  m.def("connection_catalog_names", &connection_catalog_names);
  m.def("monotone_catalog_names", &monotone_catalog_names);

  m.def("log_grid", [](double lo, double hi, int n) { return Grid::log_uniform(lo, hi, n).points; },
        py::arg("lo") = 1e-3, py::arg("hi") = 1e3, py::arg("n") = 200);
  m.def("r_from_F", [](const ConnectionFunction& c) { return r_from_F(c).r; });
  m.def("rF_from_k", [](const MetricFunction& k) {
    auto [r, F] = rF_from_k(k);
    return py::make_tuple(r.r, F);
  });
  m.def("k_from_F_HS", &k_from_F_HS);
  m.def("fs_from_F_HS", &fs_from_F_HS);
  m.def("fs_from_k", &fs_from_k);
  m.def("f_from_k", &f_from_k);
  m.def("k_from_f", &k_from_f);
  m.def("hs_solve", [](const MonotoneFunction& fs) { return hs_solve(fs); });
  m.def("check_HS", [](const MetricFunction& k, double tol) { return check_HS(k, Grid::log_uniform(), tol); },
        py::arg("k"), py::arg("tol") = 1e-10);
  m.def("hs_defect", [](const MetricFunction& k) { return hs_defect(k, Grid::log_uniform()); });

  m.def("sylvester_solve", [](const Matrix& rho, const Matrix& xi) {
    const DensityOperator state(rho);
    return sylvester_solve(state, StateTangent(state, xi));
  });
  m.def("bures_decompose", [](const Matrix& w, const Matrix& x) {
    const auto s = bures_decompose(PurificationVector(w), x);
    return py::make_tuple(s.g, s.a, s.x0);
  });
  m.def("connection_eval", [](const ConnectionFunction& c, const Matrix& w, const Matrix& x) {
    return connection_eval(c, PurificationVector(w), x).a;
  });
  m.def("horizontal_part", [](const ConnectionFunction& c, const Matrix& w, const Matrix& x) {
    return horizontal_part(c, PurificationVector(w), x);
  });
  m.def("horizontal_lift", [](const ConnectionFunction& c, const Matrix& w, const Matrix& xi) {
    const PurificationVector pw(w);
    return horizontal_lift(c, pw, StateTangent(project(pw), xi));
  });

  m.def("bures_inner", [](const Matrix& rho, const Matrix& xi1, const Matrix& xi2) {
    const DensityOperator s(rho);
    return bures_inner(s, StateTangent(s, xi1), StateTangent(s, xi2));
  });
  m.def("canonical_inner", [](const Matrix& rho, const Matrix& xi1, const Matrix& xi2) {
    const DensityOperator s(rho);
    return canonical_inner(s, StateTangent(s, xi1), StateTangent(s, xi2));
  });
  m.def("monotone_inner", [](const MonotoneFunction& f, const Matrix& rho, const Matrix& eta,
                             const Matrix& xi) { return monotone_inner(f, DensityOperator(rho), eta, xi); });
  m.def("purification_inner", [](const MetricFunction& k, const Matrix& w, const Matrix& y,
                                 const Matrix& x) { return purification_inner(k, PurificationVector(w), y, x); });
  m.def("induced_inner", [](const MetricFunction& k, const Matrix& rho, const Matrix& eta, const Matrix& xi) {
    const auto r = induced_inner(k, DensityOperator(rho), eta, xi);
    py::dict d;
    d["hermitian_value"] = r.hermitian_value;
    d["real_value"] = r.real_value;
    d["metric_id"] = r.metric_id;
    d["cross_check"] = r.cross_check;
    return d;
  });

  m.def("vn_tilde_h", &vn_tilde_h, py::arg("conn"), py::arg("rho_in"), py::arg("h"));
  m.def("vn_transport",
        [](const Matrix& h, const Matrix& rho_in, const ConnectionFunction& c, double t_in, double t_out,
           int steps) { return result_dict(vn_transport(problem(h, rho_in, t_in, t_out, steps), c)); },
        py::arg("h"), py::arg("rho_in"), py::arg("conn"), py::arg("t_in") = 0.0, py::arg("t_out") = 1.0,
        py::arg("steps") = 0);
  m.def("vn_transport_ode",
        [](const Matrix& h, const Matrix& rho_in, const ConnectionFunction& c, double t_in, double t_out,
           int steps, std::optional<Matrix> w0) {
          const auto p = problem(h, rho_in, t_in, t_out, steps);
          const Matrix start = w0 ? *w0
                                  : matfun(DensityOperator(rho_in).eig(),
                                           [](double l) { return std::sqrt(std::max(l, 0.0)); });
          TransportResult r;
          {
            py::gil_scoped_release release;
            r = transport_ode(c, p.curve(), PurificationVector(start));
          }
          return result_dict(r);
        },
        py::arg("h"), py::arg("rho_in"), py::arg("conn"), py::arg("t_in") = 0.0, py::arg("t_out") = 1.0,
        py::arg("steps") = 0, py::arg("w0") = py::none());
  m.def("vn_holonomy_closed_form",
        [](const Matrix& h, const Matrix& rho_in, const ConnectionFunction& c, double t_in, double t_out,
           int m_max) { return vn_holonomy_closed_form(problem(h, rho_in, t_in, t_out, 0), c, m_max); },
        py::arg("h"), py::arg("rho_in"), py::arg("conn"), py::arg("t_in") = 0.0, py::arg("t_out") = 1.0,
        py::arg("m_max") = 3);
  m.def("random_curve_transport",
        [](int n, std::uint64_t seed, const ConnectionFunction& c, double floor, int steps) {
          auto curve = random_smooth_curve(n, seed, floor);
          curve.steps = steps;
          const Matrix rho0 = curve.at(0.0);
          const Matrix w0 = matfun(DensityOperator(rho0).eig(), [](double l) { return std::sqrt(std::max(l, 0.0)); });
          return result_dict(transport_ode(c, curve, PurificationVector(w0)));
        },
        py::arg("n"), py::arg("seed"), py::arg("conn"), py::arg("floor") = 0.2, py::arg("steps") = 0);
  m.def("relative_phase", &relative_phase);
  m.def("holonomy_invariants", &holonomy_invariants, py::arg("w_in"), py::arg("w_out"),
        py::arg("m_max"), py::arg("tol") = 1e-6);
  m.def("noise_mu", &noise_mu, py::arg("conn"), py::arg("alpha"), py::arg("beta"));
  m.def("noise_kappa", &noise_kappa);
  m.def("noise_line_element", &noise_line_element, py::arg("k"), py::arg("alpha"), py::arg("beta"),
        py::arg("bures_ds2"));
  m.def("spin_half_noise_transport",
        [](double theta, double alpha, double beta, const ConnectionFunction& c, int steps) {
          return result_dict(noise_transport(NoiseModel{spin_half_loop(theta, steps), alpha, beta}, c));
        },
        py::arg("theta"), py::arg("alpha"), py::arg("beta"), py::arg("conn"), py::arg("steps") = 0);
}
