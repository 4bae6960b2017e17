#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "geoflow/actions.hpp"
#include "geoflow/atlas.hpp"
#include "geoflow/conserved.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/sections.hpp"
#include "geoflow/verify.hpp"

namespace py = pybind11;
using namespace geoflow;

namespace {

PhasePoint point_of(const Vec4& x, const Vec4& y) { return {x, y}; }

py::array_t<double> rows_to_array(const std::vector<std::array<double, 2>>& v) {
  py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i) {
    m(i, 0) = v[i][0];
    m(i, 1) = v[i][1];
  }
  return a;
}

py::dict trajectory_dict(const Trajectory& t) {
  const auto n = static_cast<py::ssize_t>(t.points.size());
  py::array_t<double> times(std::vector<py::ssize_t>{n}), x({n, py::ssize_t{4}}), y({n, py::ssize_t{4}});
  auto tm = times.mutable_unchecked<1>();
  auto xm = x.mutable_unchecked<2>();
  auto ym = y.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    tm(i) = t.times[i];
    for (int k = 0; k < 4; ++k) {
      xm(i, k) = t.points[i].x[k];
      ym(i, k) = t.points[i].y[k];
    }
  }
  py::dict d;
  d["t"] = times;
  d["x"] = x;
  d["y"] = y;
  d["drift"] = t.drift.relative;
  d["max_constraint_violation"] = t.drift.max_constraint_violation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geodesic flow on ellipsoids with symmetry";

  static py::exception<Error> exc(m, "GeoflowError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exc.ptr(), e.what());
    }
  });

  py::class_<EllipsoidSpec>(m, "EllipsoidSpec")
      .def_readonly("alphas", &EllipsoidSpec::alphas)
      .def_property_readonly("symmetry", [](const EllipsoidSpec& s) { return to_string(s.symmetry); })
      .def("__repr__", [](const EllipsoidSpec& s) {
        return "EllipsoidSpec(" + to_string(s.symmetry) + ", " + py::repr(py::cast(s.alphas)).cast<std::string>() +
               ")";
      });

  m.def(
      "spec", [](const std::string& c, const std::vector<double>& d) { return expand_spec(parse_case(c), d); },
      py::arg("case"), py::arg("alphas"), "Spec from a case name and its distinct semi-axes squared.");

  m.def(
      "random_point",
      [](const EllipsoidSpec& s, std::uint64_t seed, double h) {
        std::mt19937_64 rng(seed);
        const PhasePoint p = random_point(s, rng, h);
        return py::make_tuple(p.x, p.y);
      },
      py::arg("spec"), py::arg("seed") = 0, py::arg("h") = -1.0);

  m.def(
      "integrate",
      [](const EllipsoidSpec& s, const Vec4& x, const Vec4& y, double t_end, double tol, std::size_t samples) {
        IntegrateOptions opt;
        opt.tol = tol;
        opt.samples = samples;
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = integrate(s, point_of(x, y), t_end, opt);
        }
        return trajectory_dict(t);
      },
      py::arg("spec"), py::arg("x"), py::arg("y"), py::arg("t_end"), py::arg("tol") = 1e-10,
      py::arg("samples") = 1000);

  m.def(
      "conserved",
      [](const EllipsoidSpec& s, const Vec4& x, const Vec4& y) {
        const auto c = conserved_set(s, point_of(x, y));
        py::dict d;
        d["H"] = c.h;
        for (const auto& [k, v] : c.values) d[py::str(k)] = v;
        return d;
      },
      py::arg("spec"), py::arg("x"), py::arg("y"));

  m.def(
      "relation_residuals", [](const EllipsoidSpec& s, const Vec4& x, const Vec4& y) {
        return relation_residuals(s, point_of(x, y));
      },
      py::arg("spec"), py::arg("x"), py::arg("y"));

  m.def(
      "landmarks",
      [](const EllipsoidSpec& s, double h) {
        py::list out;
        for (const auto& l : landmarks(s, h)) {
          py::dict d;
          d["name"] = l.name;
          d["u"] = l.u;
          d["v"] = l.v;
          d["corank"] = l.corank;
          d["type"] = to_string(l.type);
          d["fiber"] = to_string(l.fiber.kind);
          d["multiplicity"] = l.fiber.multiplicity;
          out.append(d);
        }
        return out;
      },
      py::arg("spec"), py::arg("h") = 1.0);

  m.def("tangency_j", &tangency_j, py::arg("spec"), py::arg("h") = 1.0);

  m.def(
      "action",
      [](double a1, double a2, double h, double j1, double j2, const std::string& method) {
        if (method != "legendre" && method != "quadrature") throw Error(ErrorKind::usage, "unknown method " + method);
        return action_I(a1, a2, h, j1, j2, method == "legendre" ? ActionMethod::legendre : ActionMethod::quadrature);
      },
      py::arg("a1"), py::arg("a2"), py::arg("h"), py::arg("j1"), py::arg("j2"), py::arg("method") = "legendre");
  m.def("dI_dJ", &dI_dJ, py::arg("a1"), py::arg("a2"), py::arg("h"), py::arg("j1"), py::arg("j2"), py::arg("which"));
  m.def("smooth_action", &smooth_action, py::arg("a1"), py::arg("a2"), py::arg("h"), py::arg("j1"), py::arg("j2"));

  m.def(
      "section_curve",
      [](const std::array<double, 3>& a, double h, double j, std::size_t n) {
        const auto c = analytic_section_curve(a, h, j, n);
        return py::make_tuple(rows_to_array(c.samples), to_string(classify_atom(c, false)),
                              to_string(classify_atom(c, true)));
      },
      py::arg("alphas"), py::arg("h"), py::arg("j"), py::arg("n") = 400,
      "Samples (phi, pphi) of the singular section curve with its atom before and after the quotient.");

  m.def(
      "verify",
      [](std::uint64_t seed) {
        VerifyReport r;
        {
          py::gil_scoped_release release;
          r = run_verification(seed);
        }
        py::list rows;
        for (const auto& g : r.groups)
          for (const auto& row : g.rows)
            rows.append(py::make_tuple(g.title, row.name, row.value, row.threshold, row.pass()));
        return py::make_tuple(r.pass(), rows);
      },
      py::arg("seed") = 42);
}
