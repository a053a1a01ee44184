#include "ksf/diagnostics.hpp"
#include "ksf/experiments.hpp"
#include "ksf/inequalities.hpp"
#include "ksf/semigroup_checks.hpp"
#include "ksf/solver.hpp"
#include "ksf/spectral.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

ksf::ScalarField field_from_array(const ksf::Grid2D& g, py::array_t<double> arr) {
    auto buf = arr.request();
    if (buf.ndim != 2 || buf.shape[0] != static_cast<py::ssize_t>(g.ny) ||
        buf.shape[1] != static_cast<py::ssize_t>(g.nx))
        throw std::invalid_argument("array shape must be (ny, nx)");
    ksf::ScalarField f(g);
    auto view = arr.unchecked<2>();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = view(j, i);
    return f;
}

py::array_t<double> array_from_field(const ksf::ScalarField& f) {
    py::array_t<double> arr({f.grid.ny, f.grid.nx});
    auto view = arr.mutable_unchecked<2>();
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) view(j, i) = f(i, j);
    return arr;
}

}  // namespace

PYBIND11_MODULE(_ksf, m) {
    m.doc() = "Forced Keller-Segel solver bindings";

    py::class_<ksf::Grid2D>(m, "Grid2D")
        .def(py::init<int, int, double, double>(), py::arg("nx"), py::arg("ny"), py::arg("lx"),
             py::arg("ly"))
        .def_readonly("nx", &ksf::Grid2D::nx)
        .def_readonly("ny", &ksf::Grid2D::ny)
        .def_readonly("lx", &ksf::Grid2D::lx)
        .def_readonly("ly", &ksf::Grid2D::ly);

    m.def("lambda1", &ksf::lambda1, py::arg("grid"));
    m.def(
        "heat_semigroup",
        [](const ksf::Grid2D& g, py::array_t<double> arr, double t) {
            return array_from_field(ksf::heat_semigroup(field_from_array(g, arr), t));
        },
        py::arg("grid"), py::arg("field"), py::arg("t"));
    m.def(
        "integrate",
        [](const ksf::Grid2D& g, py::array_t<double> arr) {
            return ksf::integrate(field_from_array(g, arr));
        },
        py::arg("grid"), py::arg("field"));
    m.def(
        "lp_norm",
        [](const ksf::Grid2D& g, py::array_t<double> arr, double p) {
            return ksf::lp_norm(field_from_array(g, arr), p);
        },
        py::arg("grid"), py::arg("field"), py::arg("p"));

    py::class_<ksf::DiagnosticsRecord>(m, "DiagnosticsRecord")
        .def_readonly("t", &ksf::DiagnosticsRecord::t)
        .def_readonly("mass_u", &ksf::DiagnosticsRecord::mass_u)
        .def_readonly("v_l1", &ksf::DiagnosticsRecord::v_l1)
        .def_readonly("v_l1_exact", &ksf::DiagnosticsRecord::v_l1_exact)
        .def_readonly("u_linf", &ksf::DiagnosticsRecord::u_linf)
        .def_readonly("energy_w", &ksf::DiagnosticsRecord::energy_w)
        .def_readonly("dissipation", &ksf::DiagnosticsRecord::dissipation);

    py::enum_<ksf::RunStatus>(m, "RunStatus")
        .value("Completed", ksf::RunStatus::Completed)
        .value("Blowup", ksf::RunStatus::Blowup);

    py::class_<ksf::Trajectory>(m, "Trajectory")
        .def_readonly("status", &ksf::Trajectory::status)
        .def_readonly("t_detect", &ksf::Trajectory::t_detect)
        .def_readonly("records", &ksf::Trajectory::records)
        .def("final_u", [](const ksf::Trajectory& tr) {
            return array_from_field(tr.snapshots.back().u);
        })
        .def("final_v", [](const ksf::Trajectory& tr) {
            return array_from_field(tr.snapshots.back().v);
        });

    m.def(
        "run",
        [](const ksf::Grid2D& g, py::array_t<double> u0, py::array_t<double> v0, double tau,
           double t_end, double dt_init, bool chemotaxis) {
            ksf::SolverConfig cfg;
            cfg.tau = tau;
            cfg.t_end = t_end;
            cfg.dt_init = dt_init;
            cfg.chemotaxis = chemotaxis;
            cfg.validate();
            ksf::State s{field_from_array(g, u0), field_from_array(g, v0), 0.0};
            return ksf::run(s, cfg, ksf::ForcingSpec::zero());
        },
        py::arg("grid"), py::arg("u0"), py::arg("v0"), py::arg("tau") = 1.0,
        py::arg("t_end") = 1.0, py::arg("dt_init") = 1e-3, py::arg("chemotaxis") = true);

    m.def("young_bound", &ksf::young_bound, py::arg("a"), py::arg("b"), py::arg("eps"),
          py::arg("p"));
    m.def("malpha_bound", &ksf::malpha_bound, py::arg("c1"), py::arg("c2"), py::arg("beta"));
    m.def(
        "convolution_integral",
        [](double alpha, double beta, double gamma, double delta, double t) {
            return ksf::convolution_integral(ksf::SemigroupParams(alpha, beta, gamma, delta), t);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("delta"), py::arg("t"));
}
