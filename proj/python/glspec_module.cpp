#include "glspec/errors.hpp"
#include "glspec/invariant_density.hpp"
#include "glspec/model_json.hpp"
#include "glspec/montecarlo.hpp"
#include "glspec/report.hpp"
#include "glspec/spectral.hpp"
#include "glspec/weierstrass.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace glspec;

namespace {

LevyModel from_dict(const py::dict& d)
{
    py::object dumps = py::module_::import("json").attr("dumps");
    return parse_model(dumps(d).cast<std::string>());
}

py::object to_py(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_glspec, m)
{
    m.doc() = "Spectral toolkit for generalized Laguerre semigroups";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
    py::register_exception<QuadratureError>(m, "QuadratureError", base);
    py::register_exception<SmoothnessError>(m, "SmoothnessError", base);
    py::register_exception<MembershipWarning>(m, "MembershipWarning", base);
    py::register_exception<TimeBelowThreshold>(m, "TimeBelowThreshold", base);
    py::register_exception<ClassError>(m, "ClassError", base);
    py::register_exception<UnsupportedJumpsError>(m, "UnsupportedJumpsError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<HorizonError>(m, "HorizonError", base);

    py::class_<LevyModel>(m, "LevyModel")
        .def_static("from_json", &parse_model, py::arg("text"))
        .def_static("from_dict", &from_dict, py::arg("d"))
        .def_static("load", &load_model, py::arg("path"))
        .def_static("preset", &preset, py::arg("name"))
        .def("phi", py::overload_cast<cplx>(&LevyModel::phi, py::const_), py::arg("z"))
        .def("psi", py::overload_cast<cplx>(&LevyModel::psi, py::const_), py::arg("z"))
        .def("to_dict", [](const LevyModel& mod) { return to_py(model_to_json(mod)); })
        .def("scalars", [](const LevyModel& mod) { return to_py(scalars_to_json(mod.scalars())); })
        .def_property_readonly("sigma2", &LevyModel::sigma2)
        .def_property_readonly("m", &LevyModel::m)
        .def("__repr__", [](const LevyModel& mod) { return describe(mod); });

    m.def("preset_names", &preset_names);

    py::class_<SpectralContext>(m, "SpectralContext")
        .def(py::init<LevyModel>(), py::arg("model"))
        .def("W", &SpectralContext::W, py::arg("z"))
        .def("log_W", py::overload_cast<cplx>(&SpectralContext::log_W, py::const_), py::arg("z"))
        .def("residual", &SpectralContext::functional_residual, py::arg("z"))
        .def("gamma_phi", &SpectralContext::gamma_phi);

    m.def("W_integer", &W_integer, py::arg("model"), py::arg("n"));
    m.def("nu", &nu, py::arg("model"), py::arg("x"));
    m.def("nu_deriv", &nu_deriv, py::arg("model"), py::arg("x"), py::arg("n"));
    m.def("w_n", &w_n, py::arg("model"), py::arg("n"), py::arg("x"));
    m.def("invariant_moment", &invariant_moment, py::arg("model"), py::arg("n"));

    m.def("eigen_coeffs", [](const LevyModel& mod, int n) { return eigen_poly(mod, n).coeffs(); }, py::arg("model"),
          py::arg("n"));
    m.def("eigen_eval", [](const LevyModel& mod, int n, double x) { return eigen_poly(mod, n).eval(x); },
          py::arg("model"), py::arg("n"), py::arg("x"));
    m.def("coeigen_eval", [](const LevyModel& mod, int n, double x) { return coeigen_eval(mod, n, x).value; },
          py::arg("model"), py::arg("n"), py::arg("x"));
    m.def("gram", &gram, py::arg("model"), py::arg("N"), py::arg("threads") = 0);
    m.def("t_min", &t_min, py::arg("model"));
    m.def("heat_kernel", [](const LevyModel& mod, double t, double x, double y, int N) {
        HeatValue h = heat_kernel(mod, t, x, y, N);
        return py::make_tuple(h.value, h.last_term);
    }, py::arg("model"), py::arg("t"), py::arg("x"), py::arg("y"), py::arg("terms") = 40);
    m.def("semigroup_apply", py::overload_cast<const LevyModel&, double, const Poly&, double, int>(&semigroup_apply),
          py::arg("model"), py::arg("t"), py::arg("coeffs"), py::arg("x"), py::arg("terms") = 40);
    m.def("norms", [](const LevyModel& mod, int N) {
        NormsReport r = norms_report(mod, N);
        py::list rows;
        for (const auto& row : r.rows)
            rows.append(py::make_tuple(row.n, row.norm_p, row.norm_v));
        return py::make_tuple(rows, r.slope_v2);
    }, py::arg("model"), py::arg("N"));

    m.def("sample_gl", [](const LevyModel& mod, double x0, double t, long paths, std::uint64_t seed, double dt,
                          double truncate_eps) {
        PathConfig cfg;
        cfg.n_paths = paths;
        cfg.seed = seed;
        cfg.dt = dt;
        cfg.truncate_eps = truncate_eps;
        py::gil_scoped_release release;
        return sample_gl(mod, cfg, x0, t);
    }, py::arg("model"), py::arg("x0"), py::arg("t"), py::arg("paths") = 100000, py::arg("seed") = 0,
          py::arg("dt") = 1e-3, py::arg("truncate_eps") = 0.0);

    m.def("verify_model", [](const LevyModel& mod, long paths, std::uint64_t seed) {
        SuiteOptions opt;
        opt.paths = paths;
        opt.seed = seed;
        RunReport r;
        {
            py::gil_scoped_release release;
            r = run_model_checks(mod, opt);
        }
        return to_py(report_json(r));
    }, py::arg("model"), py::arg("paths") = 20000, py::arg("seed") = 20240611);
}
