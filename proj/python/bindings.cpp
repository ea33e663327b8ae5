#include "qslack/estimate.hpp"
#include "qslack/experiment.hpp"
#include "qslack/oracle.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qslack;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray &a) {
    if (a.ndim() != 2) {
        throw py::value_error("expected a 2-d array");
    }
    const auto r = static_cast<std::size_t>(a.shape(0));
    const auto c = static_cast<std::size_t>(a.shape(1));
    return ComplexMatrix(r, c, std::vector<cplx>(a.data(), a.data() + r * c));
}

py::dict oracle_dict(const OracleResult &r) {
    py::dict d;
    d["value"] = r.value;
    d["method"] = r.method;
    d["residual"] = r.residual;
    d["boundary_hit"] = r.boundary_hit;
    d["multipliers"] = r.multipliers;
    return d;
}

py::dict result_dict(const ExperimentResult &res) {
    py::list runs;
    for (const auto &r : res.runs) {
        py::dict d;
        d["final_objective"] = r.last().objective;
        d["final_error"] = r.last().error;
        d["iterations"] = r.steps.size();
        d["aborted"] = r.aborted;
        d["diagnostic"] = r.diagnostic;
        runs.append(d);
    }
    py::list summary;
    for (const auto &p : res.summary) {
        summary.append(py::make_tuple(p.iter, p.median, p.q1, p.q3));
    }
    py::dict out;
    out["runs"] = runs;
    out["summary"] = summary;
    out["oracle"] = res.oracle ? py::cast(*res.oracle) : py::none();
    out["directory"] = res.directory.string();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Slack-variable penalty bounds for small SDPs and LPs";
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("trace_distance", [](const CArray &rho, const CArray &sigma) {
        return exact_trace_distance(to_matrix(rho), to_matrix(sigma));
    });
    m.def("root_fidelity", [](const CArray &rho, const CArray &sigma) {
        return exact_root_fidelity(to_matrix(rho), to_matrix(sigma));
    });
    m.def("negativity", [](const CArray &rho, std::size_t dim_a, std::size_t dim_b) {
        return exact_negativity(to_matrix(rho), dim_a, dim_b);
    });
    m.def("tvd", [](const std::vector<double> &p, const std::vector<double> &q) { return exact_tvd(p, q); });
    m.def(
        "sdp_cham_value",
        [](const std::string &h, const std::vector<std::string> &a, const std::vector<double> &b) {
            std::vector<PauliObservable> as;
            for (const auto &s : a) as.push_back(PauliObservable::parse(s));
            return oracle_dict(sdp_cham_value(PauliObservable::parse(h), as, b));
        },
        py::arg("h"), py::arg("a") = std::vector<std::string>{}, py::arg("b") = std::vector<double>{});
    m.def(
        "lp_classical_cham_value",
        [](const std::string &h, const std::vector<std::string> &a, const std::vector<double> &b) {
            std::vector<WalshObservable> as;
            for (const auto &s : a) as.push_back(WalshObservable::parse(s));
            return oracle_dict(lp_classical_cham_value(WalshObservable::parse(h), as, b));
        },
        py::arg("h"), py::arg("a") = std::vector<std::string>{}, py::arg("b") = std::vector<double>{});
    m.def("hoeffding_shots", &hoeffding_shots, py::arg("epsilon"), py::arg("delta"));
    m.def("problems", [] {
        std::vector<std::string> out;
        for (auto t : all_problems()) out.emplace_back(problem_name(t));
        return out;
    });
    m.def(
        "run",
        [](const std::string &config_json, const std::optional<std::string> &output_root) {
            const auto cfg = parse_config(config_json);
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = output_root ? run_experiment(cfg, *output_root) : execute_runs(cfg);
            }
            return result_dict(res);
        },
        py::arg("config_json"), py::arg("output_root") = std::nullopt,
        "Runs the experiment described by a JSON config; writes CSVs only when output_root is given.");
}
