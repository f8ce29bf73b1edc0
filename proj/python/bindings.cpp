#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aqem/cli.hpp"
#include "aqem/errors.hpp"
#include "aqem/interferometer.hpp"
#include "aqem/power_law.hpp"
#include "aqem/quantum_walk.hpp"
#include "aqem/statistics.hpp"
#include "aqem/trainer.hpp"
#include "aqem/wigner.hpp"

namespace py = pybind11;
using namespace aqem;

namespace {

py::dict report_dict(const FitnessReport& r) {
    py::dict d;
    d["sharpness"] = r.sharpness;
    d["holevo_imprecision"] = r.holevo_imprecision;
    d["rmse"] = r.rmse;
    d["K"] = r.samples;
    d["seed"] = py::make_tuple(r.seed.master_seed, r.seed.stream_id);
    d["wall_time_s"] = r.wall_time_s;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive quantum-enhanced metrology: simulators and policy scoring";
    m.attr("__version__") = version();

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<StateExhaustedError>(m, "StateExhaustedError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "wigner_d", [](int two_j, int two_m, int two_mprime, double beta) {
            return wigner_d({two_j, two_m, two_mprime, beta});
        },
        py::arg("two_j"), py::arg("two_m"), py::arg("two_mprime"), py::arg("beta"),
        "Reduced rotation matrix element; indices are doubled so half-integers stay integral.");

    m.def(
        "input_state", [](int photons) { return prepare_input_state(photons).amplitudes; }, py::arg("photons"));
    m.def(
        "probe_state", [](int photons) { return InterferometerModel(photons).probe_state().amplitudes; },
        py::arg("photons"), "Arm-mode amplitudes after the entrance beam splitter.");

    m.def(
        "sharpness", [](const std::vector<double>& errors) { return sharpness(errors); }, py::arg("errors"));
    m.def("holevo_imprecision", &holevo_imprecision, py::arg("sharpness"));
    m.def("wrap_phase", &wrap_phase, py::arg("angle"));

    m.def(
        "evaluate",
        [](const std::string& problem, const std::vector<double>& policy, std::size_t samples,
           std::uint64_t seed, std::uint64_t stream, int steps, const std::string& start, unsigned threads) {
            const auto p = parse_problem(problem) == ProblemKind::Interferometer
                               ? EstimationProblem::interferometer(static_cast<int>(policy.size()))
                               : EstimationProblem::walk(static_cast<int>(policy.size()), steps,
                                                         parse_walker_start(start));
            FitnessReport r;
            {
                py::gil_scoped_release release;
                r = p.evaluate(policy, samples, {seed, stream}, threads);
            }
            return report_dict(r);
        },
        py::arg("problem"), py::arg("policy"), py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("stream") = 0, py::arg("steps") = 10, py::arg("start") = "balanced", py::arg("threads") = 1,
        "Monte Carlo sharpness, Holevo imprecision and RMSE of a feedback policy.");

    m.def(
        "exact_sharpness",
        [](const std::vector<double>& policy, std::size_t grid) { return exact_sharpness_oracle(policy, grid); },
        py::arg("policy"), py::arg("grid") = 512);

    m.def(
        "walk_distribution",
        [](int steps, double theta, const std::string& start) {
            return simulate_position_distribution(steps, CoinAngle{theta}, parse_walker_start(start));
        },
        py::arg("steps"), py::arg("theta"), py::arg("start") = "symmetric",
        "P(x) for x = -t..t of one walker at coin angle theta.");

    m.def(
        "fit_power_law",
        [](const std::vector<int>& n, const std::vector<double>& delta) {
            if (n.size() != delta.size()) {
                throw DomainError("fit_power_law: N and imprecision lengths differ");
            }
            std::vector<ScalingPoint> points;
            for (std::size_t i = 0; i < n.size(); ++i) {
                points.push_back({n[i], delta[i]});
            }
            const auto fit = fit_power_law(points);
            return py::make_tuple(fit.exponent, fit.intercept);
        },
        py::arg("n"), py::arg("imprecision"), "Returns (exponent, intercept) of Delta = e^intercept N^-exponent.");

    m.def(
        "cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "aqem");
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli_dispatch(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs an aqem subcommand; returns (exit code, stdout, stderr).");
}
