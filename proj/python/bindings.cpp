#include "ima/bootstrap.hpp"
#include "ima/diagnostics.hpp"
#include "ima/error.hpp"
#include "ima/estimate.hpp"
#include "ima/io.hpp"
#include "ima/mc.hpp"
#include "ima/predict.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ima;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

TimeSeries make_series(const std::vector<double>& times, const std::vector<double>& values) {
    return TimeSeries(TimeGrid::from_times(times), values);
}

InnovationDist make_dist(const std::string& name, std::optional<double> shape) {
    if (name == "gaussian") return InnovationDist::gaussian();
    if (name == "student-t" || name == "student_t") return InnovationDist::student_t(shape.value_or(7.0));
    if (name == "ged") return InnovationDist::ged(shape.value_or(1.28));
    throw Error(ErrorKind::InvalidInput, "unknown innovation law '" + name + "'");
}

FitResult fixed_fit(const TimeSeries& s, double theta, double sigma2, double mu) {
    FitResult f;
    f.theta_hat = theta;
    f.sigma2_hat = sigma2;
    f.mu = mu;
    f.params().validate();
    f.n_obs = s.size();
    f.loglik = log_likelihood(f.params(), s);
    return f;
}

std::vector<double> grid_times(const TimeGrid& g) { return {g.times().begin(), g.times().end()}; }

}  // namespace

PYBIND11_MODULE(pyima, m) {
    m.doc() = "Irregularly spaced first-order moving average models";
    m.attr("__version__") = "0.1.0";
    py::register_exception<Error>(m, "ImaError", PyExc_ValueError);

    m.def("shifted_exp_times", [](std::size_t n, double rate, std::uint64_t seed) {
        return grid_times(sample_gaps_shifted_exp(n, rate, seed));
    }, py::arg("n"), py::arg("rate") = 1.0, py::arg("seed") = 1,
          "Observation times with gaps 1 + Exponential(rate).");

    m.def("exp_mixture_times", [](std::size_t n, double mean1, double mean2, double weight1, double weight2,
                                  std::uint64_t seed) {
        return grid_times(sample_gaps_exp_mixture(n, {mean1, mean2, weight1, weight2}, seed));
    }, py::arg("n"), py::arg("mean1") = 130.0, py::arg("mean2") = 6.5, py::arg("weight1") = 0.15,
          py::arg("weight2") = 0.85, py::arg("seed") = 1,
          "Observation times from an exponential-mixture gap law, rescaled to a unit minimum gap.");

    m.def("simulate", [](const std::vector<double>& times, double theta, double sigma2, double mu,
                         const std::string& dist, std::optional<double> shape, std::uint64_t seed) {
        const auto s = simulate(ImaParams::make(theta, sigma2, mu), TimeGrid::from_times(times),
                                make_dist(dist, shape), seed);
        return py::make_tuple(grid_times(s.grid()), std::vector<double>(s.values().begin(), s.values().end()));
    }, py::arg("times"), py::arg("theta"), py::arg("sigma2") = 1.0, py::arg("mu") = 0.0,
          py::arg("dist") = "gaussian", py::arg("shape") = py::none(), py::arg("seed") = 1,
          "Simulates a series; returns (times, values) with times rescaled when the minimum gap is below 1.");

    m.def("c_sequence", [](double theta, const std::vector<double>& gaps) { return c_sequence(theta, gaps); },
          py::arg("theta"), py::arg("gaps"));

    m.def("log_likelihood", [](const std::vector<double>& times, const std::vector<double>& values, double theta,
                               double sigma2, double mu) {
        return log_likelihood(ImaParams::make(theta, sigma2, mu), make_series(times, values));
    }, py::arg("times"), py::arg("values"), py::arg("theta"), py::arg("sigma2"), py::arg("mu") = 0.0);

    m.def("predict", [](const std::vector<double>& times, const std::vector<double>& values, double theta,
                        double sigma2, double mu) {
        return to_python(to_json(innovations_predict(ImaParams::make(theta, sigma2, mu), make_series(times, values))));
    }, py::arg("times"), py::arg("values"), py::arg("theta"), py::arg("sigma2") = 1.0, py::arg("mu") = 0.0,
          "One-step predictors, their MSEs and the (standardized) innovations.");

    m.def("fit", [](const std::vector<double>& times, const std::vector<double>& values, bool demean) {
        FitOptions o;
        o.demean = demean;
        return to_python(to_json(fit_mle(make_series(times, values), o)));
    }, py::arg("times"), py::arg("values"), py::arg("demean") = true, "Maximum likelihood fit.");

    m.def("bootstrap", [](const std::vector<double>& times, const std::vector<double>& values, std::size_t replicates,
                          std::uint64_t seed, std::vector<double> levels, std::size_t threads, bool demean,
                          bool include_replicates) {
        BootstrapOptions o;
        o.levels = std::move(levels);
        o.threads = threads;
        o.fit.demean = demean;
        BootstrapResult r;
        {
            py::gil_scoped_release release;
            r = bootstrap_estimate(make_series(times, values), replicates, seed, o);
        }
        return to_python(to_json(r, include_replicates));
    }, py::arg("times"), py::arg("values"), py::arg("replicates") = 200, py::arg("seed") = 1,
          py::arg("levels") = std::vector<double>{0.95}, py::arg("threads") = 1, py::arg("demean") = true,
          py::arg("include_replicates") = false, "Model-based residual bootstrap.");

    m.def("diagnose", [](const std::vector<double>& times, const std::vector<double>& values,
                         std::optional<double> theta, double sigma2, double mu, std::size_t max_lag,
                         std::size_t lb_lags) {
        const auto s = make_series(times, values);
        const auto fit = theta ? fixed_fit(s, *theta, sigma2, mu) : fit_mle(s);
        DiagnosticsOptions o;
        o.max_lag = max_lag;
        o.lb_lags = lb_lags;
        return to_python(to_json(diagnose(s, fit, o)));
    }, py::arg("times"), py::arg("values"), py::arg("theta") = py::none(), py::arg("sigma2") = 1.0,
          py::arg("mu") = 0.0, py::arg("max_lag") = 20, py::arg("lb_lags") = 10,
          "Residual diagnostics; fits the series first unless theta is given.");

    m.def("run_mc", [](const std::string& config_path, std::optional<std::size_t> threads,
                       std::optional<std::size_t> replications) {
        auto set = load_scenarios(config_path);
        if (replications) {
            for (auto& c : set.scenarios) c.replications = *replications;
        }
        std::vector<McReport> reports;
        {
            py::gil_scoped_release release;
            reports = run_scenarios(set, threads);
        }
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : reports) out.push_back(to_json(r));
        return to_python(out);
    }, py::arg("config_path"), py::arg("threads") = py::none(), py::arg("replications") = py::none(),
          "Runs a scenario file and returns one report per scenario.");

    m.def("asymptotic_se_regular", &asymptotic_se_regular, py::arg("theta"), py::arg("n"));
}
