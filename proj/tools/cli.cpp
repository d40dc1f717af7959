#include "cli.hpp"

#include "ima/bootstrap.hpp"
#include "ima/diagnostics.hpp"
#include "ima/error.hpp"
#include "ima/estimate.hpp"
#include "ima/io.hpp"
#include "ima/mc.hpp"
#include "ima/predict.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace ima::cli {

namespace {

constexpr const char* kVersion = "ima 0.1.0";

std::size_t default_threads() {
    if (const char* env = std::getenv("IMA_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::IoError: return kIo;
        case ErrorKind::ParseError:
        case ErrorKind::InvalidTimes:
        case ErrorKind::InvalidInput:
        case ErrorKind::InvalidParameter:
        case ErrorKind::InvalidGap:
        case ErrorKind::ConfigError: return kUsage;
        default: return kNumerical;
    }
}

/// Writes `text` to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "failed writing '" + path + "'");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<double> read_times_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<double> times;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string first = line.substr(0, line.find(','));
        if (!header) {
            if (first != "time") {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected header 'time'");
            }
            header = true;
            continue;
        }
        std::size_t used = 0;
        double t = 0.0;
        try {
            t = std::stod(first, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != first.size() || first.empty()) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": time is not a number");
        }
        times.push_back(t);
    }
    if (times.empty()) throw Error(ErrorKind::ParseError, "no times in '" + path + "'");
    return times;
}

struct ParamFlags {
    std::optional<double> theta;
    double sigma2 = 1.0;
    double mu = 0.0;
    std::string params_file;
    bool refit = false;
    bool zero_mean = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--theta", theta, "Moving-average parameter in [0, 1)");
        cmd.add_option("--sigma2", sigma2, "Innovation variance")->check(CLI::PositiveNumber);
        cmd.add_option("--mu", mu, "Process mean");
        cmd.add_option("--params", params_file, "Fit report (JSON) to take parameters from");
        cmd.add_flag("--refit", refit, "Fit the series before analysing it");
        cmd.add_flag("--zero-mean", zero_mean, "Fix mu = 0 instead of the sample mean when fitting");
    }

    FitOptions fit_options() const {
        FitOptions o;
        o.demean = !zero_mean;
        return o;
    }

    FitResult resolve(const TimeSeries& series) const {
        const int sources = (theta ? 1 : 0) + (params_file.empty() ? 0 : 1) + (refit ? 1 : 0);
        if (sources != 1) {
            throw Error(ErrorKind::InvalidInput, "give exactly one of --theta, --params or --refit");
        }
        if (refit) return fit_mle(series, fit_options());
        if (!params_file.empty()) {
            std::ifstream in(params_file);
            if (!in) throw Error(ErrorKind::IoError, "cannot open '" + params_file + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::ParseError, params_file + ": " + e.what());
            }
            return fit_from_json(j);
        }
        FitResult fit;
        fit.theta_hat = *theta;
        fit.sigma2_hat = sigma2;
        fit.mu = mu;
        fit.params().validate();
        fit.n_obs = series.size();
        fit.loglik = log_likelihood(fit.params(), series);
        return fit;
    }
};

void print_fit_summary(std::ostream& out, const FitResult& fit) {
    auto se = [](const std::optional<double>& v) {
        char buf[32];
        if (!v) return std::string("NA");
        std::snprintf(buf, sizeof buf, "%.3f", *v);
        return std::string(buf);
    };
    char line[256];
    std::snprintf(line, sizeof line, "theta_hat = %.3f   se(theta_hat) = %s   sigma2_hat = %.3f   se(sigma2_hat) = %s\n",
                  fit.theta_hat, se(fit.se_theta).c_str(), fit.sigma2_hat, se(fit.se_sigma2).c_str());
    out << line;
    std::snprintf(line, sizeof line, "loglik = %.4f   mu = %.4f   N = %zu   converged = %s%s\n", fit.loglik, fit.mu,
                  fit.n_obs, fit.converged ? "yes" : "no", fit.boundary_hit ? "   (theta at boundary)" : "");
    out << line;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Irregularly spaced first-order moving average (IMA) models", "ima"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate a series on a given or generated time grid");
    double sim_theta = 0.0;
    double sim_sigma2 = 1.0;
    double sim_mu = 0.0;
    std::string sim_dist = "gaussian";
    std::optional<double> sim_shape;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    std::string sim_times;
    std::optional<std::size_t> sim_regular;
    std::vector<double> sim_shifted;
    std::vector<double> sim_mixture;
    sim->add_option("--theta", sim_theta, "Moving-average parameter in [0, 1)")->required();
    sim->add_option("--sigma2", sim_sigma2, "Innovation variance")->check(CLI::PositiveNumber);
    sim->add_option("--mu", sim_mu, "Process mean");
    sim->add_option("--dist", sim_dist, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "student-t", "ged"}));
    sim->add_option("--shape", sim_shape, "Shape of the Student-t (default 7) or GED (default 1.28) law");
    sim->add_option("--seed", sim_seed, "Random seed");
    sim->add_option("--out,-o", sim_out, "Output CSV (default stdout)");
    auto* g_times = sim->add_option("--times", sim_times, "CSV whose first column holds observation times");
    auto* g_regular = sim->add_option("--regular", sim_regular, "N unit-spaced times");
    auto* g_shifted = sim->add_option("--shifted-exp", sim_shifted, "N LAMBDA: gaps 1 + Exp(LAMBDA)")->expected(2);
    auto* g_mixture =
        sim->add_option("--exp-mixture", sim_mixture, "N M1 M2 W1 W2: exponential-mixture gaps")->expected(5);
    g_times->excludes(g_regular)->excludes(g_shifted)->excludes(g_mixture);
    g_regular->excludes(g_shifted)->excludes(g_mixture);
    g_shifted->excludes(g_mixture);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Maximum likelihood fit of a time,value CSV");
    std::string fit_in;
    std::string fit_out;
    bool fit_zero_mean = false;
    bool fit_quiet = false;
    fit_cmd->add_option("input", fit_in, "Input CSV")->required();
    fit_cmd->add_option("--out,-o", fit_out, "JSON report path (default stdout)");
    fit_cmd->add_flag("--zero-mean", fit_zero_mean, "Fix mu = 0 instead of the sample mean");
    fit_cmd->add_flag("--quiet,-q", fit_quiet, "Suppress the summary on stderr");

    // predict
    auto* pred_cmd = app.add_subcommand("predict", "One-step predictors and their mean squared errors");
    std::string pred_in;
    std::string pred_out;
    std::string pred_json;
    ParamFlags pred_params;
    pred_cmd->add_option("input", pred_in, "Input CSV")->required();
    pred_cmd->add_option("--out,-o", pred_out, "Prediction CSV (default stdout)");
    pred_cmd->add_option("--json", pred_json, "Also write the predictions as JSON");
    pred_params.add_to(*pred_cmd);

    // bootstrap
    auto* boot_cmd = app.add_subcommand("bootstrap", "Model-based residual bootstrap");
    std::string boot_in;
    std::string boot_out;
    std::size_t boot_b = 200;
    std::uint64_t boot_seed = 1;
    std::vector<double> boot_levels{0.95};
    std::size_t boot_threads = default_threads();
    bool boot_replicates = false;
    bool boot_zero_mean = false;
    bool boot_quiet = false;
    boot_cmd->add_option("input", boot_in, "Input CSV")->required();
    boot_cmd->add_option("--out,-o", boot_out, "JSON report path (default stdout)");
    boot_cmd->add_option("-B,--replicates", boot_b, "Number of bootstrap replicates")->check(CLI::Range(2, 1000000));
    boot_cmd->add_option("--seed", boot_seed, "Random seed");
    boot_cmd->add_option("--level", boot_levels, "Percentile interval level(s)")->check(CLI::Range(0.0, 1.0));
    boot_cmd->add_option("--threads", boot_threads, "Worker threads")->check(CLI::PositiveNumber);
    boot_cmd->add_flag("--include-replicates", boot_replicates, "Store every replicate estimate in the report");
    boot_cmd->add_flag("--zero-mean", boot_zero_mean, "Fix mu = 0 instead of the sample mean");
    boot_cmd->add_flag("--quiet,-q", boot_quiet, "Suppress the summary on stderr");

    // diagnose
    auto* diag_cmd = app.add_subcommand("diagnose", "Residual diagnostics and per-step MSE comparison");
    std::string diag_in;
    std::string diag_dir;
    std::size_t diag_max_lag = 20;
    std::size_t diag_lb_lags = 10;
    double diag_band = 0.95;
    ParamFlags diag_params;
    diag_cmd->add_option("input", diag_in, "Input CSV")->required();
    diag_cmd->add_option("--out-dir,-o", diag_dir, "Directory for acf/lb/qq/mse CSVs and report.json")->required();
    diag_cmd->add_option("--max-lag", diag_max_lag, "Largest ACF lag")->check(CLI::PositiveNumber);
    diag_cmd->add_option("--lb-lags", diag_lb_lags, "Largest Ljung-Box lag")->check(CLI::PositiveNumber);
    diag_cmd->add_option("--band-level", diag_band, "QQ reference band level")->check(CLI::Range(0.0, 1.0));
    diag_params.add_to(*diag_cmd);

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "Run a Monte Carlo scenario grid");
    std::string mc_config;
    std::string mc_dir = ".";
    std::size_t mc_threads = default_threads();
    std::optional<std::size_t> mc_replications;
    mc_cmd->add_option("config", mc_config, "Scenario file (key = value)")->required();
    mc_cmd->add_option("--out-dir,-o", mc_dir, "Output directory");
    mc_cmd->add_option("--threads", mc_threads, "Worker threads (default $IMA_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    mc_cmd->add_option("--replications,-M", mc_replications, "Override the replication count")
        ->check(CLI::Range(2, 100000000));

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (sim->parsed()) {
            InnovationDist dist = InnovationDist::gaussian();
            if (sim_dist == "student-t") dist = InnovationDist::student_t(sim_shape.value_or(7.0));
            if (sim_dist == "ged") dist = InnovationDist::ged(sim_shape.value_or(1.28));
            const auto params = ImaParams::make(sim_theta, sim_sigma2, sim_mu);
            Rng rng(sim_seed, 0);
            auto count = [](double v) {
                if (!(v >= 1.0) || v != std::floor(v)) throw Error(ErrorKind::InvalidInput, "N must be a positive integer");
                return static_cast<std::size_t>(v);
            };
            std::optional<TimeGrid> grid;
            if (!sim_times.empty()) {
                grid = TimeGrid::from_times(read_times_file(sim_times));
            } else if (sim_regular) {
                grid = TimeGrid::regular(*sim_regular);
            } else if (!sim_shifted.empty()) {
                grid = sample_gaps_shifted_exp(count(sim_shifted[0]), sim_shifted[1], rng);
            } else if (!sim_mixture.empty()) {
                grid = sample_gaps_exp_mixture(count(sim_mixture[0]),
                                               {sim_mixture[1], sim_mixture[2], sim_mixture[3], sim_mixture[4]}, rng);
            } else {
                std::cerr << "simulate: one of --times, --regular, --shifted-exp, --exp-mixture is required\n";
                return kUsage;
            }
            if (grid->scale() != 1.0) {
                std::cerr << "note: times rescaled by 1/" << fmt(grid->scale()) << " so that the minimum gap is 1\n";
            }
            const auto series = simulate(params, *grid, dist, rng);
            std::ostringstream csv;
            write_series_csv(csv, series);
            emit(sim_out, csv.str());
            return kOk;
        }

        if (fit_cmd->parsed()) {
            const auto series = read_series_csv(fit_in);
            FitOptions options;
            options.demean = !fit_zero_mean;
            const auto fit = fit_mle(series, options);
            if (!fit_quiet) print_fit_summary(std::cerr, fit);
            emit(fit_out, dump(to_json(fit)));
            return kOk;
        }

        if (pred_cmd->parsed()) {
            const auto series = read_series_csv(pred_in);
            const auto fit = pred_params.resolve(series);
            const auto prediction = innovations_predict(fit.params(), series);
            std::ostringstream csv;
            write_prediction_csv(csv, series, prediction);
            emit(pred_out, csv.str());
            if (!pred_json.empty()) {
                nlohmann::json j = to_json(prediction);
                j["fit"] = to_json(fit);
                j["times"] = std::vector<double>(series.grid().times().begin(), series.grid().times().end());
                j["scale"] = series.grid().scale();
                emit(pred_json, dump(j));
            }
            return kOk;
        }

        if (boot_cmd->parsed()) {
            const auto series = read_series_csv(boot_in);
            BootstrapOptions options;
            options.levels = boot_levels;
            options.threads = boot_threads;
            options.fit.demean = !boot_zero_mean;
            const auto result = bootstrap_estimate(series, boot_b, boot_seed, options);
            if (!boot_quiet) {
                print_fit_summary(std::cerr, result.original);
                char line[256];
                std::snprintf(line, sizeof line,
                              "theta_b = %.3f   se(theta_b) = %.3f   sigma2_b = %.3f   se(sigma2_b) = %.3f   (B = %zu, failed %zu)\n",
                              result.theta_b, result.se_theta_b, result.sigma2_b, result.se_sigma2_b, result.requested,
                              result.failures);
                std::cerr << line;
            }
            emit(boot_out, dump(to_json(result, boot_replicates)));
            return kOk;
        }

        if (diag_cmd->parsed()) {
            const auto series = read_series_csv(diag_in);
            const auto fit = diag_params.resolve(series);
            DiagnosticsOptions options;
            options.max_lag = diag_max_lag;
            options.lb_lags = diag_lb_lags;
            options.band_level = diag_band;
            options.fit = diag_params.fit_options();
            const auto report = diagnose(series, fit, options);

            std::error_code ec;
            std::filesystem::create_directories(diag_dir, ec);
            if (ec) throw Error(ErrorKind::IoError, "cannot create '" + diag_dir + "'");
            const std::filesystem::path dir(diag_dir);

            std::ostringstream acf_csv;
            acf_csv << "lag,acf,lower,upper\n";
            for (std::size_t k = 0; k < report.acf.size(); ++k) {
                acf_csv << k << ',' << fmt(report.acf[k]) << ',' << fmt(-report.acf_band) << ',' << fmt(report.acf_band)
                        << '\n';
            }
            std::ostringstream lb_csv;
            lb_csv << "lag,q,df,p_value\n";
            for (const auto& row : report.ljung_box) {
                lb_csv << row.lag << ',' << fmt(row.q) << ',' << row.df << ',' << fmt(row.p_value) << '\n';
            }
            std::ostringstream qq_csv;
            qq_csv << "theoretical,empirical,lower,upper\n";
            for (std::size_t i = 0; i < report.qq.theoretical.size(); ++i) {
                qq_csv << fmt(report.qq.theoretical[i]) << ',' << fmt(report.qq.empirical[i]) << ','
                       << fmt(report.qq.lower[i]) << ',' << fmt(report.qq.upper[i]) << '\n';
            }
            std::ostringstream mse_csv;
            mse_csv << "time,gap,mse_ima,mse_ma\n";
            const auto times = series.grid().times();
            const auto gaps = series.grid().gaps();
            for (std::size_t n = 0; n < series.size(); ++n) {
                mse_csv << fmt(times[n]) << ',' << (n == 0 ? std::string("NA") : fmt(gaps[n - 1])) << ','
                        << fmt(report.mse.mse_ima[n]) << ',' << fmt(report.mse.mse_ma[n]) << '\n';
            }
            emit((dir / "acf.csv").string(), acf_csv.str());
            emit((dir / "lb.csv").string(), lb_csv.str());
            emit((dir / "qq.csv").string(), qq_csv.str());
            emit((dir / "mse.csv").string(), mse_csv.str());
            emit((dir / "report.json").string(), dump(to_json(report)));
            return kOk;
        }

        if (mc_cmd->parsed()) {
            auto set = load_scenarios(mc_config);
            if (mc_replications) {
                for (auto& s : set.scenarios) s.replications = *mc_replications;
            }
            const auto reports = run_scenarios(set, mc_threads);

            std::ostringstream csv;
            csv << scenario_csv_header() << '\n';
            nlohmann::json scenarios = nlohmann::json::array();
            double max_mce = 0.0;
            for (const auto& r : reports) {
                csv << scenario_csv_row(r) << '\n';
                scenarios.push_back(to_json(r));
                max_mce = std::max(max_mce, r.mce);
            }
            const nlohmann::json j = {{"name", set.name},
                                      {"estimator", set.estimator == Estimator::Mle ? "mle" : "bootstrap"},
                                      {"max_mce", max_mce},
                                      {"scenarios", scenarios}};
            std::error_code ec;
            std::filesystem::create_directories(mc_dir, ec);
            if (ec) throw Error(ErrorKind::IoError, "cannot create '" + mc_dir + "'");
            const std::filesystem::path dir(mc_dir);
            emit((dir / (set.name + ".csv")).string(), csv.str());
            emit((dir / (set.name + ".json")).string(), dump(j));
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace ima::cli
