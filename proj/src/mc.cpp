#include "ima/mc.hpp"

#include "ima/bootstrap.hpp"
#include "ima/error.hpp"
#include "ima/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

namespace ima {

TimeGrid GapModel::draw(std::size_t n, Rng& rng) const {
    switch (kind) {
        case Kind::Regular: return TimeGrid::regular(n);
        case Kind::ShiftedExp: return sample_gaps_shifted_exp(n, rate, rng);
        case Kind::ExpMixture: return sample_gaps_exp_mixture(n, mixture, rng);
    }
    return TimeGrid::regular(n);
}

void McConfig::validate() const {
    ImaParams::make(theta0, sigma2);
    if (replications < 2) throw Error(ErrorKind::InvalidParameter, "Monte Carlo needs M >= 2");
    if (n_obs < 3) throw Error(ErrorKind::InvalidParameter, "Monte Carlo needs n_obs >= 3");
}

McReport performance_measures(const std::vector<double>& estimates, const std::vector<std::optional<double>>& ses,
                              double theta0) {
    const std::size_t m = estimates.size();
    if (m < 2 || ses.size() != m) {
        throw Error(ErrorKind::InvalidInput, "performance measures need M >= 2 paired estimates and ses");
    }
    McReport r;
    r.theta0 = theta0;
    r.used = m;
    double sum = 0.0;
    for (double e : estimates) sum += e;
    r.mean_estimate = sum / static_cast<double>(m);

    double se_sum = 0.0;
    std::size_t se_count = 0;
    for (const auto& se : ses) {
        if (se) {
            se_sum += *se;
            ++se_count;
        }
    }
    r.se_missing = m - se_count;
    r.mean_se = se_count > 0 ? se_sum / static_cast<double>(se_count) : std::numeric_limits<double>::quiet_NaN();

    double ss = 0.0;
    for (double e : estimates) ss += (e - r.mean_estimate) * (e - r.mean_estimate);
    r.empirical_se = std::sqrt(ss / static_cast<double>(m - 1));
    r.bias = r.mean_estimate - theta0;
    r.rmse = std::sqrt(r.mean_se * r.mean_se + r.bias * r.bias);
    if (r.mean_estimate != 0.0) r.cv = r.mean_se / std::abs(r.mean_estimate);
    r.mce = r.empirical_se / std::sqrt(static_cast<double>(m));
    return r;
}

namespace {

constexpr std::uint64_t kSharedGridStream = std::numeric_limits<std::uint64_t>::max();

template <class ReplicateFn>
McReport run_mc(const McConfig& config, Estimator estimator, ReplicateFn&& replicate) {
    config.validate();
    const ImaParams params = ImaParams::make(config.theta0, config.sigma2);
    std::optional<TimeGrid> shared;
    if (config.shared_grid) {
        Rng grid_rng(config.master_seed, kSharedGridStream);
        shared = config.gaps.draw(config.n_obs, grid_rng);
    }

    std::vector<std::optional<McRecord>> results(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t m) {
        Rng rng(config.master_seed, m);
        try {
            const TimeGrid grid = shared ? *shared : config.gaps.draw(config.n_obs, rng);
            const TimeSeries series = simulate(params, grid, config.innovation, rng);
            results[m] = replicate(series, m);
        } catch (const Error&) {
            // counted as a failed replicate
        }
    });

    std::vector<double> estimates;
    std::vector<std::optional<double>> ses;
    std::size_t failures = 0;
    for (const auto& r : results) {
        if (!r) {
            ++failures;
            continue;
        }
        estimates.push_back(r->estimate);
        ses.push_back(r->se);
    }
    if (static_cast<double>(failures) > config.max_failure_fraction * static_cast<double>(config.replications) ||
        estimates.size() < 2) {
        throw Error(ErrorKind::McUnstable, std::to_string(failures) + " of " +
                                               std::to_string(config.replications) + " replicates failed");
    }
    McReport report = performance_measures(estimates, ses, config.theta0);
    report.n_obs = config.n_obs;
    report.estimator = estimator;
    report.requested = config.replications;
    report.failures = failures;
    if (config.keep_records) {
        for (std::size_t i = 0; i < estimates.size(); ++i) report.records.push_back({estimates[i], ses[i]});
    }
    return report;
}

FitOptions fit_options(const McConfig& config) {
    FitOptions options;
    options.demean = config.demean;
    options.fixed_mu = 0.0;
    return options;
}

}  // namespace

McReport run_mc_mle(const McConfig& config) {
    const FitOptions options = fit_options(config);
    return run_mc(config, Estimator::Mle, [&](const TimeSeries& series, std::size_t) {
        const auto fit = fit_mle(series, options);
        return McRecord{fit.theta_hat, fit.se_theta};
    });
}

McReport run_mc_bootstrap(const McConfig& config) {
    if (config.bootstrap_b < 2) throw Error(ErrorKind::InvalidParameter, "bootstrap Monte Carlo needs B >= 2");
    FitOptions options = fit_options(config);
    options.compute_se = false;
    BootstrapOptions boot;
    boot.fit = options;
    return run_mc(config, Estimator::Bootstrap, [&](const TimeSeries& series, std::size_t m) {
        const auto fit = fit_mle(series, options);
        const auto result =
            bootstrap_estimate(fit, series, config.bootstrap_b, derive_seed(config.master_seed, m), boot);
        return McRecord{result.theta_b, result.se_theta_b};
    });
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw Error(ErrorKind::ConfigError, "invalid value '" + value + "' for key '" + key + "'");
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) bad_value(key, text);
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text);
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    bad_value(key, text);
}

}  // namespace

ScenarioSet parse_scenarios(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        if (key.empty()) throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": empty key");
        if (entries.contains(key)) throw Error(ErrorKind::ConfigError, "duplicate key '" + key + "'");
        entries[key] = trim(std::string_view(text).substr(eq + 1));
    }

    static const std::vector<std::string> known = {
        "name",     "estimator",     "theta0",          "n_obs",      "sigma2",    "replications",
        "bootstrap", "gaps",         "lambda",          "mixture_means", "mixture_weights", "innovation",
        "shape",    "seed",          "shared_grid",     "demean",     "threads"};
    for (const auto& [key, value] : entries) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
        }
    }
    auto get = [&](const std::string& key, const std::string& fallback) {
        const auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second;
    };

    ScenarioSet set;
    set.name = get("name", "scenarios");
    if (set.name.empty() || set.name.find_first_of("/\\") != std::string::npos) bad_value("name", set.name);
    const std::string estimator = get("estimator", "mle");
    if (estimator == "mle") {
        set.estimator = Estimator::Mle;
    } else if (estimator == "bootstrap") {
        set.estimator = Estimator::Bootstrap;
    } else {
        bad_value("estimator", estimator);
    }

    McConfig base;
    base.sigma2 = parse_double("sigma2", get("sigma2", "1"));
    base.replications = parse_uint("replications", get("replications", "200"));
    base.bootstrap_b = parse_uint("bootstrap", get("bootstrap", set.estimator == Estimator::Bootstrap ? "200" : "0"));
    base.threads = parse_uint("threads", get("threads", "1"));
    base.shared_grid = parse_bool("shared_grid", get("shared_grid", "false"));
    base.demean = parse_bool("demean", get("demean", "true"));
    const std::uint64_t seed = parse_uint("seed", get("seed", "1"));

    const std::string gaps = get("gaps", "shifted_exp");
    if (gaps == "regular") {
        base.gaps.kind = GapModel::Kind::Regular;
    } else if (gaps == "shifted_exp") {
        base.gaps.kind = GapModel::Kind::ShiftedExp;
        base.gaps.rate = parse_double("lambda", get("lambda", "1"));
        if (!(base.gaps.rate > 0.0)) bad_value("lambda", get("lambda", "1"));
    } else if (gaps == "exp_mixture") {
        base.gaps.kind = GapModel::Kind::ExpMixture;
        const auto means = split_list(get("mixture_means", "130, 6.5"));
        const auto weights = split_list(get("mixture_weights", "0.15, 0.85"));
        if (means.size() != 2) bad_value("mixture_means", get("mixture_means", ""));
        if (weights.size() != 2) bad_value("mixture_weights", get("mixture_weights", ""));
        base.gaps.mixture = {parse_double("mixture_means", means[0]), parse_double("mixture_means", means[1]),
                             parse_double("mixture_weights", weights[0]),
                             parse_double("mixture_weights", weights[1])};
        if (std::abs(base.gaps.mixture.weight1 + base.gaps.mixture.weight2 - 1.0) > 1e-12) {
            bad_value("mixture_weights", get("mixture_weights", ""));
        }
    } else {
        bad_value("gaps", gaps);
    }

    const std::string innovation = get("innovation", "gaussian");
    try {
        if (innovation == "gaussian") {
            base.innovation = InnovationDist::gaussian();
        } else if (innovation == "student_t") {
            base.innovation = InnovationDist::student_t(parse_double("shape", get("shape", "7")));
        } else if (innovation == "ged") {
            base.innovation = InnovationDist::ged(parse_double("shape", get("shape", "1.28")));
        } else {
            bad_value("innovation", innovation);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        bad_value("shape", get("shape", ""));
    }

    std::vector<double> thetas;
    for (const auto& t : split_list(get("theta0", "0.1, 0.5, 0.9"))) thetas.push_back(parse_double("theta0", t));
    std::vector<std::size_t> sizes;
    for (const auto& n : split_list(get("n_obs", "100, 500, 1500"))) sizes.push_back(parse_uint("n_obs", n));

    for (const auto n : sizes) {
        for (const double theta : thetas) {
            McConfig config = base;
            config.theta0 = theta;
            config.n_obs = n;
            config.master_seed = derive_seed(seed, set.scenarios.size());
            try {
                config.validate();
            } catch (const Error&) {
                throw Error(ErrorKind::ConfigError, "invalid scenario (theta0 = " + std::to_string(theta) +
                                                        ", n_obs = " + std::to_string(n) + ")");
            }
            if (set.estimator == Estimator::Bootstrap && config.bootstrap_b < 2) {
                bad_value("bootstrap", get("bootstrap", ""));
            }
            set.scenarios.push_back(config);
        }
    }
    return set;
}

ScenarioSet load_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config file '" + path + "'");
    return parse_scenarios(in);
}

std::vector<McReport> run_scenarios(const ScenarioSet& set, std::optional<std::size_t> threads) {
    std::vector<McReport> reports;
    reports.reserve(set.scenarios.size());
    for (McConfig config : set.scenarios) {
        if (threads) config.threads = *threads;
        reports.push_back(set.estimator == Estimator::Mle ? run_mc_mle(config) : run_mc_bootstrap(config));
    }
    return reports;
}

std::string scenario_csv_header() { return "N,theta0,estimate,se_hat,se_tilde,bias,rmse,cv,mce,used,failures"; }

std::string scenario_csv_row(const McReport& r) {
    char buf[512];
    const std::string cv = r.cv ? [&] {
        char tmp[64];
        std::snprintf(tmp, sizeof tmp, "%.6f", *r.cv);
        return std::string(tmp);
    }()
                                : std::string("NA");
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%.6f,%zu,%zu", r.n_obs, r.theta0,
                  r.mean_estimate, r.mean_se, r.empirical_se, r.bias, r.rmse, cv.c_str(), r.mce, r.used, r.failures);
    return buf;
}

}  // namespace ima
