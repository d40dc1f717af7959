#pragma once

#include "ima/core.hpp"
#include "ima/estimate.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ima {

struct GapModel {
    enum class Kind { Regular, ShiftedExp, ExpMixture };
    Kind kind = Kind::ShiftedExp;
    double rate = 1.0;      ///< ShiftedExp: gaps 1 + Exponential(rate)
    ExpMixture mixture{};   ///< ExpMixture parameters

    [[nodiscard]] TimeGrid draw(std::size_t n, Rng& rng) const;
};

enum class Estimator { Mle, Bootstrap };

struct McConfig {
    double theta0 = 0.5;
    double sigma2 = 1.0;
    std::size_t n_obs = 100;
    std::size_t replications = 200;
    std::size_t bootstrap_b = 0;
    GapModel gaps{};
    InnovationDist innovation = InnovationDist::gaussian();
    std::uint64_t master_seed = 1;
    std::size_t threads = 1;
    bool shared_grid = false;  ///< one grid for all replicates instead of a fresh draw each
    bool demean = true;
    bool keep_records = false;
    /// Failed-replicate fraction above which McUnstable is thrown.
    double max_failure_fraction = 0.05;

    void validate() const;
};

struct McRecord {
    double estimate = 0.0;
    std::optional<double> se;
};

/// Performance measures of one Monte Carlo cell.
struct McReport {
    double theta0 = 0.0;
    std::size_t n_obs = 0;
    Estimator estimator = Estimator::Mle;
    double mean_estimate = 0.0;  ///< average of replicate estimates
    double mean_se = 0.0;        ///< average of per-replicate standard errors
    double empirical_se = 0.0;   ///< SD of replicate estimates, divisor M-1
    double bias = 0.0;
    double rmse = 0.0;           ///< sqrt(mean_se^2 + bias^2)
    std::optional<double> cv;    ///< mean_se / |mean_estimate|; empty when the mean is 0
    double mce = 0.0;            ///< empirical_se / sqrt(M)
    std::size_t requested = 0;
    std::size_t used = 0;
    std::size_t failures = 0;
    std::size_t se_missing = 0;  ///< replicates kept whose se could not be formed
    std::vector<McRecord> records;
};

/// Aggregates replicate estimates and their standard errors. Empty `ses`
/// entries are skipped in mean_se. Throws InvalidInput for M < 2.
[[nodiscard]] McReport performance_measures(const std::vector<double>& estimates,
                                            const std::vector<std::optional<double>>& ses, double theta0);

/// Simulates M trajectories and fits each by maximum likelihood.
[[nodiscard]] McReport run_mc_mle(const McConfig& config);
/// Simulates M trajectories and runs a B-replicate bootstrap on each.
[[nodiscard]] McReport run_mc_bootstrap(const McConfig& config);

/// Scenario grid read from a key = value file; list-valued keys
/// (theta0, n_obs) expand to their cartesian product, N outermost.
struct ScenarioSet {
    std::string name = "scenarios";
    Estimator estimator = Estimator::Mle;
    std::vector<McConfig> scenarios;
};

/// Throws Error(ConfigError) naming the offending key or line.
[[nodiscard]] ScenarioSet parse_scenarios(std::istream& in);
[[nodiscard]] ScenarioSet load_scenarios(const std::string& path);

[[nodiscard]] std::vector<McReport> run_scenarios(const ScenarioSet& set, std::optional<std::size_t> threads = {});

[[nodiscard]] std::string scenario_csv_header();
[[nodiscard]] std::string scenario_csv_row(const McReport& report);

}  // namespace ima
