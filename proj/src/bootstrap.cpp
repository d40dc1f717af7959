#include "ima/bootstrap.hpp"

#include "ima/error.hpp"
#include "ima/parallel.hpp"
#include "ima/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace ima {

std::vector<double> standardized_residuals(const FitResult& fit, const TimeSeries& series) {
    const auto pred = innovations_predict(ImaParams{fit.theta_hat, 1.0, fit.mu}, series);
    return pred.standardized;
}

std::vector<double> center_residuals(const std::vector<double>& residuals) {
    if (residuals.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "centering needs at least two residuals");
    }
    double mean = 0.0;
    for (std::size_t n = 1; n < residuals.size(); ++n) mean += residuals[n];
    mean /= static_cast<double>(residuals.size() - 1);
    std::vector<double> centered(residuals);
    for (auto& e : centered) e -= mean;
    return centered;
}

TimeSeries regenerate_series(const FitResult& fit, const TimeGrid& grid, const std::vector<double>& draws) {
    if (draws.size() != grid.size()) {
        throw Error(ErrorKind::InvalidInput, "one draw per time point is required");
    }
    const auto c = c_sequence(fit.theta_hat, grid);
    const auto gaps = grid.gaps();
    std::vector<double> x(draws.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        x[n] = fit.mu + std::sqrt(c[n]) * draws[n];
        if (n > 0) {
            x[n] += theta_power(fit.theta_hat, gaps[n - 1]) / c[n - 1] * std::sqrt(c[n - 1]) * draws[n - 1];
        }
    }
    return TimeSeries(grid, std::move(x));
}

TimeSeries bootstrap_resample(const FitResult& fit, const TimeSeries& series, Rng& rng) {
    if (series.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "bootstrap needs at least 3 observations");
    }
    const auto pool = center_residuals(standardized_residuals(fit, series));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<double> draws(pool.size());
    for (auto& d : draws) d = pool[pick(rng)];
    return regenerate_series(fit, series.grid(), draws);
}

TimeSeries bootstrap_resample(const FitResult& fit, const TimeSeries& series, std::uint64_t seed) {
    Rng rng(seed, 0);
    return bootstrap_resample(fit, series, rng);
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

BootstrapResult bootstrap_estimate(const FitResult& fit, const TimeSeries& series, std::size_t replicates,
                                   std::uint64_t seed, const BootstrapOptions& options) {
    if (replicates < 2) throw Error(ErrorKind::InvalidParameter, "bootstrap needs B >= 2");
    if (series.size() < 3) throw Error(ErrorKind::InsufficientData, "bootstrap needs at least 3 observations");

    const auto pool = center_residuals(standardized_residuals(fit, series));
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> thetas(replicates, kNaN);
    std::vector<double> sigma2s(replicates, kNaN);

    FitOptions refit = options.fit;
    refit.compute_se = false;
    parallel_for(replicates, options.threads, [&](std::size_t b) {
        Rng rng(seed, b);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        std::vector<double> draws(pool.size());
        for (auto& d : draws) d = pool[pick(rng)];
        try {
            const auto replicate = fit_mle(regenerate_series(fit, series.grid(), draws), refit);
            thetas[b] = replicate.theta_hat;
            sigma2s[b] = replicate.sigma2_hat;
        } catch (const Error&) {
            // recorded as NaN and counted below
        }
    });

    BootstrapResult out;
    out.original = fit;
    out.requested = replicates;
    for (std::size_t b = 0; b < replicates; ++b) {
        if (std::isnan(thetas[b])) {
            ++out.failures;
            continue;
        }
        out.replicate_thetas.push_back(thetas[b]);
        out.replicate_sigma2s.push_back(sigma2s[b]);
    }
    const auto ok = out.replicate_thetas.size();
    if (ok < 2 || static_cast<double>(out.failures) > options.max_failure_fraction * static_cast<double>(replicates)) {
        throw Error(ErrorKind::BootstrapUnstable, std::to_string(out.failures) + " of " +
                                                      std::to_string(replicates) + " replicate fits failed");
    }
    out.theta_b = mean_of(out.replicate_thetas);
    out.se_theta_b = sd_of(out.replicate_thetas, out.theta_b);
    out.sigma2_b = mean_of(out.replicate_sigma2s);
    out.se_sigma2_b = sd_of(out.replicate_sigma2s, out.sigma2_b);
    for (double level : options.levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw Error(ErrorKind::InvalidParameter, "interval level must lie in (0, 1)");
        }
        const double tail = 0.5 * (1.0 - level);
        out.intervals.push_back({level, quantile(out.replicate_thetas, tail), quantile(out.replicate_thetas, 1.0 - tail),
                                 quantile(out.replicate_sigma2s, tail), quantile(out.replicate_sigma2s, 1.0 - tail)});
    }
    return out;
}

BootstrapResult bootstrap_estimate(const TimeSeries& series, std::size_t replicates, std::uint64_t seed,
                                   const BootstrapOptions& options) {
    FitOptions first = options.fit;
    first.compute_se = true;
    return bootstrap_estimate(fit_mle(series, first), series, replicates, seed, options);
}

}  // namespace ima
