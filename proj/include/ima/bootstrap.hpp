#pragma once

#include "ima/core.hpp"
#include "ima/estimate.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ima {

/// (X_n - Xhat_n(theta_hat)) / sqrt(c_n(theta_hat)) for n = 1..N, unit sigma.
[[nodiscard]] std::vector<double> standardized_residuals(const FitResult& fit, const TimeSeries& series);

/// Subtracts the mean of entries 2..N from every entry (the first one included).
[[nodiscard]] std::vector<double> center_residuals(const std::vector<double>& residuals);

/// Regenerates a series on `grid` from standardized innovations drawn for it.
[[nodiscard]] TimeSeries regenerate_series(const FitResult& fit, const TimeGrid& grid,
                                           const std::vector<double>& draws);

/// Model-based resample on the original time grid. Throws InsufficientData for N < 3.
[[nodiscard]] TimeSeries bootstrap_resample(const FitResult& fit, const TimeSeries& series, Rng& rng);
[[nodiscard]] TimeSeries bootstrap_resample(const FitResult& fit, const TimeSeries& series, std::uint64_t seed);

struct PercentileInterval {
    double level = 0.95;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double sigma2_lo = 0.0;
    double sigma2_hi = 0.0;
};

struct BootstrapOptions {
    std::vector<double> levels{0.95};
    FitOptions fit{.compute_se = false};
    std::size_t threads = 1;
    /// Failed replicate fraction above which BootstrapUnstable is thrown.
    double max_failure_fraction = 0.10;
};

struct BootstrapResult {
    FitResult original;
    std::vector<double> replicate_thetas;
    std::vector<double> replicate_sigma2s;
    double theta_b = 0.0;
    double se_theta_b = 0.0;
    double sigma2_b = 0.0;
    double se_sigma2_b = 0.0;
    std::vector<PercentileInterval> intervals;
    std::size_t requested = 0;
    std::size_t failures = 0;
};

/// Fits `series`, then refits B model-based resamples. Resample b draws from
/// stream b of `seed`. Throws InvalidParameter for B < 2 and BootstrapUnstable
/// when more than the allowed fraction of replicate fits fail.
[[nodiscard]] BootstrapResult bootstrap_estimate(const TimeSeries& series, std::size_t replicates,
                                                 std::uint64_t seed, const BootstrapOptions& options = {});
/// Same, starting from an existing fit of `series`.
[[nodiscard]] BootstrapResult bootstrap_estimate(const FitResult& fit, const TimeSeries& series,
                                                 std::size_t replicates, std::uint64_t seed,
                                                 const BootstrapOptions& options = {});

/// Sample quantile with linear interpolation between order statistics.
[[nodiscard]] double quantile(std::vector<double> values, double p);

}  // namespace ima
