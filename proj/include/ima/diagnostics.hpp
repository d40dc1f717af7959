#pragma once

#include "ima/core.hpp"
#include "ima/estimate.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ima {

/// Sample autocorrelations rho_0..rho_max_lag (index = lag). Throws DegenerateData for constant input.
[[nodiscard]] std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

struct LjungBoxRow {
    std::size_t lag = 0;
    double q = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
};

/// Q(h) = N(N+2) sum_{k<=h} rho_k^2 / (N-k) against chi-square(h), for h = 1..lags.
[[nodiscard]] std::vector<LjungBoxRow> ljung_box(std::span<const double> x, std::size_t lags);

/// Upper tail of the chi-square distribution.
[[nodiscard]] double chi_square_sf(double x, std::size_t df);

[[nodiscard]] double normal_quantile(double p);

struct QqData {
    std::vector<double> theoretical;
    std::vector<double> empirical;
    std::vector<double> lower;  ///< pointwise reference band around the identity line
    std::vector<double> upper;
};

[[nodiscard]] QqData qq_normal(std::span<const double> x, double band_level = 0.95);

struct MseComparison {
    std::vector<double> mse_ima;
    std::vector<double> mse_ma;
    double mean_ima = 0.0;
    double mean_ma = 0.0;
    FitResult fit_ma;  ///< the same estimator refitted with every gap set to 1
};

[[nodiscard]] MseComparison mse_comparison(const TimeSeries& series, const FitResult& fit_ima,
                                           const FitOptions& options = {});

struct DiagnosticsOptions {
    std::size_t max_lag = 20;
    std::size_t lb_lags = 10;
    double band_level = 0.95;
    FitOptions fit{};
};

struct DiagnosticsReport {
    FitResult fit;
    std::vector<double> standardized;
    std::vector<double> acf;
    double acf_band = 0.0;  ///< half-width of the white-noise band, z / sqrt(N)
    std::vector<LjungBoxRow> ljung_box;
    QqData qq;
    MseComparison mse;
};

/// Residual analysis of `series` under `fit` (standardized innovations include sigma2).
[[nodiscard]] DiagnosticsReport diagnose(const TimeSeries& series, const FitResult& fit,
                                         const DiagnosticsOptions& options = {});

}  // namespace ima
