#pragma once

#include "ima/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ima {

/// One-step predictors and their errors; every sequence has one entry per observation.
struct PredictionOutput {
    std::vector<double> predictors;    ///< Xhat_n, with Xhat_1 = mu
    std::vector<double> mse;           ///< nu_n = sigma2 * c_n
    std::vector<double> innovations;   ///< X_n - Xhat_n
    std::vector<double> standardized;  ///< innovations / sqrt(nu_n)
};

/// O(N) closed-form recursion Xhat_{n+1} = (theta^gap / c_n) (X_n - Xhat_n).
[[nodiscard]] PredictionOutput innovations_predict(const ImaParams& params, const TimeSeries& series);

struct InnovationsCoefficients {
    std::vector<double> theta_n1;  ///< theta_{n,1}, length N-1
    std::vector<double> upsilon;   ///< one-step MSEs upsilon_1..upsilon_N
};

/// Innovations algorithm for a tridiagonal covariance with constant diagonal `gamma0`
/// and first off-diagonal `gamma1`. Throws NotPositiveDefinite when (gamma1/gamma0)^2 > 1/4.
[[nodiscard]] InnovationsCoefficients innovations_algorithm_general(double gamma0, std::span<const double> gamma1);

inline constexpr std::size_t kDirectPredictCap = 5000;

/// Reference predictor: solves Gamma_n phi_n = gamma_n for every n.
/// O(N^2); refuses series longer than `max_size`.
[[nodiscard]] PredictionOutput direct_predict_oracle(const ImaParams& params, const TimeSeries& series,
                                                     std::size_t max_size = kDirectPredictCap);

/// Uncorrelated-disturbance state-space form run as an exact filter from alpha_1 = 0.
[[nodiscard]] PredictionOutput state_space_filter(const ImaParams& params, const TimeSeries& series);

/// Innovations from the alternating-product expansion in past observations.
/// Terms whose coefficient underflows double precision are dropped; `max_terms`
/// caps the number of lagged observations used (0 means all).
[[nodiscard]] std::vector<double> residual_expansion(const ImaParams& params, const TimeSeries& series,
                                                     std::size_t max_terms = 0);

/// Sufficient statistics of the Gaussian likelihood at unit sigma2:
/// sum of innovation^2 / c_n and sum of log c_n, both over n = 1..N.
struct InnovationSums {
    double weighted_sq = 0.0;
    double log_c = 0.0;
};

[[nodiscard]] InnovationSums innovation_sums(double theta, const TimeSeries& series, double mu);

}  // namespace ima
