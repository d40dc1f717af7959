#include "ima/predict.hpp"

#include "ima/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ima {

namespace {

PredictionOutput finish(std::vector<double> predictors, std::vector<double> mse, std::span<const double> x) {
    PredictionOutput out;
    out.innovations.resize(x.size());
    out.standardized.resize(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        out.innovations[n] = x[n] - predictors[n];
        out.standardized[n] = out.innovations[n] / std::sqrt(mse[n]);
    }
    out.predictors = std::move(predictors);
    out.mse = std::move(mse);
    return out;
}

}  // namespace

PredictionOutput innovations_predict(const ImaParams& params, const TimeSeries& series) {
    params.validate();
    const auto x = series.values();
    const auto gaps = series.grid().gaps();
    const auto c = c_sequence(params.theta, gaps);

    std::vector<double> predictors(x.size());
    std::vector<double> mse(x.size());
    double centered_hat = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (n > 0) {
            centered_hat = theta_power(params.theta, gaps[n - 1]) / c[n - 1] *
                           (x[n - 1] - params.mu - centered_hat);
        }
        predictors[n] = params.mu + centered_hat;
        mse[n] = params.sigma2 * c[n];
    }
    return finish(std::move(predictors), std::move(mse), x);
}

InnovationsCoefficients innovations_algorithm_general(double gamma0, std::span<const double> gamma1) {
    if (!(gamma0 > 0.0)) {
        throw Error(ErrorKind::NotPositiveDefinite, "gamma0 must be positive");
    }
    InnovationsCoefficients out;
    out.theta_n1.resize(gamma1.size());
    out.upsilon.resize(gamma1.size() + 1);
    out.upsilon[0] = gamma0;
    for (std::size_t n = 0; n < gamma1.size(); ++n) {
        const double ratio = gamma1[n] / gamma0;
        if (!(ratio * ratio <= 0.25)) {
            throw Error(ErrorKind::NotPositiveDefinite,
                        "(gamma1/gamma0)^2 exceeds 1/4 at lag entry " + std::to_string(n + 1));
        }
        out.theta_n1[n] = gamma1[n] / out.upsilon[n];
        out.upsilon[n + 1] = gamma0 - out.theta_n1[n] * out.theta_n1[n] * out.upsilon[n];
    }
    return out;
}

PredictionOutput direct_predict_oracle(const ImaParams& params, const TimeSeries& series, std::size_t max_size) {
    params.validate();
    const std::size_t size = series.size();
    if (size > max_size) {
        throw Error(ErrorKind::InvalidInput,
                    "direct solve limited to " + std::to_string(max_size) + " observations");
    }
    const auto cov = covariance_matrix(params, series.grid());
    const double gamma0 = cov.diag.front();
    const auto x = series.values();

    std::vector<double> predictors(size, params.mu);
    std::vector<double> mse(size, gamma0);

    // For each n solve Gamma_n phi = (0, ..., 0, gamma_{1,n+1}) by tridiagonal elimination.
    std::vector<double> pivot(size);
    std::vector<double> upper(size);
    std::vector<double> rhs(size);
    std::vector<double> phi(size);
    for (std::size_t n = 1; n < size; ++n) {
        const double target = cov.off[n - 1];
        for (std::size_t i = 0; i < n; ++i) {
            const double sub = i > 0 ? cov.off[i - 1] : 0.0;
            pivot[i] = cov.diag[i] - (i > 0 ? sub * upper[i - 1] : 0.0);
            if (!(pivot[i] > 0.0)) {
                throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot in prediction equations");
            }
            upper[i] = i + 1 < n ? cov.off[i] / pivot[i] : 0.0;
            const double b = i + 1 == n ? target : 0.0;
            rhs[i] = (b - (i > 0 ? sub * rhs[i - 1] : 0.0)) / pivot[i];
        }
        phi[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) phi[i] = rhs[i] - upper[i] * phi[i + 1];

        double prediction = 0.0;
        for (std::size_t i = 0; i < n; ++i) prediction += phi[i] * (x[i] - params.mu);
        predictors[n] = params.mu + prediction;
        // gamma_n' Gamma_n^{-1} gamma_n = target * phi_n (only the last entry of gamma_n is non-zero)
        mse[n] = gamma0 - target * phi[n - 1];
    }
    return finish(std::move(predictors), std::move(mse), x);
}

PredictionOutput state_space_filter(const ImaParams& params, const TimeSeries& series) {
    params.validate();
    const auto x = series.values();
    const auto gaps = series.grid().gaps();
    const auto c = c_sequence(params.theta, gaps);

    std::vector<double> predictors(x.size());
    std::vector<double> mse(x.size());
    double alpha = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        predictors[n] = params.mu + alpha;
        mse[n] = params.sigma2 * c[n];
        if (n + 1 < x.size()) {
            const double transition = theta_power(params.theta, gaps[n]) / c[n];
            alpha = -transition * alpha + transition * (x[n] - params.mu);
        }
    }
    return finish(std::move(predictors), std::move(mse), x);
}

std::vector<double> residual_expansion(const ImaParams& params, const TimeSeries& series, std::size_t max_terms) {
    params.validate();
    const auto x = series.values();
    const auto gaps = series.grid().gaps();
    const auto c = c_sequence(params.theta, gaps);
    const std::size_t size = x.size();

    std::vector<double> e(size);
    for (std::size_t n = 0; n < size; ++n) e[n] = x[n] - params.mu;
    if (params.theta == 0.0) return e;

    // Below this log-coefficient every remaining term is zero in double precision.
    constexpr double kLogUnderflow = -746.0;
    const double log_theta = std::log(params.theta);
    for (std::size_t n = 1; n < size; ++n) {
        const std::size_t terms = max_terms == 0 ? n : std::min(n, max_terms);
        double log_coef = 0.0;
        double sum = 0.0;
        for (std::size_t j = 1; j <= terms; ++j) {
            // j-th term: prod_{k=n-j+1}^{n} theta^gap_k / prod_{l=n-j}^{n-1} c_l, 0-based indices below.
            log_coef += gaps[n - j] * log_theta - std::log(c[n - j]);
            if (log_coef < kLogUnderflow) break;
            const double term = std::exp(log_coef) * (x[n - j] - params.mu);
            sum += (j % 2 == 1) ? -term : term;
        }
        e[n] += sum;
    }
    return e;
}

InnovationSums innovation_sums(double theta, const TimeSeries& series, double mu) {
    const auto x = series.values();
    const auto gaps = series.grid().gaps();
    InnovationSums sums;
    if (theta == 0.0) {
        for (double v : x) sums.weighted_sq += (v - mu) * (v - mu);
        return sums;
    }
    const double log_theta = std::log(theta);
    const double theta2 = theta * theta;
    double excess = theta2;
    double innovation = x[0] - mu;
    sums.weighted_sq = innovation * innovation / (1.0 + excess);
    sums.log_c = std::log1p(excess);
    for (std::size_t n = 1; n < x.size(); ++n) {
        const double hat = std::exp(gaps[n - 1] * log_theta) / (1.0 + excess) * innovation;
        excess = c_excess_next(theta2, log_theta, gaps[n - 1], excess);
        innovation = x[n] - mu - hat;
        sums.weighted_sq += innovation * innovation / (1.0 + excess);
        sums.log_c += std::log1p(excess);
    }
    return sums;
}

}  // namespace ima
