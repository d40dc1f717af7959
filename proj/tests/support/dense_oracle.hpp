#pragma once

// Dense-matrix reference computations, deliberately independent of the
// O(N) recursions in the library.

#include "ima/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace ima::testing {

inline Eigen::MatrixXd dense_covariance(const ImaParams& p, const TimeGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    const auto gaps = grid.gaps();
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = p.sigma2 * (1.0 + p.theta * p.theta);
        if (i + 1 < n) {
            g(i, i + 1) = g(i + 1, i) = p.sigma2 * std::pow(p.theta, gaps[static_cast<std::size_t>(i)]);
        }
    }
    return g;
}

/// -1/2 log det(2 pi Gamma) - 1/2 r' Gamma^{-1} r via a dense Cholesky factor.
inline double dense_loglik(const ImaParams& p, const TimeSeries& s) {
    const Eigen::MatrixXd g = dense_covariance(p, s.grid());
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw std::runtime_error("covariance not positive definite");
    Eigen::VectorXd r(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) r(static_cast<Eigen::Index>(i)) = s.values()[i] - p.mu;
    const Eigen::VectorXd z = llt.matrixL().solve(r);
    const Eigen::MatrixXd l = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
    const double n = static_cast<double>(s.size());
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * logdet - 0.5 * z.squaredNorm();
}

struct DensePrediction {
    std::vector<double> predictors;
    std::vector<double> mse;
};

/// Best linear predictor of X_{n+1} from X_1..X_n by solving the normal equations densely.
inline DensePrediction dense_predict(const ImaParams& p, const TimeSeries& s) {
    const Eigen::MatrixXd g = dense_covariance(p, s.grid());
    DensePrediction out;
    const double gamma0 = g(0, 0);
    out.predictors.push_back(p.mu);
    out.mse.push_back(gamma0);
    for (Eigen::Index n = 1; n < static_cast<Eigen::Index>(s.size()); ++n) {
        const Eigen::MatrixXd gn = g.topLeftCorner(n, n);
        const Eigen::VectorXd target = g.col(n).head(n);
        const Eigen::VectorXd phi = gn.ldlt().solve(target);
        double pred = p.mu;
        for (Eigen::Index k = 0; k < n; ++k) pred += phi(k) * (s.values()[static_cast<std::size_t>(k)] - p.mu);
        out.predictors.push_back(pred);
        out.mse.push_back(gamma0 - target.dot(phi));
    }
    return out;
}

/// Random grid with gaps uniform on [1, max_gap] and a Gaussian-noise series on it.
inline TimeSeries random_instance(std::mt19937_64& gen, std::size_t n, double max_gap) {
    std::uniform_real_distribution<double> gap(1.0, max_gap);
    std::normal_distribution<double> noise(0.0, 1.5);
    std::vector<double> times{0.0};
    for (std::size_t i = 1; i < n; ++i) times.push_back(times.back() + gap(gen));
    std::vector<double> x(n);
    for (auto& v : x) v = noise(gen);
    return TimeSeries(TimeGrid::from_times(times), std::move(x));
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace ima::testing
