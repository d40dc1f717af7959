#pragma once

#include "ima/core.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ima {

struct ReducedLikelihood {
    double q = 0.0;           ///< log sigma2_hat(theta) + mean log c_n(theta)
    double sigma2_hat = 0.0;  ///< profiled innovation variance
};

/// Profile objective with sigma2 concentrated out; sums run over n = 1..N.
/// Throws DegenerateData when every innovation is zero.
[[nodiscard]] ReducedLikelihood reduced_likelihood(double theta, const TimeSeries& series, double mu = 0.0);

/// Exact Gaussian log density of the observed vector.
[[nodiscard]] double log_likelihood(const ImaParams& params, const TimeSeries& series);

struct MinimizeResult {
    double argmin = 0.0;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Grid bracketing followed by Brent's parabolic/golden-section refinement.
/// Throws NumericalFailure if `f` returns a non-finite value.
[[nodiscard]] MinimizeResult minimize_bounded(const std::function<double(double)>& f, double lo, double hi,
                                              double tol = 1e-8, std::size_t max_iter = 200,
                                              std::size_t grid_points = 24);

struct FitOptions {
    bool demean = true;  ///< estimate mu by the sample mean; otherwise mu = fixed_mu
    double fixed_mu = 0.0;
    double theta_tol = 1e-8;
    std::size_t max_iter = 200;
    std::size_t grid_points = 24;
    bool compute_se = true;
};

struct FitResult {
    double theta_hat = 0.0;
    double sigma2_hat = 0.0;
    double mu = 0.0;
    std::optional<double> se_theta;
    std::optional<double> se_sigma2;
    double loglik = 0.0;
    double q_value = 0.0;
    std::size_t iterations = 0;
    std::size_t n_obs = 0;
    bool converged = false;
    bool boundary_hit = false;
    /// False when the SEs come from a boundary optimum or could not be formed.
    bool se_reliable = false;

    [[nodiscard]] ImaParams params() const { return ImaParams{theta_hat, sigma2_hat, mu}; }
};

/// Maximum likelihood fit of theta in [0, kThetaMax] with sigma2 profiled out.
/// Throws InsufficientData for N < 3 and NumericalFailure for non-finite objectives.
[[nodiscard]] FitResult fit_mle(const TimeSeries& series, const FitOptions& options = {});

struct StandardErrors {
    double se_theta = 0.0;
    double se_sigma2 = 0.0;
};

/// Central-difference Hessian of -loglik in (theta, sigma2) at the fit.
/// Throws SeUnavailable when the Hessian is not positive definite.
[[nodiscard]] StandardErrors observed_information_se(const FitResult& fit, const TimeSeries& series);

/// Finite-difference Hessian of `f` at `x`. Coordinates whose stencil would
/// leave [lower, upper] are differenced around a shifted centre instead.
[[nodiscard]] std::vector<double> numerical_hessian(const std::function<double(std::span<const double>)>& f,
                                                    std::span<const double> x, std::span<const double> steps,
                                                    std::span<const double> lower, std::span<const double> upper);

/// Square roots of the diagonal of the inverse of a row-major Hessian.
/// Throws SeUnavailable when the matrix is not positive definite.
[[nodiscard]] std::vector<double> se_from_hessian(std::span<const double> hessian, std::size_t dim);

/// sqrt((1 - theta^2) / n): large-sample se of the MA(1) MLE on a regular grid.
[[nodiscard]] double asymptotic_se_regular(double theta, std::size_t n);

}  // namespace ima
