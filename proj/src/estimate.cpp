#include "ima/estimate.hpp"

#include "ima/error.hpp"
#include "ima/predict.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ima {

ReducedLikelihood reduced_likelihood(double theta, const TimeSeries& series, double mu) {
    if (!(theta >= 0.0 && theta <= kThetaMax)) {
        throw Error(ErrorKind::InvalidParameter, "theta must lie in [0, 1), got " + std::to_string(theta));
    }
    const auto sums = innovation_sums(theta, series, mu);
    const double n = static_cast<double>(series.size());
    if (!(sums.weighted_sq > 0.0)) {
        throw Error(ErrorKind::DegenerateData, "all one-step innovations are zero");
    }
    ReducedLikelihood out;
    out.sigma2_hat = sums.weighted_sq / n;
    out.q = std::log(out.sigma2_hat) + sums.log_c / n;
    return out;
}

double log_likelihood(const ImaParams& params, const TimeSeries& series) {
    params.validate();
    const auto sums = innovation_sums(params.theta, series, params.mu);
    const double n = static_cast<double>(series.size());
    return -0.5 * n * std::log(2.0 * std::numbers::pi * params.sigma2) - 0.5 * sums.log_c -
           0.5 * sums.weighted_sq / params.sigma2;
}

MinimizeResult minimize_bounded(const std::function<double(double)>& f, double lo, double hi, double tol,
                                std::size_t max_iter, std::size_t grid_points) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::InvalidParameter, "minimize_bounded needs finite lo < hi");
    }
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
    grid_points = std::max<std::size_t>(grid_points, 3);

    std::size_t evaluations = 0;
    auto eval = [&](double x) {
        ++evaluations;
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NumericalFailure, "objective is not finite at x = " + std::to_string(x));
        }
        return v;
    };

    std::vector<double> xs(grid_points);
    std::vector<double> fs(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        xs[i] = i + 1 == grid_points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        fs[i] = eval(xs[i]);
    }
    const auto best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const double left = xs[best == 0 ? 0 : best - 1];
    const double right = xs[std::min(best + 1, grid_points - 1)];

    const int bits = std::clamp(static_cast<int>(std::ceil(-std::log2(tol))), 4,
                                std::numeric_limits<double>::digits / 2);
    boost::uintmax_t brent_iter = max_iter;
    const auto [x_min, f_min] = boost::math::tools::brent_find_minima(eval, left, right, bits, brent_iter);

    MinimizeResult out{x_min, f_min, evaluations, brent_iter < max_iter};
    // The bracket endpoints are grid nodes; keep whichever evaluated point is lowest.
    if (fs[best] < out.value) {
        out.argmin = xs[best];
        out.value = fs[best];
    }
    out.iterations = evaluations;
    return out;
}

std::vector<double> numerical_hessian(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x, std::span<const double> steps,
                                      std::span<const double> lower, std::span<const double> upper) {
    const std::size_t dim = x.size();
    std::vector<double> centre(x.begin(), x.end());
    for (std::size_t i = 0; i < dim; ++i) {
        if (centre[i] - steps[i] < lower[i]) centre[i] = lower[i] + steps[i];
        if (centre[i] + steps[i] > upper[i]) centre[i] = upper[i] - steps[i];
    }
    auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
        std::vector<double> p = centre;
        p[i] += di;
        p[j] += dj;
        const double v = f(p);
        if (!std::isfinite(v)) throw Error(ErrorKind::SeUnavailable, "objective not finite near the optimum");
        return v;
    };
    const double f0 = at(0, 0.0, 0, 0.0);
    std::vector<double> h(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double hi = steps[i];
        h[i * dim + i] = (at(i, hi, i, 0.0) - 2.0 * f0 + at(i, -hi, i, 0.0)) / (hi * hi);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double hj = steps[j];
            const double v = (at(i, hi, j, hj) - at(i, hi, j, -hj) - at(i, -hi, j, hj) + at(i, -hi, j, -hj)) /
                             (4.0 * hi * hj);
            h[i * dim + j] = v;
            h[j * dim + i] = v;
        }
    }
    return h;
}

std::vector<double> se_from_hessian(std::span<const double> hessian, std::size_t dim) {
    // Cholesky H = L L'; diag(H^{-1})_i = sum_k (L^{-1})_{ki}^2.
    std::vector<double> l(dim * dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        double d = hessian[j * dim + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * dim + k] * l[j * dim + k];
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorKind::SeUnavailable, "Hessian is not positive definite");
        }
        l[j * dim + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < dim; ++i) {
            double s = hessian[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i * dim + k] * l[j * dim + k];
            l[i * dim + j] = s / l[j * dim + j];
        }
    }
    std::vector<double> inv(dim * dim, 0.0);  // lower-triangular L^{-1}
    for (std::size_t col = 0; col < dim; ++col) {
        for (std::size_t i = col; i < dim; ++i) {
            double s = i == col ? 1.0 : 0.0;
            for (std::size_t k = col; k < i; ++k) s -= l[i * dim + k] * inv[k * dim + col];
            inv[i * dim + col] = s / l[i * dim + i];
        }
    }
    std::vector<double> se(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double v = 0.0;
        for (std::size_t k = i; k < dim; ++k) v += inv[k * dim + i] * inv[k * dim + i];
        se[i] = std::sqrt(v);
    }
    return se;
}

StandardErrors observed_information_se(const FitResult& fit, const TimeSeries& series) {
    const double mu = fit.mu;
    auto negloglik = [&](std::span<const double> p) {
        return -log_likelihood(ImaParams{p[0], p[1], mu}, series);
    };
    const double point[2] = {fit.theta_hat, fit.sigma2_hat};
    // eps^(1/4) balances truncation and rounding error of a central second difference.
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    const double steps[2] = {h, h * fit.sigma2_hat};
    const double lower[2] = {0.0, 0.5 * fit.sigma2_hat};
    const double upper[2] = {kThetaMax, std::numeric_limits<double>::infinity()};
    const auto hessian = numerical_hessian(negloglik, point, steps, lower, upper);
    const auto se = se_from_hessian(hessian, 2);
    return {se[0], se[1]};
}

FitResult fit_mle(const TimeSeries& series, const FitOptions& options) {
    if (series.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "at least 3 observations are required, got " +
                                                     std::to_string(series.size()));
    }
    FitResult fit;
    fit.n_obs = series.size();
    fit.mu = options.demean ? series.mean() : options.fixed_mu;

    const auto objective = [&](double theta) { return reduced_likelihood(theta, series, fit.mu).q; };
    const auto opt = minimize_bounded(objective, 0.0, kThetaMax, options.theta_tol, options.max_iter,
                                      options.grid_points);

    fit.theta_hat = std::clamp(opt.argmin, 0.0, kThetaMax);
    const auto profile = reduced_likelihood(fit.theta_hat, series, fit.mu);
    fit.sigma2_hat = profile.sigma2_hat;
    fit.q_value = profile.q;
    fit.iterations = opt.iterations;
    fit.converged = opt.converged;
    fit.boundary_hit = fit.theta_hat < 1e-6 || fit.theta_hat > kThetaMax - 1e-6;
    fit.loglik = log_likelihood(fit.params(), series);
    if (!std::isfinite(fit.loglik)) {
        throw Error(ErrorKind::NumericalFailure, "log-likelihood is not finite at the optimum");
    }

    if (options.compute_se) {
        try {
            const auto se = observed_information_se(fit, series);
            fit.se_theta = se.se_theta;
            fit.se_sigma2 = se.se_sigma2;
            fit.se_reliable = !fit.boundary_hit;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SeUnavailable) throw;
        }
    }
    return fit;
}

double asymptotic_se_regular(double theta, std::size_t n) {
    if (!(theta >= 0.0 && theta < 1.0) || n == 0) {
        throw Error(ErrorKind::InvalidParameter, "need 0 <= theta < 1 and n >= 1");
    }
    return std::sqrt((1.0 - theta * theta) / static_cast<double>(n));
}

}  // namespace ima
