#include "ima/diagnostics.hpp"

#include "ima/error.hpp"
#include "ima/predict.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ima {

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 1 || n <= max_lag) {
        throw Error(ErrorKind::InvalidInput, "acf needs 1 <= max_lag < length");
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateData, "acf of a constant sequence");

    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - mean) * (x[t + k] - mean);
        rho[k] = s / denom;
    }
    return rho;
}

double chi_square_sf(double x, std::size_t df) {
    if (df < 1) throw Error(ErrorKind::InvalidParameter, "chi-square needs df >= 1");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

std::vector<LjungBoxRow> ljung_box(std::span<const double> x, std::size_t lags) {
    const auto rho = acf(x, lags);
    const double n = static_cast<double>(x.size());
    std::vector<LjungBoxRow> rows;
    rows.reserve(lags);
    double sum = 0.0;
    for (std::size_t h = 1; h <= lags; ++h) {
        sum += rho[h] * rho[h] / (n - static_cast<double>(h));
        const double q = n * (n + 2.0) * sum;
        rows.push_back({h, q, h, chi_square_sf(q, h)});
    }
    return rows;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidParameter, "normal quantile needs 0 < p < 1");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

QqData qq_normal(std::span<const double> x, double band_level) {
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorKind::InsufficientData, "QQ data needs at least 3 points");
    if (!(band_level > 0.0 && band_level < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "band level must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> standard;
    const double z = normal_quantile(0.5 + 0.5 * band_level);
    QqData out;
    out.empirical.assign(x.begin(), x.end());
    std::sort(out.empirical.begin(), out.empirical.end());
    out.theoretical.resize(n);
    out.lower.resize(n);
    out.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double q = boost::math::quantile(standard, p);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / boost::math::pdf(standard, q);
        out.theoretical[i] = q;
        out.lower[i] = q - z * se;
        out.upper[i] = q + z * se;
    }
    return out;
}

MseComparison mse_comparison(const TimeSeries& series, const FitResult& fit_ima, const FitOptions& options) {
    MseComparison out;
    const auto c_ima = c_sequence(fit_ima.theta_hat, series.grid());
    out.mse_ima.resize(c_ima.size());
    for (std::size_t n = 0; n < c_ima.size(); ++n) out.mse_ima[n] = fit_ima.sigma2_hat * c_ima[n];

    const TimeSeries regular(TimeGrid::regular(series.size()),
                             std::vector<double>(series.values().begin(), series.values().end()));
    FitOptions ma_options = options;
    ma_options.compute_se = false;
    out.fit_ma = fit_mle(regular, ma_options);
    const auto c_ma = c_sequence(out.fit_ma.theta_hat, regular.grid());
    out.mse_ma.resize(c_ma.size());
    for (std::size_t n = 0; n < c_ma.size(); ++n) out.mse_ma[n] = out.fit_ma.sigma2_hat * c_ma[n];

    const double count = static_cast<double>(series.size());
    out.mean_ima = std::accumulate(out.mse_ima.begin(), out.mse_ima.end(), 0.0) / count;
    out.mean_ma = std::accumulate(out.mse_ma.begin(), out.mse_ma.end(), 0.0) / count;
    return out;
}

DiagnosticsReport diagnose(const TimeSeries& series, const FitResult& fit, const DiagnosticsOptions& options) {
    DiagnosticsReport report;
    report.fit = fit;
    report.standardized = innovations_predict(fit.params(), series).standardized;
    const std::size_t n = series.size();
    report.acf = acf(report.standardized, std::min(options.max_lag, n - 1));
    report.acf_band = normal_quantile(0.975) / std::sqrt(static_cast<double>(n));
    report.ljung_box = ljung_box(report.standardized, std::min(options.lb_lags, n - 1));
    report.qq = qq_normal(report.standardized, options.band_level);
    report.mse = mse_comparison(series, fit, options.fit);
    return report;
}

}  // namespace ima
