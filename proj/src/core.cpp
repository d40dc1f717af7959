#include "ima/core.hpp"

#include "ima/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace ima {

TimeGrid TimeGrid::from_gaps(std::span<const double> gaps, double origin) {
    if (!std::isfinite(origin)) {
        throw Error(ErrorKind::InvalidTimes, "non-finite origin");
    }
    double min_gap = 1.0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        if (!std::isfinite(gaps[k]) || !(gaps[k] > 0.0)) {
            throw Error(ErrorKind::InvalidTimes,
                        "gap " + std::to_string(k + 1) + " is not a finite positive number");
        }
        min_gap = std::min(min_gap, gaps[k]);
    }
    // Division is monotone under round-to-nearest, so every rescaled gap is >= min/min = 1.
    const double scale = min_gap < 1.0 ? min_gap : 1.0;
    std::vector<double> scaled(gaps.begin(), gaps.end());
    std::vector<double> times(gaps.size() + 1);
    times[0] = origin / scale;
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        scaled[k] /= scale;
        times[k + 1] = times[k] + scaled[k];
    }
    return TimeGrid(std::move(times), std::move(scaled), scale);
}

TimeGrid TimeGrid::from_times(std::span<const double> times) {
    if (times.empty()) {
        throw Error(ErrorKind::InvalidTimes, "at least one observation time is required");
    }
    std::vector<double> gaps(times.size() - 1);
    double min_gap = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) {
            throw Error(ErrorKind::InvalidTimes, "time " + std::to_string(i + 1) + " is not finite");
        }
        if (i > 0) {
            const double gap = times[i] - times[i - 1];
            if (!(gap > 0.0) || !std::isfinite(gap)) {
                throw Error(ErrorKind::InvalidTimes,
                            "times must be strictly increasing (observation " + std::to_string(i + 1) + ")");
            }
            gaps[i - 1] = gap;
            min_gap = std::min(min_gap, gap);
        }
    }
    const double scale = min_gap < 1.0 ? min_gap : 1.0;
    std::vector<double> scaled_times(times.begin(), times.end());
    if (scale != 1.0) {
        for (auto& t : scaled_times) t /= scale;
        for (auto& g : gaps) g /= scale;
    }
    return TimeGrid(std::move(scaled_times), std::move(gaps), scale);
}

TimeGrid TimeGrid::regular(std::size_t n) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidTimes, "at least one observation time is required");
    }
    std::vector<double> times(n);
    std::iota(times.begin(), times.end(), 0.0);
    return TimeGrid(std::move(times), std::vector<double>(n - 1, 1.0), 1.0);
}

bool TimeGrid::is_regular() const noexcept {
    return std::all_of(gaps_.begin(), gaps_.end(), [&](double g) { return g == gaps_.front(); });
}

TimeGrid gap_sequence(std::span<const double> times) { return TimeGrid::from_times(times); }

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error(ErrorKind::InvalidInput, "series has " + std::to_string(values_.size()) +
                                                 " values for " + std::to_string(grid_.size()) + " times");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvalidInput, "value " + std::to_string(i + 1) + " is not finite");
        }
    }
}

double TimeSeries::mean() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

ImaParams ImaParams::make(double theta, double sigma2, double mu) {
    ImaParams p{theta, sigma2, mu};
    p.validate();
    return p;
}

void ImaParams::validate() const {
    if (!(theta >= 0.0 && theta <= kThetaMax)) {
        throw Error(ErrorKind::InvalidParameter, "theta must lie in [0, 1), got " + std::to_string(theta));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw Error(ErrorKind::InvalidParameter, "sigma2 must be positive, got " + std::to_string(sigma2));
    }
    if (!std::isfinite(mu)) {
        throw Error(ErrorKind::InvalidParameter, "mu must be finite");
    }
}

InnovationDist InnovationDist::student_t(double nu) {
    if (!(nu > 2.0) || !std::isfinite(nu)) {
        throw Error(ErrorKind::InvalidParameter, "Student-t shape must exceed 2 for unit variance");
    }
    return InnovationDist(Kind::StudentT, nu);
}

InnovationDist InnovationDist::ged(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw Error(ErrorKind::InvalidParameter, "GED shape must be positive");
    }
    return InnovationDist(Kind::Ged, nu);
}

namespace {

// Draws n standardized innovations, constructing the underlying law once.
std::vector<double> draw_standardized(const InnovationDist& dist, std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    switch (dist.kind()) {
        case InnovationDist::Kind::Gaussian: {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (auto& z : out) z = normal(rng);
            break;
        }
        case InnovationDist::Kind::StudentT: {
            const double nu = dist.shape();
            const double scale = std::sqrt((nu - 2.0) / nu);
            std::student_t_distribution<double> t(nu);
            for (auto& z : out) z = t(rng) * scale;
            break;
        }
        case InnovationDist::Kind::Ged: {
            // |x / lambda| = (2 G)^(1/nu) with G ~ Gamma(1/nu, 1); symmetric sign.
            const double nu = dist.shape();
            const double lambda =
                std::sqrt(std::exp2(-2.0 / nu) * std::exp(std::lgamma(1.0 / nu) - std::lgamma(3.0 / nu)));
            std::gamma_distribution<double> gamma(1.0 / nu, 1.0);
            std::bernoulli_distribution sign(0.5);
            for (auto& z : out) {
                const double magnitude = lambda * std::pow(2.0 * gamma(rng), 1.0 / nu);
                z = sign(rng) ? magnitude : -magnitude;
            }
            break;
        }
    }
    return out;
}

}  // namespace

double InnovationDist::sample(Rng& rng) const { return draw_standardized(*this, 1, rng).front(); }

double theta_power(double theta, double delta) noexcept {
    return theta == 0.0 ? 0.0 : std::exp(delta * std::log(theta));
}

std::vector<double> c_sequence(double theta, std::span<const double> gaps) {
    if (!(theta >= 0.0 && theta <= kThetaMax)) {
        throw Error(ErrorKind::InvalidParameter, "theta must lie in [0, 1), got " + std::to_string(theta));
    }
    std::vector<double> c(gaps.size() + 1, 1.0);
    if (theta == 0.0) return c;
    const double log_theta = std::log(theta);
    const double theta2 = theta * theta;
    double excess = theta2;
    c[0] = 1.0 + excess;
    for (std::size_t n = 1; n < c.size(); ++n) {
        excess = c_excess_next(theta2, log_theta, gaps[n - 1], excess);
        c[n] = 1.0 + excess;
    }
    return c;
}

std::vector<double> c_sequence(double theta, const TimeGrid& grid) { return c_sequence(theta, grid.gaps()); }

double autocovariance(const ImaParams& params, std::optional<double> lag_gap) {
    params.validate();
    if (!lag_gap) return params.sigma2 * (1.0 + params.theta * params.theta);
    if (!(*lag_gap >= 1.0) || !std::isfinite(*lag_gap)) {
        throw Error(ErrorKind::InvalidGap, "lag gap must be at least 1");
    }
    return params.sigma2 * theta_power(params.theta, *lag_gap);
}

SymTridiagonal covariance_matrix(const ImaParams& params, const TimeGrid& grid) {
    params.validate();
    SymTridiagonal m;
    m.diag.assign(grid.size(), params.sigma2 * (1.0 + params.theta * params.theta));
    m.off.reserve(grid.gaps().size());
    for (double gap : grid.gaps()) m.off.push_back(params.sigma2 * theta_power(params.theta, gap));
    return m;
}

TimeSeries simulate(const ImaParams& params, const TimeGrid& grid, const InnovationDist& dist, Rng& rng) {
    params.validate();
    const auto c = c_sequence(params.theta, grid);
    const auto gaps = grid.gaps();
    const auto zeta = draw_standardized(dist, grid.size(), rng);
    const double sigma = std::sqrt(params.sigma2);

    std::vector<double> x(grid.size());
    double eps_prev = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double eps = sigma * std::sqrt(c[n]) * zeta[n];
        x[n] = params.mu + eps;
        if (n > 0) x[n] += theta_power(params.theta, gaps[n - 1]) / c[n - 1] * eps_prev;
        eps_prev = eps;
    }
    return TimeSeries(grid, std::move(x));
}

TimeSeries simulate(const ImaParams& params, const TimeGrid& grid, const InnovationDist& dist,
                    std::uint64_t seed) {
    Rng rng(seed, 0);
    return simulate(params, grid, dist, rng);
}

TimeGrid sample_gaps_shifted_exp(std::size_t n, double rate, Rng& rng) {
    if (n == 0) throw Error(ErrorKind::InvalidParameter, "n must be at least 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::InvalidParameter, "rate must be positive");
    std::exponential_distribution<double> exponential(rate);
    std::vector<double> gaps(n - 1);
    for (auto& g : gaps) g = 1.0 + exponential(rng);
    return TimeGrid::from_gaps(gaps);
}

TimeGrid sample_gaps_shifted_exp(std::size_t n, double rate, std::uint64_t seed) {
    Rng rng(seed, 0);
    return sample_gaps_shifted_exp(n, rate, rng);
}

TimeGrid sample_gaps_exp_mixture(std::size_t n, const ExpMixture& mix, Rng& rng) {
    if (n == 0) throw Error(ErrorKind::InvalidParameter, "n must be at least 1");
    if (!(mix.mean1 > 0.0) || !(mix.mean2 > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "mixture means must be positive");
    }
    if (!(mix.weight1 >= 0.0) || !(mix.weight2 >= 0.0) || std::abs(mix.weight1 + mix.weight2 - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidParameter, "mixture weights must be non-negative and sum to 1");
    }
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    std::exponential_distribution<double> first(1.0 / mix.mean1);
    std::exponential_distribution<double> second(1.0 / mix.mean2);
    std::vector<double> gaps(n - 1);
    for (auto& g : gaps) {
        do {
            g = pick(rng) < mix.weight1 ? first(rng) : second(rng);
        } while (!(g > 0.0));
    }
    return TimeGrid::from_gaps(gaps);
}

TimeGrid sample_gaps_exp_mixture(std::size_t n, const ExpMixture& mixture, std::uint64_t seed) {
    Rng rng(seed, 0);
    return sample_gaps_exp_mixture(n, mixture, rng);
}

}  // namespace ima
