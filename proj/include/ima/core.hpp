#pragma once

#include "ima/rng.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ima {

/// Largest admissible theta; the open bound theta < 1 is closed off here.
inline constexpr double kThetaMax = 1.0 - 1e-8;

/// Strictly increasing observation times with gaps rescaled so that min gap >= 1.
///
/// `scale()` is the factor the input times were divided by (1 when no
/// rescaling was needed); original units are `times()[i] * scale()`.
class TimeGrid {
public:
    /// Builds a grid from observation times. Throws InvalidTimes.
    static TimeGrid from_times(std::span<const double> times);
    /// Builds a grid starting at `origin` from consecutive gaps. Throws InvalidTimes.
    static TimeGrid from_gaps(std::span<const double> gaps, double origin = 0.0);
    /// Unit-spaced grid 0, 1, ..., n-1.
    static TimeGrid regular(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    /// gaps()[k] is the gap preceding observation k+1 (0-based), length size()-1.
    [[nodiscard]] std::span<const double> gaps() const noexcept { return gaps_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] bool is_regular() const noexcept;

private:
    TimeGrid(std::vector<double> times, std::vector<double> gaps, double scale)
        : times_(std::move(times)), gaps_(std::move(gaps)), scale_(scale) {}

    std::vector<double> times_;
    std::vector<double> gaps_;
    double scale_ = 1.0;
};

/// Same as `TimeGrid::from_times`.
[[nodiscard]] TimeGrid gap_sequence(std::span<const double> times);

class TimeSeries {
public:
    /// Throws InvalidInput on length mismatch or non-finite values.
    TimeSeries(TimeGrid grid, std::vector<double> values);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double mean() const noexcept;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

struct ImaParams {
    double theta = 0.0;
    double sigma2 = 1.0;
    double mu = 0.0;

    /// Validating constructor: 0 <= theta <= kThetaMax, sigma2 > 0, finite mu.
    static ImaParams make(double theta, double sigma2, double mu = 0.0);
    void validate() const;
};

/// Unit-variance, zero-mean innovation law used by the constructionist simulator.
class InnovationDist {
public:
    enum class Kind { Gaussian, StudentT, Ged };

    static InnovationDist gaussian() { return InnovationDist(Kind::Gaussian, 0.0); }
    /// Standardized Student-t, nu > 2.
    static InnovationDist student_t(double nu);
    /// Standardized generalized error distribution, nu > 0.
    static InnovationDist ged(double nu);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double shape() const noexcept { return shape_; }

    double sample(Rng& rng) const;

private:
    InnovationDist(Kind kind, double shape) : kind_(kind), shape_(shape) {}

    Kind kind_;
    double shape_;
};

/// theta^delta with the theta = 0 case pinned to 0.
[[nodiscard]] double theta_power(double theta, double delta) noexcept;

/// One step of the c_n recursion carried on the excess d_n = c_n - 1:
/// d_n = theta^2 (d_{n-1} + 1 - theta^(2 (gap - 1))) / (1 + d_{n-1}).
/// Every term is non-negative, so d_n >= 0 holds under rounding as well.
[[nodiscard]] inline double c_excess_next(double theta2, double log_theta, double gap, double excess) noexcept {
    const double shortfall = -std::expm1(2.0 * (gap - 1.0) * log_theta);
    return theta2 * (excess + shortfall) / (1.0 + excess);
}

/// c_1 = 1 + theta^2, c_n = 1 + theta^2 - theta^(2 gap_n) / c_{n-1}.
[[nodiscard]] std::vector<double> c_sequence(double theta, const TimeGrid& grid);
[[nodiscard]] std::vector<double> c_sequence(double theta, std::span<const double> gaps);

/// gamma_0 when `lag_gap` is empty, sigma2 * theta^gap otherwise. Throws InvalidGap for gap < 1.
[[nodiscard]] double autocovariance(const ImaParams& params, std::optional<double> lag_gap = std::nullopt);

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  ///< off[k] couples rows k and k+1

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
};

[[nodiscard]] SymTridiagonal covariance_matrix(const ImaParams& params, const TimeGrid& grid);

/// Exact draw of the process through its constructionist recursion.
[[nodiscard]] TimeSeries simulate(const ImaParams& params, const TimeGrid& grid, const InnovationDist& dist,
                                  Rng& rng);
[[nodiscard]] TimeSeries simulate(const ImaParams& params, const TimeGrid& grid, const InnovationDist& dist,
                                  std::uint64_t seed);

/// t_1 = 0 and gaps i.i.d. 1 + Exponential(rate).
[[nodiscard]] TimeGrid sample_gaps_shifted_exp(std::size_t n, double rate, Rng& rng);
[[nodiscard]] TimeGrid sample_gaps_shifted_exp(std::size_t n, double rate, std::uint64_t seed);

struct ExpMixture {
    double mean1 = 130.0;
    double mean2 = 6.5;
    double weight1 = 0.15;
    double weight2 = 0.85;
};

/// Gaps from a two-component exponential mixture, then rescaled so the smallest gap is 1.
[[nodiscard]] TimeGrid sample_gaps_exp_mixture(std::size_t n, const ExpMixture& mixture, Rng& rng);
[[nodiscard]] TimeGrid sample_gaps_exp_mixture(std::size_t n, const ExpMixture& mixture, std::uint64_t seed);

}  // namespace ima
