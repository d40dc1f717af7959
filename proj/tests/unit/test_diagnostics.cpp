#include "ima/diagnostics.hpp"
#include "ima/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace ima;
using doctest::Approx;

TEST_CASE("sample ACF") {
    std::vector<double> alt;
    for (int i = 0; i < 100; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
    const auto r = acf(alt, 3);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == Approx(-0.99));
    CHECK(r[2] == Approx(0.98));

    const auto s = simulate({0.0, 1.0, 0.0}, TimeGrid::regular(2000), InnovationDist::gaussian(), 1);
    const auto w = acf(s.values(), 5);
    CHECK(w[0] == 1.0);
    CHECK(std::abs(w[1]) < 3.0 / std::sqrt(2000.0));
}

TEST_CASE("chi-square survival function") {
    CHECK(chi_square_sf(0.0, 3) == 1.0);
    CHECK(chi_square_sf(2.0, 2) == Approx(0.36787944117144232).epsilon(1e-13));
    CHECK(chi_square_sf(3.8415, 1) == Approx(0.049998772071222324).epsilon(1e-10));
}

TEST_CASE("Ljung-Box statistic") {
    // A series whose ACF is (1, 0.3, 0, ...) is awkward to build, so check the formula
    // through a constructed ACF: Q = N (N + 2) rho_1^2 / (N - 1).
    const double q = 100.0 * 102.0 * 0.09 / 99.0;
    CHECK(q == Approx(9.2727272727272727));
    CHECK(chi_square_sf(q, 1) == Approx(0.002325911130774011).epsilon(1e-10));

    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.7 * static_cast<double>(i)) + 0.01 * (i % 7);
    const auto rows = ljung_box(x, 4);
    const auto r = acf(x, 4);
    double manual = 0.0;
    for (std::size_t k = 1; k <= 4; ++k) {
        manual += r[k] * r[k] / (200.0 - static_cast<double>(k));
        CHECK(rows[k - 1].lag == k);
        CHECK(rows[k - 1].q == Approx(200.0 * 202.0 * manual).epsilon(1e-12));
        CHECK(rows[k - 1].p_value == Approx(chi_square_sf(rows[k - 1].q, k)));
    }
}

TEST_CASE("normal QQ data") {
    const std::vector<double> x{1.0, -1.0, 0.0};
    const auto qq = qq_normal(x);
    CHECK(qq.theoretical[0] == Approx(-0.967421566101701).epsilon(1e-12));
    CHECK(qq.theoretical[1] == Approx(0.0));
    CHECK(qq.theoretical[2] == Approx(0.967421566101701).epsilon(1e-12));
    CHECK(qq.empirical == std::vector<double>{-1.0, 0.0, 1.0});

    std::vector<double> big;
    for (int i = 0; i < 99; ++i) big.push_back(normal_quantile((i + 0.5) / 99.0));
    const auto wide = qq_normal(big);
    CHECK(wide.upper.front() - wide.lower.front() > wide.upper[49] - wide.lower[49]);
    for (std::size_t i = 0; i < wide.theoretical.size(); ++i) {
        CHECK(wide.lower[i] < wide.theoretical[i]);
        CHECK(wide.theoretical[i] < wide.upper[i]);
    }
}

TEST_CASE("MSE comparison") {
    SUBCASE("regular grid sequences coincide") {
        const auto s = simulate({0.5, 1.0, 0.0}, TimeGrid::regular(300), InnovationDist::gaussian(), 4);
        const auto fit = fit_mle(s);
        const auto m = mse_comparison(s, fit);
        for (std::size_t n = 0; n < s.size(); ++n) CHECK(std::abs(m.mse_ima[n] - m.mse_ma[n]) < 1e-9);
    }
    SUBCASE("irregular grid stays inside the c_n band") {
        const auto s = simulate({0.7, 1.0, 0.0}, sample_gaps_shifted_exp(300, 0.5, 5), InnovationDist::gaussian(), 6);
        const auto fit = fit_mle(s);
        const auto m = mse_comparison(s, fit);
        const double t2 = fit.theta_hat * fit.theta_hat;
        for (double v : m.mse_ima) {
            CHECK(v >= fit.sigma2_hat * (1 - 1e-12));
            CHECK(v <= fit.sigma2_hat * (1 + t2) * (1 + 1e-12));
        }
    }
}

TEST_CASE("diagnose report") {
    const auto s = simulate({0.5, 1.0, 0.0}, sample_gaps_shifted_exp(300, 1.0, 7), InnovationDist::gaussian(), 8);
    const auto fit = fit_mle(s);
    DiagnosticsOptions opt;
    opt.max_lag = 15;
    opt.lb_lags = 10;
    const auto rep = diagnose(s, fit, opt);
    CHECK(rep.acf.size() == 16);
    CHECK(rep.ljung_box.size() == 10);
    CHECK(rep.standardized.size() == s.size());
    CHECK(rep.acf_band == Approx(1.959963984540054 / std::sqrt(300.0)));
    CHECK(rep.qq.theoretical.size() == s.size());
}
