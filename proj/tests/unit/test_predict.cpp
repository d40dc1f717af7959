#include "ima/error.hpp"
#include "ima/predict.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ima;
using doctest::Approx;
using ima::testing::rel_err;

namespace {

TimeSeries make_series(std::vector<double> times, std::vector<double> x) {
    return TimeSeries(TimeGrid::from_times(times), std::move(x));
}

}  // namespace

TEST_CASE("hand-evaluated predictor steps") {
    const auto s = make_series({0, 1, 2}, {1.0, -0.5, 2.0});
    const auto out = innovations_predict({0.5, 1.0, 0.0}, s);
    CHECK(out.predictors[0] == 0.0);
    CHECK(out.mse[0] == Approx(1.25));
    CHECK(out.predictors[1] == Approx(0.5 / 1.25 * 1.0));
    CHECK(out.mse[1] == Approx(1.05));

    const auto single = innovations_predict({0.3, 2.0, 1.5}, make_series({0}, {4.0}));
    CHECK(single.predictors[0] == 1.5);
    CHECK(single.mse[0] == Approx(2.0 * 1.09));

    const auto irregular = make_series({0, 2.5}, {1.3, 0.2});
    const auto two = innovations_predict({0.6, 1.0, 0.0}, irregular);
    CHECK(two.predictors[1] == Approx(std::pow(0.6, 2.5) / 1.36 * 1.3));
    CHECK(two.standardized[1] ==
          Approx((0.2 - std::pow(0.6, 2.5) / 1.36 * 1.3) / std::sqrt(1.36 - std::pow(0.6, 5.0) / 1.36)));
}

TEST_CASE("theta = 0 predicts the mean") {
    const auto s = make_series({0, 1, 4, 6}, {1, 2, 3, 4});
    const auto out = innovations_predict({0.0, 2.0, 0.7}, s);
    for (std::size_t n = 0; n < s.size(); ++n) {
        CHECK(out.predictors[n] == 0.7);
        CHECK(out.mse[n] == 2.0);
    }
    const auto ss = state_space_filter({0.0, 2.0, 0.7}, s);
    for (double p : ss.predictors) CHECK(p == 0.7);
    const auto e = residual_expansion({0.0, 2.0, 0.7}, s);
    for (std::size_t n = 0; n < s.size(); ++n) CHECK(e[n] == Approx(s.values()[n] - 0.7));
}

TEST_CASE("innovations algorithm") {
    const std::vector<double> zeros(4, 0.0);
    const auto flat = innovations_algorithm_general(2.0, zeros);
    for (double v : flat.upsilon) CHECK(v == 2.0);
    for (double t : flat.theta_n1) CHECK(t == 0.0);

    const std::vector<double> half{0.5};
    CHECK(innovations_algorithm_general(1.0, half).upsilon[1] == Approx(0.75));

    const std::vector<double> gaps{1.0, 2.5, 1.0, 7.0};
    const double theta = 0.8;
    std::vector<double> gamma1;
    for (double d : gaps) gamma1.push_back(1.7 * std::pow(theta, d));
    const auto coeff = innovations_algorithm_general(1.7 * (1 + theta * theta), gamma1);
    const auto c = c_sequence(theta, gaps);
    for (std::size_t n = 0; n < c.size(); ++n) CHECK(std::abs(coeff.upsilon[n] / 1.7 - c[n]) < 1e-12);

    const std::vector<double> too_big{0.6};
    CHECK_THROWS_AS((void)innovations_algorithm_general(1.0, too_big), Error);
}

TEST_CASE("predictors agree with dense and alternative forms") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    const double thetas[] = {0.0, 0.1, 0.5, 0.9, 0.99};
    for (int rep = 0; rep < 60; ++rep) {
        const auto s = ima::testing::random_instance(gen, size(gen), 6.0);
        const ImaParams p{thetas[rep % 5], 0.5 + 0.1 * rep, 0.3};
        const auto fast = innovations_predict(p, s);
        const auto dense = ima::testing::dense_predict(p, s);
        const auto direct = direct_predict_oracle(p, s);
        const auto ss = state_space_filter(p, s);
        const auto expansion = residual_expansion(p, s);
        for (std::size_t n = 0; n < s.size(); ++n) {
            CHECK(rel_err(fast.predictors[n], dense.predictors[n]) < 1e-10);
            CHECK(rel_err(fast.mse[n], dense.mse[n]) < 1e-10);
            CHECK(rel_err(fast.predictors[n], direct.predictors[n]) < 1e-10);
            CHECK(rel_err(fast.mse[n], direct.mse[n]) < 1e-10);
            CHECK(std::abs(fast.predictors[n] - ss.predictors[n]) <= 1e-14 * std::max(1.0, std::abs(ss.predictors[n])));
            CHECK(rel_err(fast.innovations[n], expansion[n]) < 1e-9);
        }
    }
}

TEST_CASE("direct oracle size cap") {
    const auto s = TimeSeries(TimeGrid::regular(20), std::vector<double>(20, 1.0));
    CHECK_THROWS_AS((void)direct_predict_oracle({0.5, 1.0, 0.0}, s, 10), Error);
}

TEST_CASE("innovation sums match the predictor output") {
    std::mt19937_64 gen(5);
    const auto s = ima::testing::random_instance(gen, 40, 3.0);
    const auto out = innovations_predict({0.45, 1.0, 0.2}, s);
    const auto sums = innovation_sums(0.45, s, 0.2);
    double wsq = 0.0;
    double logc = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        wsq += out.innovations[n] * out.innovations[n] / out.mse[n];
        logc += std::log(out.mse[n]);
    }
    CHECK(sums.weighted_sq == Approx(wsq).epsilon(1e-12));
    CHECK(sums.log_c == Approx(logc).epsilon(1e-12));
}
