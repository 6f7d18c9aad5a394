#include "admatch/design.hpp"
#include "admatch/errors.hpp"
#include "admatch/logistic.hpp"
#include "admatch/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace admatch;

namespace {

DesignMatrix intercept_only(std::size_t n) {
    return make_design_matrix(Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 1),
                              {"intercept"});
}

DesignMatrix with_covariate(const std::vector<double>& x) {
    Eigen::MatrixXd values(static_cast<Eigen::Index>(x.size()), 2);
    values.col(0) = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) values(static_cast<Eigen::Index>(i), 1) = x[i];
    return make_design_matrix(values, {"intercept", "x"});
}

double logit(double p) { return std::log(p / (1.0 - p)); }

} // namespace

TEST_CASE("intercept-only fit recovers the logit of the treated share") {
    std::vector<int> w(1000, 0);
    for (int i = 0; i < 557; ++i) w[i] = 1;
    const auto fit = fit_logistic_irls(w, intercept_only(1000));
    CHECK(fit.converged);
    CHECK(std::abs(fit.beta[0] - logit(0.557)) < 1e-6);
    CHECK(fit.beta[0] == doctest::Approx(0.2290).epsilon(1e-3));
    for (double e : fit.e_hat) CHECK(e == doctest::Approx(0.557).epsilon(1e-6));
}

TEST_CASE("null covariate slope stays within three standard errors") {
    int within = 0;
    const int n_seeds = 40;
    for (int seed = 0; seed < n_seeds; ++seed) {
        std::mt19937 rng(1000 + seed);
        std::bernoulli_distribution coin(0.5);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t n = 400;
        std::vector<int> w(n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = coin(rng) ? 1 : 0;
            x[i] = gauss(rng);
        }
        const auto design = with_covariate(x);
        const auto fit = fit_logistic_irls(w, design);
        REQUIRE(fit.converged);
        // independent standard error from the information matrix
        Eigen::MatrixXd info = Eigen::MatrixXd::Zero(2, 2);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = fit.e_hat[i] * (1.0 - fit.e_hat[i]);
            info += v * design.values.row(static_cast<Eigen::Index>(i)).transpose() *
                    design.values.row(static_cast<Eigen::Index>(i));
        }
        const double se = std::sqrt(info.inverse()(1, 1));
        if (std::abs(fit.beta[1]) < 3.0 * se) ++within;
    }
    CHECK(within >= n_seeds - 2); // 3 SE covers ~99.7%
}

TEST_CASE("perfect separation is detected and flagged") {
    std::vector<int> w(60);
    std::vector<double> x(60);
    for (int i = 0; i < 60; ++i) {
        w[i] = i < 30 ? 0 : 1;
        x[i] = i < 30 ? 0.01 * i : 0.301 + 0.01 * (i - 30);
    }
    const auto fit = fit_logistic_irls(w, with_covariate(x));
    CHECK_FALSE(fit.converged);
    CHECK_FALSE(fit.warning.empty());
}

TEST_CASE("accepted deviance trace is non-increasing") {
    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.5);
    std::bernoulli_distribution noise(0.15);
    const std::size_t n = 300;
    std::vector<int> w(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        const double p = 1.0 / (1.0 + std::exp(-(0.3 + 1.2 * x[i])));
        w[i] = (std::bernoulli_distribution(p)(rng)) ? 1 : 0;
        if (noise(rng)) w[i] = 1 - w[i];
    }
    const auto fit = fit_logistic_irls(w, with_covariate(x));
    REQUIRE(fit.converged);
    for (std::size_t k = 1; k < fit.deviance_trace.size(); ++k) {
        CHECK(fit.deviance_trace[k] <= fit.deviance_trace[k - 1] + 1e-9);
    }
}

TEST_CASE("score equation holds at convergence") {
    std::mt19937 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 500;
    std::vector<int> w(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        const double p = 1.0 / (1.0 + std::exp(-(0.5 * x[i] - 0.2)));
        w[i] = std::bernoulli_distribution(p)(rng) ? 1 : 0;
    }
    const auto design = with_covariate(x);
    const auto fit = fit_logistic_irls(w, design);
    REQUIRE(fit.converged);
    Eigen::VectorXd score = Eigen::VectorXd::Zero(2);
    for (std::size_t i = 0; i < n; ++i) {
        score += (w[i] - fit.e_hat[i]) * design.values.row(static_cast<Eigen::Index>(i)).transpose();
    }
    CHECK(score.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("fitted scores separate the groups when the model has signal") {
    std::mt19937 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 600;
    std::vector<int> w(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        const double p = 1.0 / (1.0 + std::exp(-x[i]));
        w[i] = std::bernoulli_distribution(p)(rng) ? 1 : 0;
    }
    const auto fit = fit_logistic_irls(w, with_covariate(x));
    REQUIRE(fit.converged);
    double mean_t = 0.0, mean_c = 0.0;
    int n_t = 0, n_c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i]) {
            mean_t += fit.e_hat[i];
            ++n_t;
        } else {
            mean_c += fit.e_hat[i];
            ++n_c;
        }
    }
    CHECK(mean_t / n_t >= mean_c / n_c);
}

TEST_CASE("fit preconditions") {
    std::vector<int> all_ones(10, 1);
    CHECK_THROWS_AS(fit_logistic_irls(all_ones, intercept_only(10)), ValidationError);
    std::vector<int> all_zero(10, 0);
    CHECK_THROWS_AS(fit_logistic_irls(all_zero, intercept_only(10)), ValidationError);
}

TEST_CASE("predict_propensity inverts the link and checks alignment") {
    std::vector<int> w = {0, 1, 0, 1};
    const auto design = intercept_only(4);
    auto fit = fit_logistic_irls(w, design);
    fit.beta[0] = 0.0;
    const auto half = predict_propensity(fit, design);
    for (double e : half) CHECK(e == doctest::Approx(0.5));

    fit.beta[0] = 0.2290;
    const auto p = predict_propensity(fit, design);
    CHECK(p[0] == doctest::Approx(0.557).epsilon(1e-4));

    // monotone: raising a coefficient on a positive column raises scores
    fit.beta[0] = 0.5;
    const auto higher = predict_propensity(fit, design);
    for (std::size_t i = 0; i < half.size(); ++i) CHECK(higher[i] > p[i]);

    DesignMatrix renamed = design;
    renamed.names = {"other"};
    CHECK_THROWS_AS(predict_propensity(fit, renamed), ValidationError);
}

TEST_CASE("scores stay strictly inside the unit interval") {
    std::vector<int> w(40);
    std::vector<double> x(40);
    for (int i = 0; i < 40; ++i) {
        w[i] = i < 20 ? 0 : 1;
        x[i] = i < 20 ? -2.0 - i * 0.05 : 2.0 + i * 0.05;
    }
    const auto fit = fit_logistic_irls(w, with_covariate(x)); // separates
    for (double e : fit.e_hat) {
        CHECK(e >= kScoreClamp);
        CHECK(e <= 1.0 - kScoreClamp);
    }
}
