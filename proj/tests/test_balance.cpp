#include "admatch/balance.hpp"
#include "admatch/errors.hpp"
#include "admatch/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace admatch;

namespace {

MatchMap self_inverse_map(std::size_t n_treated) {
    // treated days 0..n-1 matched 1:1 onto controls n..2n-1
    MatchMap m;
    m.k.assign(2 * n_treated, 0);
    for (std::size_t i = 0; i < n_treated; ++i) {
        m.pairs.emplace(i, n_treated + i);
        m.k[n_treated + i] = 1;
    }
    return m;
}

} // namespace

TEST_CASE("pre-matching standardized difference") {
    SUBCASE("hand-computed value") {
        const std::vector<double> x = {1, 2, 3, 0, 1, 2};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        const auto d = std_diff_pre(x, w);
        REQUIRE(d.has_value());
        CHECK(*d == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identical groups give zero") {
        const std::vector<double> x = {4, 5, 6, 4, 5, 6};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        CHECK(*std_diff_pre(x, w) == doctest::Approx(0.0));
    }
    SUBCASE("antisymmetric under group swap") {
        const std::vector<double> x = {1.2, 3.4, 0.5, 2.2, 0.9, 1.7};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        std::vector<int> flipped(w.size());
        std::transform(w.begin(), w.end(), flipped.begin(), [](int v) { return 1 - v; });
        CHECK(*std_diff_pre(x, w) == doctest::Approx(-*std_diff_pre(x, flipped)));
    }
    SUBCASE("zero pooled variance is flagged undefined") {
        const std::vector<double> x = {2, 2, 2, 2};
        const std::vector<int> w = {1, 1, 0, 0};
        CHECK_FALSE(std_diff_pre(x, w).has_value());
    }
}

TEST_CASE("post-matching standardized difference") {
    SUBCASE("perfect matching gives zero") {
        const std::vector<double> x = {1, 2, 3, 1, 2, 3};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        MatchMap m;
        m.k.assign(6, 0);
        m.pairs = {{0, 3}, {1, 4}, {2, 5}};
        m.k[3] = m.k[4] = m.k[5] = 1;
        CHECK(*std_diff_post(x, w, m) == doctest::Approx(0.0));
    }
    SUBCASE("matched multiset equal to the control set reduces to the pre value") {
        const std::vector<double> x = {1.5, 2.5, 4.0, 0.5, 1.0, 3.0};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        const auto m = self_inverse_map(3);
        CHECK(*std_diff_post(x, w, m) == doctest::Approx(*std_diff_pre(x, w)).epsilon(1e-12));
    }
    SUBCASE("multiplicity weights the matched mean") {
        const std::vector<double> x = {10, 20, 3, 7};
        const std::vector<int> w = {1, 1, 0, 0};
        MatchMap m;
        m.k.assign(4, 0);
        m.pairs = {{0, 2}, {1, 2}}; // control day 2 used twice
        m.k[2] = 2;
        const double denom =
            std::sqrt((stats::sample_variance({10, 20}) + stats::sample_variance({3, 7})) / 2.0);
        CHECK(*std_diff_post(x, w, m) == doctest::Approx((15.0 - 3.0) / denom));
    }
}

TEST_CASE("percent bias reduction") {
    CHECK(*pct_bias(1.810, 0.0) == doctest::Approx(100.0));
    CHECK(*pct_bias(0.7, 0.7) == doctest::Approx(0.0));
    CHECK(*pct_bias(0.914, 0.013) == doctest::Approx(98.5).epsilon(0.0016)); // displays as 98.5
    CHECK(std::abs(*pct_bias(0.914, 0.013) - 98.6) < 0.05);
    CHECK(*pct_bias(0.456, 0.014) == doctest::Approx(96.9).epsilon(0.001));
    CHECK_FALSE(pct_bias(0.0, 0.5).has_value());
    // sign preserved when matching worsens balance
    CHECK(*pct_bias(0.2, 0.4) == doctest::Approx(-100.0));
}

TEST_CASE("welch test") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    SUBCASE("identical samples give p = 1") {
        CHECK(stats::welch_t_pvalue(a, a) == doctest::Approx(1.0));
    }
    SUBCASE("clearly separated samples give a tiny p") {
        const std::vector<double> zeros = {0, 0, 0, 0};
        const std::vector<double> tens = {10.0001, 9.9999, 10.0002, 9.9998};
        CHECK(stats::welch_t_pvalue(zeros, tens) < 1e-4);
    }
    SUBCASE("invariant under common affine maps") {
        const std::vector<double> b = {2.5, 0.5, 1.5, 5.0, 3.5};
        const double p = stats::welch_t_pvalue(a, b);
        auto scale = [](std::vector<double> v) {
            for (auto& x : v) x = 3.7 * x - 11.0;
            return v;
        };
        CHECK(stats::welch_t_pvalue(scale(a), scale(b)) == doctest::Approx(p).epsilon(1e-12));
    }
    SUBCASE("needs two observations per group") {
        CHECK_THROWS_AS(stats::welch_t_pvalue({1.0}, a), ValidationError);
    }
}

TEST_CASE("two-proportion test") {
    CHECK(stats::two_prop_pvalue(5, 50, 10, 100) == doctest::Approx(1.0));
    CHECK(stats::two_prop_pvalue(128, 1000, 9, 1000) < 1e-6);
    CHECK(stats::two_prop_pvalue(12, 80, 33, 90) ==
          doctest::Approx(stats::two_prop_pvalue(33, 90, 12, 80)));
    CHECK(stats::two_prop_pvalue(0, 10, 0, 20) == doctest::Approx(1.0));
    CHECK_THROWS_AS(stats::two_prop_pvalue(3, 0, 1, 5), ValidationError);
}

TEST_CASE("circular median test") {
    const auto angle = [](int month) { return stats::month_to_angle(month); };
    SUBCASE("identical month multisets") {
        std::vector<double> g;
        for (int m = 1; m <= 12; ++m) {
            g.push_back(angle(m));
            g.push_back(angle(m));
        }
        const auto r = stats::circular_median_test({g, g});
        CHECK_FALSE(r.degenerate);
        CHECK(r.statistic == doctest::Approx(0.0));
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    SUBCASE("january versus july is detected") {
        const std::vector<double> jan(12, angle(1));
        const std::vector<double> jul(12, angle(7));
        const auto r = stats::circular_median_test({jan, jul});
        CHECK_FALSE(r.degenerate);
        CHECK(r.p_value < 0.001);
    }
    SUBCASE("p-value invariant under a common rotation") {
        std::mt19937 rng(31);
        std::uniform_int_distribution<int> month(1, 12);
        std::vector<double> g1, g2;
        for (int i = 0; i < 40; ++i) g1.push_back(angle(month(rng)));
        for (int i = 0; i < 55; ++i) g2.push_back(angle(month(rng) <= 6 ? month(rng) : month(rng)));
        const auto base = stats::circular_median_test({g1, g2});
        REQUIRE_FALSE(base.degenerate);
        for (double rot : {0.37, 1.91, 4.44}) {
            auto r1 = g1, r2 = g2;
            for (auto& a : r1) a += rot;
            for (auto& a : r2) a += rot;
            const auto rotated = stats::circular_median_test({r1, r2});
            CHECK(rotated.p_value == doctest::Approx(base.p_value).epsilon(1e-9));
        }
    }
    SUBCASE("all observations at the median is degenerate") {
        const std::vector<double> g1(8, angle(3));
        const std::vector<double> g2(8, angle(3));
        const auto r = stats::circular_median_test({g1, g2});
        CHECK(r.degenerate);
        CHECK(std::isnan(r.p_value));
    }
}

TEST_CASE("balance table layout") {
    const std::size_t n = 40;
    std::vector<int> w(2 * n, 0);
    std::vector<double> e(2 * n), temp(2 * n), weekend(2 * n), month(2 * n);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        w[i] = i < n ? 1 : 0;
        e[i] = 0.3 + 0.4 * u(rng);
        temp[i] = 10 + 12 * u(rng);
        weekend[i] = u(rng) < 0.3 ? 1 : 0;
        month[i] = 1 + static_cast<int>(u(rng) * 11.99);
    }
    const auto m = self_inverse_map(n);
    const std::vector<BalanceCovariate> covs = {
        {"temperature_lag", CovariateKind::continuous, temp},
        {"weekend", CovariateKind::binary, weekend},
        {"calendar_month", CovariateKind::circular_month, month},
    };
    const auto rows = balance_table(covs, e, w, m);
    REQUIRE(rows.size() == covs.size() + 1);
    CHECK(rows[0].name == "propensity_score");
    for (const auto& r : rows) {
        if (!std::isnan(r.p_pre)) {
            CHECK(r.p_pre >= 0.0);
            CHECK(r.p_pre <= 1.0);
        }
        if (!std::isnan(r.p_post)) {
            CHECK(r.p_post >= 0.0);
            CHECK(r.p_post <= 1.0);
        }
    }

    // degenerate map: every treated day matched to a control with an
    // identical covariate copy
    std::vector<double> mirrored(temp);
    for (std::size_t i = 0; i < n; ++i) mirrored[n + i] = temp[i];
    const auto rows2 = balance_table({{"x", CovariateKind::continuous, mirrored}}, e, w, m);
    CHECK(*rows2[1].delta_post == doctest::Approx(0.0));
}

TEST_CASE("null-simulation Welch p-values are close to uniform") {
    std::mt19937 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> pvals;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> a(30), b(35);
        for (auto& v : a) v = gauss(rng);
        for (auto& v : b) v = gauss(rng);
        pvals.push_back(stats::welch_t_pvalue(a, b));
    }
    std::sort(pvals.begin(), pvals.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < pvals.size(); ++i) {
        const double ecdf_hi = static_cast<double>(i + 1) / pvals.size();
        const double ecdf_lo = static_cast<double>(i) / pvals.size();
        ks = std::max({ks, std::abs(ecdf_hi - pvals[i]), std::abs(pvals[i] - ecdf_lo)});
    }
    CHECK(ks < 0.1);
}
