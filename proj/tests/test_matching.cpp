#include "admatch/errors.hpp"
#include "admatch/matching.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace admatch;

TEST_CASE("unique argmin is matched") {
    const std::vector<double> e = {0.9, 0.2, 0.85};
    const std::vector<int> w = {1, 0, 0};
    const auto m = nn_match(e, w);
    CHECK(m.pairs.at(0) == 2);
    CHECK(m.k[2] == 1);
    CHECK(m.k[1] == 0);
}

TEST_CASE("exact ties go to the earlier day") {
    // 0.375 and 0.625 are both exactly representable: distances to 0.5 tie
    const std::vector<double> e = {0.5, 0.625, 0.375};
    const std::vector<int> w = {1, 0, 0};
    const auto m = nn_match(e, w);
    CHECK(m.pairs.at(0) == 1);

    const std::vector<double> e2 = {0.5, 0.375, 0.625};
    const auto m2 = nn_match(e2, w);
    CHECK(m2.pairs.at(0) == 1);
}

TEST_CASE("replacement lets one control serve many treated days") {
    const std::vector<double> e = {0.8, 0.9, 0.5, 0.1};
    const std::vector<int> w = {1, 1, 0, 0};
    const auto m = nn_match(e, w);
    CHECK(m.pairs.at(0) == 2);
    CHECK(m.pairs.at(1) == 2);
    CHECK(m.k[2] == 2);
}

TEST_CASE("no controls is an error") {
    CHECK_THROWS_AS(nn_match({0.5, 0.6}, {1, 1}), ValidationError);
}

TEST_CASE("matcher equals the exhaustive oracle on random instances") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 50 + static_cast<std::size_t>(trial) * 7;
        std::bernoulli_distribution treat(0.4);
        // quantize scores so exact ties actually occur
        std::uniform_int_distribution<int> grid(0, 40);
        std::vector<double> e(n);
        std::vector<int> w(n);
        bool any_control = false;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = static_cast<double>(grid(rng)) / 40.0;
            w[i] = treat(rng) ? 1 : 0;
            any_control = any_control || w[i] == 0;
        }
        if (!any_control) w[0] = 0;
        const auto fast = nn_match(e, w);
        const auto brute = testoracle::nn_match_bruteforce(e, w);
        CHECK(fast.pairs == brute.pairs);
        CHECK(fast.k == brute.k);
    }
}

TEST_CASE("matching is deterministic") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(300);
    std::vector<int> w(300);
    for (std::size_t i = 0; i < 300; ++i) {
        e[i] = u(rng);
        w[i] = (i % 3 == 0) ? 1 : 0;
    }
    const auto a = nn_match(e, w);
    const auto b = nn_match(e, w);
    CHECK(a.pairs == b.pairs);
    CHECK(a.k == b.k);
}

TEST_CASE("a strictly closer new control takes over only the affected pair") {
    std::vector<double> e = {0.50, 0.40, 0.90, 0.30};
    std::vector<int> w = {1, 0, 1, 0};
    const auto before = nn_match(e, w);
    CHECK(before.pairs.at(0) == 1);
    CHECK(before.pairs.at(2) == 1);

    // insert a control closer to treated day 2 than any existing one
    e.push_back(0.88);
    w.push_back(0);
    const auto after = nn_match(e, w);
    CHECK(after.pairs.at(2) == 4);
    CHECK(after.pairs.at(0) == 1); // unaffected argmin unchanged
}

TEST_CASE("multiplicity histogram balances mass") {
    SUBCASE("no treated days") {
        MatchMap m;
        m.k.assign(5, 0);
        const auto hist = match_multiplicity(m, 5);
        CHECK(hist.at(0) == 5);
    }
    SUBCASE("three treated on one control") {
        const std::vector<double> e = {0.5, 0.52, 0.48, 0.5, 0.1, 0.9};
        const std::vector<int> w = {1, 1, 1, 0, 0, 0};
        const auto m = nn_match(e, w);
        const auto hist = match_multiplicity(m, 3);
        CHECK(hist.at(3) == 1);
        CHECK(hist.at(0) == 2);
    }
    SUBCASE("random instance recount") {
        std::mt19937 rng(123);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> e(200);
        std::vector<int> w(200);
        std::size_t n_controls = 0, n_treated = 0;
        for (std::size_t i = 0; i < 200; ++i) {
            e[i] = u(rng);
            w[i] = u(rng) < 0.45 ? 1 : 0;
            (w[i] ? n_treated : n_controls) += 1;
        }
        const auto m = nn_match(e, w);
        const auto hist = match_multiplicity(m, n_controls);
        long mass = 0, controls = 0;
        for (const auto& [k, count] : hist) {
            mass += static_cast<long>(k) * count;
            controls += count;
        }
        CHECK(mass == static_cast<long>(n_treated));
        CHECK(controls == static_cast<long>(n_controls));
    }
}

TEST_CASE("overlap diagnostics flag distant treated days") {
    SUBCASE("dense controls, no flags") {
        std::vector<double> e;
        std::vector<int> w;
        for (int i = 0; i <= 100; ++i) {
            e.push_back(static_cast<double>(i) / 100.0);
            w.push_back(0);
        }
        e.push_back(0.505);
        w.push_back(1);
        const auto report = overlap_check(e, w, 0.1);
        CHECK(report.flagged.empty());
    }
    SUBCASE("treated far beyond control support") {
        const std::vector<double> e = {0.99, 0.70, 0.60};
        const std::vector<int> w = {1, 0, 0};
        const auto report = overlap_check(e, w, 0.1);
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0] == 0);
        CHECK(report.treated_max == doctest::Approx(0.99));
        CHECK(report.control_max == doctest::Approx(0.70));
    }
    SUBCASE("infinite caliper never flags") {
        const std::vector<double> e = {0.99, 0.01};
        const std::vector<int> w = {1, 0};
        const auto report = overlap_check(e, w, std::numeric_limits<double>::infinity());
        CHECK(report.flagged.empty());
    }
}
